#pragma once

#include <string>

#include "vestokes/assembly.hpp"

namespace vestokes {

struct FactorizationStats {
    std::string method;
    Eigen::Index rows = 0;
    Eigen::Index nonzeros = 0;
    /// Nonzeros of the L and U factors (direct solve only).
    Eigen::Index factor_nonzeros = 0;
    /// Inertia of the KKT matrix: nu + 1 positive, np negative.
    Eigen::Index positive = 0;
    Eigen::Index negative = 0;
    int sign_det = 0;
    double log_abs_det = 0.0;
    int refinements = 0;
    int outer_iterations = 0;
    long inner_iterations = 0;
};

struct SolveResult {
    Vector u;
    /// Zero m-weighted mean.
    Vector p;
    /// ||r|| / ||F|| for the full KKT system.
    double residual = 0.0;
    FactorizationStats stats;
};

struct SolveOptions {
    double tol = 1e-10;
    int max_refinements = 3;
};

/// Sparse LU (UMFPACK, symmetric strategy) of the full KKT matrix. The sign of the
/// determinant is checked against the inertia (nu + 1, np, 0) implied by a
/// positive definite K and an inf-sup stable pair.
SolveResult solve(const SaddleSystem& sys, const SolveOptions& opts = {});

struct UzawaOptions {
    double tol = 1e-10;
    int max_iterations = 1000;
    double inner_tol = 1e-13;
    int inner_max_iterations = 20000;
};

/// Preconditioned CG on the pressure Schur complement G K^{-1} G^t with the
/// lumped pressure mass as preconditioner and Jacobi-CG inner solves.
/// MaxIterations when either loop fails to reach its tolerance.
SolveResult uzawa_solve(const SaddleSystem& sys, const UzawaOptions& opts = {});

/// Relative KKT residual of (u, p, lambda = 0).
double kkt_residual(const SaddleSystem& sys, const Vector& u, const Vector& p);

/// First Dirichlet eigenvalue of -Laplace on the box.
double first_eigenvalue(const Vec3& lengths);

}  // namespace vestokes
