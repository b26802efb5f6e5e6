#pragma once

#include <array>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vestokes/assembly.hpp"
#include "vestokes/expression.hpp"
#include "vestokes/solver.hpp"

namespace vestokes {

using ExprVec = std::array<Expr, 3>;
using ExprTensor = std::array<Expr, 6>;  // slot order a11 a22 a33 a12 a13 a23

/// Manufactured solution: divergence-free velocity vanishing on the box
/// boundary, zero-mean pressure, coefficients.
struct MMSCase {
    std::string name;
    Vec3 lengths{1.0, 1.0, 1.0};
    ExprVec v;
    Expr p;
    std::array<Expr, 3> mu{Expr(1.0), Expr(0.0), Expr(0.0)};
    ExprTensor b{Expr(1.0), Expr(1.0), Expr(1.0), Expr(0.0), Expr(0.0), Expr(0.0)};

    MuFields mu_fields() const;
    TensorField b_field() const;
    VectorFn velocity() const;
    MatrixFn velocity_gradient() const;
    ScalarFn pressure() const;
};

/// Curl of (psi, psi, psi) with psi = (x(1-x)y(1-y)z(1-z))^2, p = cos(pi x),
/// A = I.
MMSCase classical_case();

/// Same velocity and pressure with mu = (1, 1, 1) and a smooth unimodular
/// sheared stretch B.
MMSCase anisotropic_case();

/// Zero velocity and pressure.
MMSCase zero_case();

/// Shipped cases by name: classical, anisotropic, zero. ConfigError otherwise.
MMSCase mms_case(const std::string& name);
std::vector<std::string> mms_case_names();

/// mu1 I + mu2 B + mu3 adj(B) / det(B) as expressions.
ExprTensor acal_expr(const std::array<Expr, 3>& mu, const ExprTensor& b);

/// f = -div(D(v)A + AD(v)) + grad p.
ExprVec mms_forcing(const MMSCase& c);

std::array<ScalarField, 3> to_fields(const ExprVec& e);

struct ConvergenceOptions {
    int quad_points = 3;
    int load_quad_points = 0;
    int error_quad_points = 4;
    int threads = 1;
    bool uzawa = false;
    SolveOptions solve;
    UzawaOptions uzawa_opts;
};

struct ConvergenceRow {
    int n = 0;
    double h = 0.0;
    Eigen::Index nu = 0;
    Eigen::Index np = 0;
    double alpha = 0.0;
    double residual = 0.0;
    ErrorNorms errors;
    /// log2(e(h)/e(h/2)) against the previous row.
    std::optional<double> rate_v_l2, rate_v_h1, rate_p_l2;
};

struct ConvergenceTable {
    std::string case_name;
    std::vector<ConvergenceRow> rows;

    /// Lowest observed rate per error, empty for a single mesh.
    std::optional<double> min_rate_v_l2() const;
    std::optional<double> min_rate_v_h1() const;
    std::optional<double> min_rate_p_l2() const;
    void write_csv(std::ostream& out) const;
};

/// Observed rate log2(e_coarse / e_fine) for meshes differing by a factor 2.
double observed_rate(double coarse, double fine);

/// Called once per mesh level after the solve.
using LevelHook = std::function<void(const TaylorHoodSpace&, const SaddleSystem&, const SolveResult&)>;

/// Solves the case on n^3 meshes for each n and tabulates errors. Rates are
/// reported between consecutive entries of `meshes`, which must double.
ConvergenceTable run_convergence(const MMSCase& c, const std::vector<int>& meshes, const ConvergenceOptions& opts = {},
                                 const LevelHook& hook = {});

}  // namespace vestokes
