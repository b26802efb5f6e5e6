#pragma once

#include <functional>
#include <vector>

#include <Eigen/Sparse>

#include "vestokes/field.hpp"
#include "vestokes/mesh.hpp"
#include "vestokes/quadrature.hpp"

namespace vestokes {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;
using ScalarFn = std::function<double(const Vec3&)>;
using MatrixFn = std::function<Mat3(const Vec3&)>;

struct AssemblyOptions {
    /// Points per direction of the conical rule (3: degree 5).
    int quad_points = 3;
    int threads = 1;
    /// Rule for the load vector alone; 0 uses quad_points.
    int load_quad_points = 0;
};

/// Coefficient samples taken at the assembly quadrature points.
struct CoefficientStats {
    /// min over points of lambda_min(A(B(x))).
    double alpha = 0.0;
    Vec3 alpha_point{0.0, 0.0, 0.0};
    /// max over points of the spectral norm of A.
    double a_norm = 0.0;
    /// max over points of max |A_ij|.
    double a_max_entry = 0.0;
    std::size_t samples = 0;
};

/// Discrete form of: find (v, p) with
///   int (D(v)A + AD(v)) : grad w - int p div w = int f . w,   int q div v = 0,
/// plus the gauge int p = 0. Dirichlet velocity dofs carry identity rows and
/// columns in K, zero load and zero columns in G.
struct SaddleSystem {
    SparseMatrix K;  // nu x nu
    SparseMatrix G;  // np x nu, entries -int q div phi
    Vector F;        // nu
    Vector m;        // np, int q
    std::vector<char> dirichlet;
    CoefficientStats coeff;
    int quad_points = 3;

    Eigen::Index nu() const { return K.rows(); }
    Eigen::Index np() const { return G.rows(); }
    /// [K G^t 0; G 0 m; 0 m^t 0].
    SparseMatrix kkt() const;
    Vector kkt_rhs() const;
};

/// Throws NotElliptic when alpha <= 0 at some quadrature point, NotSPD when
/// B is not positive definite there, SingularTensor from the inverse.
SaddleSystem assemble(const TaylorHoodSpace& space, const MuFields& mu, const TensorField& b, const VectorFn& f,
                      const AssemblyOptions& opts = {});

/// Physical quadrature points of the rule used by assemble.
std::vector<Vec3> quadrature_points(const BoxMesh& mesh, int quad_points);

/// Squared seminorms |D(v)|^2, |grad v|^2, |div v|^2 of the discrete field.
struct KornTerms {
    double sym = 0.0;
    double grad = 0.0;
    double div = 0.0;
};

/// BCViolation when u is nonzero on a Dirichlet dof.
KornTerms korn_terms(const TaylorHoodSpace& space, const Vector& u);

/// L2 norm of a vector function over the mesh (conical rule with n points).
double l2_norm(const BoxMesh& mesh, const VectorFn& f, int quad_points = 4);

/// Discrete solution value and gradient at a reference point of element t.
Vec3 eval_velocity(const TaylorHoodSpace& space, const Vector& u, std::size_t t, const Vec3& ref);

/// Error norms against an exact solution. Pressure error is measured modulo
/// constants.
struct ErrorNorms {
    double v_l2 = 0.0;
    double v_h1 = 0.0;  // gradient seminorm
    double p_l2 = 0.0;
};

/// Norms of a discrete solution: |grad v_h|, the broken |D^2 v_h| (each
/// multi-index once), |p_h| modulo constants and |grad p_h|.
struct DiscreteNorms {
    double grad_v = 0.0;
    double d2v = 0.0;
    double p_l2 = 0.0;
    double grad_p = 0.0;
};

DiscreteNorms discrete_norms(const TaylorHoodSpace& space, const Vector& u, const Vector& p);

ErrorNorms error_norms(const TaylorHoodSpace& space, const Vector& u, const Vector& p, const VectorFn& v_exact,
                       const MatrixFn& grad_exact, const ScalarFn& p_exact, int quad_points = 4);

}  // namespace vestokes
