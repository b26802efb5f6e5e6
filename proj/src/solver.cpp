#include "vestokes/solver.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/IterativeLinearSolvers>
#include <umfpack.h>

#include "vestokes/errors.hpp"

namespace vestokes {

namespace {

void gauge(const SaddleSystem& sys, Vector& p) { p.array() -= sys.m.dot(p) / sys.m.sum(); }

using LongSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, SuiteSparse_long>;

/// Owns UMFPACK symbolic and numeric objects for one matrix.
class Umfpack {
public:
    explicit Umfpack(const SparseMatrix& a) : a_(a) {
        a_.makeCompressed();
        umfpack_dl_defaults(control_);
        control_[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
        const SuiteSparse_long n = a_.rows();
        status_ = umfpack_dl_symbolic(n, n, a_.outerIndexPtr(), a_.innerIndexPtr(), a_.valuePtr(), &symbolic_,
                                      control_, info_);
        if (status_ == UMFPACK_OK)
            status_ = umfpack_dl_numeric(a_.outerIndexPtr(), a_.innerIndexPtr(), a_.valuePtr(), symbolic_, &numeric_,
                                         control_, info_);
    }
    Umfpack(const Umfpack&) = delete;
    Umfpack& operator=(const Umfpack&) = delete;
    ~Umfpack() {
        if (numeric_) umfpack_dl_free_numeric(&numeric_);
        if (symbolic_) umfpack_dl_free_symbolic(&symbolic_);
    }

    SuiteSparse_long status() const { return status_; }

    Vector solve(const Vector& b) {
        Vector x(b.size());
        const SuiteSparse_long st = umfpack_dl_solve(UMFPACK_A, a_.outerIndexPtr(), a_.innerIndexPtr(), a_.valuePtr(),
                                                     x.data(), b.data(), numeric_, control_, info_);
        if (st != UMFPACK_OK) throw FactorizationFailure("UMFPACK solve failed with status " + std::to_string(st));
        return x;
    }

    /// Sign and log10 of |det|.
    std::pair<int, double> determinant() {
        double mx = 0.0, ex = 0.0;
        umfpack_dl_get_determinant(&mx, &ex, numeric_, info_);
        return {mx > 0.0 ? 1 : (mx < 0.0 ? -1 : 0), std::log10(std::abs(mx)) + ex};
    }

    Eigen::Index factor_nonzeros() {
        SuiteSparse_long lnz = 0, unz = 0, rows = 0, cols = 0, udiag = 0;
        umfpack_dl_get_lunz(&lnz, &unz, &rows, &cols, &udiag, numeric_);
        return static_cast<Eigen::Index>(lnz + unz);
    }

private:
    LongSparse a_;
    double control_[UMFPACK_CONTROL];
    double info_[UMFPACK_INFO];
    void* symbolic_ = nullptr;
    void* numeric_ = nullptr;
    SuiteSparse_long status_ = UMFPACK_OK;
};

SolveResult zero_result(const SaddleSystem& sys, const std::string& method) {
    SolveResult r;
    r.u = Vector::Zero(sys.nu());
    r.p = Vector::Zero(sys.np());
    r.stats.method = method;
    r.stats.positive = sys.nu() + 1;
    r.stats.negative = sys.np();
    return r;
}

}  // namespace

double kkt_residual(const SaddleSystem& sys, const Vector& u, const Vector& p) {
    const double fn = sys.F.norm();
    const Vector r1 = sys.F - sys.K * u - sys.G.transpose() * p;
    const Vector r2 = sys.G * u;
    const double r3 = sys.m.dot(p);
    const double rn = std::sqrt(r1.squaredNorm() + r2.squaredNorm() + r3 * r3);
    return fn > 0.0 ? rn / fn : rn;
}

double first_eigenvalue(const Vec3& lengths) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return pi2 * (1.0 / (lengths[0] * lengths[0]) + 1.0 / (lengths[1] * lengths[1]) + 1.0 / (lengths[2] * lengths[2]));
}

SolveResult solve(const SaddleSystem& sys, const SolveOptions& opts) {
    SolveResult res = zero_result(sys, "umfpack-lu");
    const SparseMatrix a = sys.kkt();
    res.stats.rows = a.rows();
    res.stats.nonzeros = a.nonZeros();
    if (sys.F.norm() == 0.0) return res;

    Umfpack lu(a);
    if (lu.status() != UMFPACK_OK) {
        std::ostringstream os;
        os << "KKT factorization failed with UMFPACK status " << lu.status() << "; expected inertia ("
           << res.stats.positive << ", " << res.stats.negative << ", 0)";
        throw FactorizationFailure(os.str());
    }
    res.stats.factor_nonzeros = lu.factor_nonzeros();
    const auto [sign, log_det] = lu.determinant();
    res.stats.sign_det = sign;
    res.stats.log_abs_det = log_det * std::log(10.0);
    const int expected_sign = res.stats.negative % 2 == 0 ? 1 : -1;
    if (res.stats.sign_det != expected_sign) {
        std::ostringstream os;
        os << "KKT determinant sign " << res.stats.sign_det << " contradicts inertia (" << res.stats.positive << ", "
           << res.stats.negative << ", 0)";
        throw FactorizationFailure(os.str());
    }

    const Vector b = sys.kkt_rhs();
    Vector x = lu.solve(b);
    const double bn = b.norm();
    double rel = (b - a * x).norm() / bn;
    while (rel > opts.tol && res.stats.refinements < opts.max_refinements) {
        x += lu.solve(b - a * x);
        rel = (b - a * x).norm() / bn;
        ++res.stats.refinements;
    }
    res.u = x.head(sys.nu());
    res.p = x.segment(sys.nu(), sys.np());
    gauge(sys, res.p);
    res.residual = kkt_residual(sys, res.u, res.p);
    if (!(res.residual <= opts.tol)) {
        std::ostringstream os;
        os << "relative KKT residual " << res.residual << " exceeds " << opts.tol;
        throw ResidualTooLarge(os.str());
    }
    return res;
}

SolveResult uzawa_solve(const SaddleSystem& sys, const UzawaOptions& opts) {
    SolveResult res = zero_result(sys, "uzawa-cg");
    res.stats.rows = sys.nu() + sys.np() + 1;
    res.stats.nonzeros = sys.K.nonZeros() + 2 * sys.G.nonZeros() + 2 * sys.np();
    if (sys.F.norm() == 0.0) {
        res.stats.outer_iterations = 1;
        return res;
    }

    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(opts.inner_tol);
    cg.setMaxIterations(opts.inner_max_iterations);
    cg.compute(sys.K);
    auto kinv = [&](const Vector& rhs) {
        Vector y = cg.solve(rhs);
        res.stats.inner_iterations += cg.iterations();
        if (cg.info() != Eigen::Success) {
            std::ostringstream os;
            os << "inner CG stopped at relative residual " << cg.error() << " after " << cg.iterations()
               << " iterations";
            throw MaxIterations(os.str());
        }
        return y;
    };
    auto schur = [&](const Vector& q) { return Vector(sys.G * kinv(sys.G.transpose() * q)); };

    const Vector minv = sys.m.cwiseInverse();
    const Vector b = sys.G * kinv(sys.F);
    const double bn = b.norm();
    Vector p = Vector::Zero(sys.np());
    if (bn > 0.0) {
        Vector r = b;
        Vector z = minv.cwiseProduct(r);
        Vector d = z;
        double rz = r.dot(z);
        bool converged = false;
        for (int it = 0; it < opts.max_iterations; ++it) {
            res.stats.outer_iterations = it + 1;
            const Vector sd = schur(d);
            const double step = rz / d.dot(sd);
            p += step * d;
            r -= step * sd;
            if (r.norm() < opts.tol * bn) {
                converged = true;
                break;
            }
            z = minv.cwiseProduct(r);
            const double rz_new = r.dot(z);
            d = z + (rz_new / rz) * d;
            rz = rz_new;
        }
        if (!converged) {
            std::ostringstream os;
            os << "Schur CG did not reach " << opts.tol << " in " << opts.max_iterations << " iterations";
            throw MaxIterations(os.str());
        }
    } else {
        res.stats.outer_iterations = 1;
    }
    gauge(sys, p);
    res.u = kinv(sys.F - sys.G.transpose() * p);
    res.p = p;
    res.residual = kkt_residual(sys, res.u, res.p);
    return res;
}

}  // namespace vestokes
