#include "vestokes/sampling.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace vestokes {

namespace {

Eigen::Matrix3d to_eigen(const Mat3& m) {
    Eigen::Matrix3d e;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) e(i, j) = m(i, j);
    return e;
}

Mat3 from_eigen(const Eigen::Matrix3d& e) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = e(i, j);
    return m;
}

SymTensor3 congruence(const Mat3& e, const SymTensor3& b) {
    return symmetrize(e * b.to_mat() * e.transpose());
}

}  // namespace

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Mat3 random_rotation(Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::Matrix3d g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = n(rng);
    Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
    Eigen::Matrix3d q = qr.householderQ();
    const Eigen::Matrix3d r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < 3; ++j)
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    if (q.determinant() < 0.0) q.col(0) *= -1.0;
    return from_eigen(q);
}

SymTensor3 random_spd(Rng& rng, double cond, bool unimodular) {
    const double span = std::log(cond);
    double l[3];
    for (double& v : l) v = std::exp(uniform(rng, -0.5 * span, 0.5 * span));
    if (unimodular) {
        const double s = std::cbrt(l[0] * l[1] * l[2]);
        for (double& v : l) v /= s;
    }
    const Mat3 q = random_rotation(rng);
    Mat3 d;
    for (int i = 0; i < 3; ++i) d(i, i) = l[i];
    return symmetrize(q * d * q.transpose());
}

SymTensor3 random_symmetric(Rng& rng, double scale) {
    SymTensor3 s;
    for (int k = 0; k < 6; ++k) s.slot(k) = uniform(rng, -scale, scale);
    return s;
}

Mat3 random_matrix(Rng& rng, double scale) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = uniform(rng, -scale, scale);
    return m;
}

Mat3 random_traceless(Rng& rng, double scale) {
    Mat3 m = random_matrix(rng, scale);
    const double t = m.trace() / 3.0;
    for (int i = 0; i < 3; ++i) m(i, i) -= t;
    return m;
}

Mat3 expm(const Mat3& x) { return from_eigen(to_eigen(x).exp()); }

SymTensor3 UnimodularPath::at(double s, double t) const { return congruence(expm(x * s + y * t), b0); }

SymTensor3 UnimodularPath::ds() const {
    const Mat3 b = b0.to_mat();
    return symmetrize(x * b + b * x.transpose());
}

SymTensor3 UnimodularPath::dt() const {
    const Mat3 b = b0.to_mat();
    return symmetrize(y * b + b * y.transpose());
}

SymTensor3 UnimodularPath::dss() const {
    const Mat3 b = b0.to_mat();
    const Mat3 xt = x.transpose();
    return symmetrize(x * x * b + 2.0 * (x * b * xt) + b * xt * xt);
}

SymTensor3 UnimodularPath::dst() const {
    const Mat3 b = b0.to_mat();
    const Mat3 h = 0.5 * (x * y + y * x);
    return symmetrize(h * b + b * h.transpose() + x * b * y.transpose() + y * b * x.transpose());
}

UnimodularPath random_unimodular_path(Rng& rng, double cond) {
    UnimodularPath p;
    p.b0 = random_spd(rng, cond, true);
    p.x = random_traceless(rng, 0.5);
    p.y = random_traceless(rng, 0.5);
    return p;
}

MuTriple random_admissible_mu(Rng& rng) {
    for (;;) {
        MuTriple mu{uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0), uniform(rng, -3.0, 3.0)};
        if (mu.thermodynamic()) return mu;
    }
}

}  // namespace vestokes
