#include "vestokes/quadrature.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "vestokes/errors.hpp"

namespace vestokes {

Rule1D gauss_jacobi01(int n, int a) {
    if (n < 1) throw DomainError("quadrature needs at least one point");
    // Golub-Welsch on [-1, 1] with weight (1 - x)^a, mapped to [0, 1].
    const double al = a, be = 0.0;
    Eigen::MatrixXd jm = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + al + be;
        jm(k, k) = (k == 0) ? (be - al) / (al + be + 2.0) : (be * be - al * al) / (s * (s + 2.0));
        if (k + 1 < n) {
            const double m = k + 1;
            const double t = 2.0 * m + al + be;
            const double b2 = 4.0 * m * (m + al) * (m + be) * (m + al + be) / (t * t * (t + 1.0) * (t - 1.0));
            jm(k, k + 1) = jm(k + 1, k) = std::sqrt(b2);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jm);
    const double mu0 = std::pow(2.0, al + be + 1.0) * std::tgamma(al + 1.0) * std::tgamma(be + 1.0) /
                       std::tgamma(al + be + 2.0);
    const double scale = std::pow(0.5, al + 1.0);
    Rule1D r;
    for (int k = 0; k < n; ++k) {
        const double v0 = es.eigenvectors()(0, k);
        r.points.push_back(0.5 * (1.0 + es.eigenvalues()(k)));
        r.weights.push_back(mu0 * v0 * v0 * scale);
    }
    return r;
}

TetRule tet_rule(int n) {
    const Rule1D ru = gauss_jacobi01(n, 0), rv = gauss_jacobi01(n, 1), rw = gauss_jacobi01(n, 2);
    TetRule t;
    t.degree = 2 * n - 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double u = ru.points[i], v = rv.points[j], w = rw.points[k];
                t.points.push_back({u * (1.0 - v) * (1.0 - w), v * (1.0 - w), w});
                t.weights.push_back(ru.weights[i] * rv.weights[j] * rw.weights[k]);
            }
    return t;
}

TetRule tet_rule_for_degree(int degree) { return tet_rule(std::max(1, (degree + 2) / 2)); }

SampleSet gauss_box(const std::array<int, 3>& cells, int order, const Vec3& lengths) {
    if (cells[0] < 1 || cells[1] < 1 || cells[2] < 1) throw InvalidDimensions("gauss_box needs at least one cell");
    const Rule1D g = gauss_jacobi01(order, 0);
    std::array<std::vector<double>, 3> pts, wts;
    for (int a = 0; a < 3; ++a) {
        const double h = lengths[a] / cells[a];
        for (int c = 0; c < cells[a]; ++c)
            for (int q = 0; q < order; ++q) {
                pts[a].push_back((c + g.points[q]) * h);
                wts[a].push_back(g.weights[q] * h);
            }
    }
    SampleSet s;
    s.points.reserve(pts[0].size() * pts[1].size() * pts[2].size());
    s.weights.reserve(s.points.capacity());
    for (std::size_t i = 0; i < pts[0].size(); ++i)
        for (std::size_t j = 0; j < pts[1].size(); ++j)
            for (std::size_t k = 0; k < pts[2].size(); ++k) {
                s.points.push_back({pts[0][i], pts[1][j], pts[2][k]});
                s.weights.push_back(wts[0][i] * wts[1][j] * wts[2][k]);
            }
    return s;
}

}  // namespace vestokes
