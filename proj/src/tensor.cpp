#include "vestokes/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vestokes/errors.hpp"

namespace vestokes {

// ---------------------------------------------------------------- Mat3

Mat3 Mat3::identity() {
    Mat3 r;
    r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
    return r;
}

Mat3 Mat3::outer(const Vec3& xi, const Vec3& eta) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[i][j] = xi[i] * eta[j];
    return r;
}

Mat3 Mat3::transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
}

double Mat3::det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double Mat3::max_abs() const {
    double r = 0.0;
    for (const auto& row : m)
        for (double v : row) r = std::max(r, std::abs(v));
    return r;
}

Mat3& Mat3::operator+=(const Mat3& o) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] += o.m[i][j];
    return *this;
}

Mat3& Mat3::operator-=(const Mat3& o) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] -= o.m[i][j];
    return *this;
}

Mat3& Mat3::operator*=(double s) {
    for (auto& row : m)
        for (double& v : row) v *= s;
    return *this;
}

Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
Mat3 operator-(Mat3 a, const Mat3& b) { return a -= b; }
Mat3 operator*(Mat3 a, double s) { return a *= s; }
Mat3 operator*(double s, Mat3 a) { return a *= s; }

Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j] + a.m[i][2] * b.m[2][j];
    return r;
}

Vec3 operator*(const Mat3& a, const Vec3& v) {
    return {a.m[0][0] * v[0] + a.m[0][1] * v[1] + a.m[0][2] * v[2],
            a.m[1][0] * v[0] + a.m[1][1] * v[1] + a.m[1][2] * v[2],
            a.m[2][0] * v[0] + a.m[2][1] * v[1] + a.m[2][2] * v[2]};
}

double contract(const Mat3& a, const Mat3& b) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += a.m[i][j] * b.m[i][j];
    return s;
}

// ---------------------------------------------------------------- SymTensor3

SymTensor3 SymTensor3::from_symmetric(const Mat3& m) {
    return {m(0, 0), m(1, 1), m(2, 2), m(0, 1), m(0, 2), m(1, 2)};
}

double SymTensor3::operator()(int i, int j) const {
    if (i == j) return i == 0 ? a11 : (i == 1 ? a22 : a33);
    const int s = i + j;  // (0,1)->1, (0,2)->2, (1,2)->3
    return s == 1 ? a12 : (s == 2 ? a13 : a23);
}

Mat3 SymTensor3::to_mat() const {
    Mat3 r;
    r.m = {{{a11, a12, a13}, {a12, a22, a23}, {a13, a23, a33}}};
    return r;
}

double SymTensor3::det() const {
    return a11 * (a22 * a33 - a23 * a23) - a12 * (a12 * a33 - a23 * a13) + a13 * (a12 * a23 - a22 * a13);
}

double SymTensor3::max_abs() const {
    return std::max({std::abs(a11), std::abs(a22), std::abs(a33), std::abs(a12), std::abs(a13), std::abs(a23)});
}

double SymTensor3::norm() const { return std::sqrt(contract(*this, *this)); }

double& SymTensor3::slot(int k) {
    switch (k) {
        case 0: return a11;
        case 1: return a22;
        case 2: return a33;
        case 3: return a12;
        case 4: return a13;
        default: return a23;
    }
}

double SymTensor3::slot(int k) const { return const_cast<SymTensor3*>(this)->slot(k); }

SymTensor3& SymTensor3::operator+=(const SymTensor3& o) {
    for (int k = 0; k < 6; ++k) slot(k) += o.slot(k);
    return *this;
}

SymTensor3& SymTensor3::operator-=(const SymTensor3& o) {
    for (int k = 0; k < 6; ++k) slot(k) -= o.slot(k);
    return *this;
}

SymTensor3& SymTensor3::operator*=(double s) {
    for (int k = 0; k < 6; ++k) slot(k) *= s;
    return *this;
}

SymTensor3 operator+(SymTensor3 a, const SymTensor3& b) { return a += b; }
SymTensor3 operator-(SymTensor3 a, const SymTensor3& b) { return a -= b; }
SymTensor3 operator*(SymTensor3 a, double s) { return a *= s; }
SymTensor3 operator*(double s, SymTensor3 a) { return a *= s; }

double contract(const SymTensor3& a, const SymTensor3& b) {
    return a.a11 * b.a11 + a.a22 * b.a22 + a.a33 * b.a33 + 2.0 * (a.a12 * b.a12 + a.a13 * b.a13 + a.a23 * b.a23);
}

double contract(const SymTensor3& a, const Mat3& b) { return contract(a.to_mat(), b); }

// ---------------------------------------------------------------- invariants, spectra

Invariants3 invariants(const SymTensor3& b) {
    const Mat3 bm = b.to_mat();
    const double tr = b.trace();
    const double tr2 = (bm * bm).trace();
    return {tr, 0.5 * (tr * tr - tr2), b.det()};
}

EigenTriple eig_sym3_jacobi(const SymTensor3& b) {
    Mat3 a = b.to_mat();
    for (int sweep = 0; sweep < 64; ++sweep) {
        const double off = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
        if (off == 0.0) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // A <- J^t A J with the Givens rotation in the (p,q) plane.
                for (int k = 0; k < 3; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
            }
        }
    }
    std::array<double, 3> d{a(0, 0), a(1, 1), a(2, 2)};
    std::sort(d.begin(), d.end());
    return {d[0], d[1], d[2]};
}

EigenTriple eig_sym3(const SymTensor3& b) {
    if (b.a12 == 0.0 && b.a13 == 0.0 && b.a23 == 0.0) {
        std::array<double, 3> d{b.a11, b.a22, b.a33};
        std::sort(d.begin(), d.end());
        return {d[0], d[1], d[2]};
    }
    const double q = b.trace() / 3.0;
    const double off = b.a12 * b.a12 + b.a13 * b.a13 + b.a23 * b.a23;
    const double d1 = b.a11 - q, d2 = b.a22 - q, d3 = b.a33 - q;
    const double p2 = d1 * d1 + d2 * d2 + d3 * d3 + 2.0 * off;
    if (p2 == 0.0) return {q, q, q};
    const double p = std::sqrt(p2 / 6.0);
    const SymTensor3 c{d1 / p, d2 / p, d3 / p, b.a12 / p, b.a13 / p, b.a23 / p};
    const double r = std::clamp(0.5 * c.det(), -1.0, 1.0);
    if (1.0 - r * r < 1e-12) return eig_sym3_jacobi(b);
    const double phi = std::acos(r) / 3.0;
    const double hi = q + 2.0 * p * std::cos(phi);
    const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    const double mid = 3.0 * q - hi - lo;
    std::array<double, 3> d{lo, mid, hi};
    std::sort(d.begin(), d.end());
    if (std::min(d[1] - d[0], d[2] - d[1]) < 1e-3 * p) return eig_sym3_jacobi(b);
    return {d[0], d[1], d[2]};
}

// ---------------------------------------------------------------- inverse

SymTensor3 ch_inverse(const SymTensor3& b) {
    const double scale = b.max_abs();
    const double det = b.det();
    if (!(std::abs(det) > 1e-14 * scale * scale * scale)) {
        std::ostringstream os;
        os << "singular tensor: det = " << det << ", max|b_ij| = " << scale;
        throw SingularTensor(os.str());
    }
    // Evaluated in extended precision: B^2 - I_B B cancels to O(det) when B
    // is ill-conditioned.
    using Wide = long double;
    Wide m[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = b(i, j);
    Wide b2[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b2[i][j] = m[i][0] * m[0][j] + m[i][1] * m[1][j] + m[i][2] * m[2][j];
    const Wide i1 = m[0][0] + m[1][1] + m[2][2];
    const Wide i2 = 0.5L * (i1 * i1 - (b2[0][0] + b2[1][1] + b2[2][2]));
    Wide adj[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) adj[i][j] = b2[i][j] - i1 * m[i][j] + (i == j ? i2 : 0.0L);
    const Wide wdet = m[0][0] * adj[0][0] + m[0][1] * adj[1][0] + m[0][2] * adj[2][0];
    SymTensor3 r;
    for (int k = 0; k < 6; ++k) r.slot(k) = static_cast<double>(adj[kSlotIndex[k][0]][kSlotIndex[k][1]] / wdet);
    return r;
}

SymTensor3 symmetrize(const Mat3& m) {
    return {m(0, 0), m(1, 1), m(2, 2), 0.5 * (m(0, 1) + m(1, 0)), 0.5 * (m(0, 2) + m(2, 0)),
            0.5 * (m(1, 2) + m(2, 1))};
}

SymTensor3 lop(const SymTensor3& a, const Mat3& m) {
    const Mat3 s = symmetrize(m).to_mat();
    const Mat3 am = a.to_mat();
    return symmetrize(s * am + am * s);
}

bool is_unimodular(const SymTensor3& b, double tol) { return std::abs(b.det() - 1.0) <= tol; }

namespace {

void require_unimodular(const SymTensor3& b) {
    if (!is_unimodular(b)) {
        std::ostringstream os;
        os << "tensor is not unimodular: |det - 1| = " << std::abs(b.det() - 1.0);
        throw NotUnimodular(os.str());
    }
}

}  // namespace

SymTensor3 d_inverse(const SymTensor3& b, const SymTensor3& db) {
    require_unimodular(b);
    const Mat3 bm = b.to_mat();
    const Mat3 dm = db.to_mat();
    const double tr_b = b.trace();
    const double tr_db = db.trace();
    const double tr_bdb = contract(b, db);
    Mat3 r = bm * dm + dm * bm - tr_db * bm - tr_b * dm + (tr_b * tr_db - tr_bdb) * Mat3::identity();
    return symmetrize(r);
}

SymTensor3 d2_inverse(const SymTensor3& b, const SymTensor3& dbi, const SymTensor3& dbj, const SymTensor3& d2b) {
    require_unimodular(b);
    const Mat3 bm = b.to_mat();
    const Mat3 di = dbi.to_mat();
    const Mat3 dj = dbj.to_mat();
    const Mat3 dij = d2b.to_mat();
    const double tr_b = b.trace();
    const double tr_i = dbi.trace();
    const double tr_j = dbj.trace();
    const double tr_ij = d2b.trace();
    const double scalar = tr_j * tr_i + tr_b * tr_ij - contract(dbj, dbi) - contract(b, d2b);
    Mat3 r = dj * di + di * dj + bm * dij + dij * bm - tr_ij * bm - tr_i * dj - tr_j * di - tr_b * dij +
             scalar * Mat3::identity();
    return symmetrize(r);
}

SymTensor3 d_inverse_general(const SymTensor3& binv, const SymTensor3& db) {
    const Mat3 bi = binv.to_mat();
    return symmetrize(bi * db.to_mat() * bi) * -1.0;
}

SymTensor3 d2_inverse_general(const SymTensor3& binv, const SymTensor3& dbi, const SymTensor3& dbj,
                              const SymTensor3& d2b) {
    const Mat3 bi = binv.to_mat();
    const Mat3 di = dbi.to_mat();
    const Mat3 dj = dbj.to_mat();
    const Mat3 inner = di * bi * dj + dj * bi * di - d2b.to_mat();
    return symmetrize(bi * inner * bi);
}

}  // namespace vestokes
