#pragma once

// Pointwise algebra of symmetric 3x3 tensors: invariants, spectra,
// the Cayley-Hamilton inverse, the symmetric operator L(M) = S(M)A + AS(M)
// and directional derivatives of the inverse on the unimodular manifold.

#include <array>

namespace vestokes {

using Vec3 = std::array<double, 3>;

/// Dense 3x3 matrix, row-major.
struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    double& operator()(int i, int j) { return m[i][j]; }
    double operator()(int i, int j) const { return m[i][j]; }

    static Mat3 identity();
    static Mat3 zero() { return {}; }
    /// xi (x) eta, i.e. entries xi_i * eta_j.
    static Mat3 outer(const Vec3& xi, const Vec3& eta);

    Mat3 transpose() const;
    double trace() const { return m[0][0] + m[1][1] + m[2][2]; }
    double det() const;
    double max_abs() const;

    Mat3& operator+=(const Mat3& o);
    Mat3& operator-=(const Mat3& o);
    Mat3& operator*=(double s);
};

Mat3 operator+(Mat3 a, const Mat3& b);
Mat3 operator-(Mat3 a, const Mat3& b);
Mat3 operator*(Mat3 a, double s);
Mat3 operator*(double s, Mat3 a);
Mat3 operator*(const Mat3& a, const Mat3& b);
Vec3 operator*(const Mat3& a, const Vec3& v);
/// Frobenius inner product M:N.
double contract(const Mat3& a, const Mat3& b);

/// Symmetric 3x3 tensor stored by its six independent components.
struct SymTensor3 {
    double a11 = 0, a22 = 0, a33 = 0, a12 = 0, a13 = 0, a23 = 0;

    static SymTensor3 identity() { return {1, 1, 1, 0, 0, 0}; }
    static SymTensor3 zero() { return {}; }
    static SymTensor3 diag(double d1, double d2, double d3) { return {d1, d2, d3, 0, 0, 0}; }
    /// Symmetric part of a dense matrix is not implied; the caller asserts symmetry.
    static SymTensor3 from_symmetric(const Mat3& m);

    double operator()(int i, int j) const;
    Mat3 to_mat() const;
    double trace() const { return a11 + a22 + a33; }
    double det() const;
    /// Entrywise maximum |a_ij|.
    double max_abs() const;
    /// Frobenius norm.
    double norm() const;

    SymTensor3& operator+=(const SymTensor3& o);
    SymTensor3& operator-=(const SymTensor3& o);
    SymTensor3& operator*=(double s);

    /// Component access by storage slot (a11, a22, a33, a12, a13, a23).
    double& slot(int k);
    double slot(int k) const;
};

SymTensor3 operator+(SymTensor3 a, const SymTensor3& b);
SymTensor3 operator-(SymTensor3 a, const SymTensor3& b);
SymTensor3 operator*(SymTensor3 a, double s);
SymTensor3 operator*(double s, SymTensor3 a);
double contract(const SymTensor3& a, const SymTensor3& b);
double contract(const SymTensor3& a, const Mat3& b);

/// Row/column indices of storage slot k.
constexpr std::array<std::array<int, 2>, 6> kSlotIndex{{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};

/// Principal invariants: trace, second invariant, determinant.
struct Invariants3 {
    double i1 = 0, i2 = 0, i3 = 0;
};

/// Eigenvalues in ascending order.
struct EigenTriple {
    double l1 = 0, l2 = 0, l3 = 0;

    double min() const { return l1; }
    double max() const { return l3; }
    std::array<double, 3> as_array() const { return {l1, l2, l3}; }
};

Invariants3 invariants(const SymTensor3& b);

/// Closed-form trigonometric eigenvalues; near-degenerate spectra fall back to
/// cyclic Jacobi rotations.
EigenTriple eig_sym3(const SymTensor3& b);

/// Cyclic Jacobi eigenvalue iteration. Exposed for cross-checks.
EigenTriple eig_sym3_jacobi(const SymTensor3& b);

/// B^{-1} = (B^2 - I_B B + II_B I) / det B. Throws SingularTensor when
/// |det B| <= 1e-14 * max|b_ij|^3.
SymTensor3 ch_inverse(const SymTensor3& b);

/// (M + M^t) / 2.
SymTensor3 symmetrize(const Mat3& m);

/// S(M)A + AS(M).
SymTensor3 lop(const SymTensor3& a, const Mat3& m);

/// Tolerance on |det B - 1| below which B is treated as unimodular.
inline constexpr double kUnimodularTol = 1e-8;

bool is_unimodular(const SymTensor3& b, double tol = kUnimodularTol);

/// Directional derivative of B^{-1} along db, valid on the manifold det B = 1:
/// B dB + dB B - tr(dB) B - tr(B) dB + (tr B tr dB - tr(B dB)) I.
/// Throws NotUnimodular when |det B - 1| > 1e-8.
SymTensor3 d_inverse(const SymTensor3& b, const SymTensor3& db);

/// Mixed second derivative of B^{-1} for a two-parameter family with det B = 1,
/// given first derivatives dbi, dbj and the mixed second derivative d2b.
SymTensor3 d2_inverse(const SymTensor3& b, const SymTensor3& dbi, const SymTensor3& dbj,
                      const SymTensor3& d2b);

/// General derivative of the inverse, -B^{-1} dB B^{-1}; no unimodularity required.
SymTensor3 d_inverse_general(const SymTensor3& binv, const SymTensor3& db);

/// General mixed second derivative of the inverse:
/// B^{-1}(dBi B^{-1} dBj + dBj B^{-1} dBi - d2B)B^{-1}.
SymTensor3 d2_inverse_general(const SymTensor3& binv, const SymTensor3& dbi, const SymTensor3& dbj,
                              const SymTensor3& d2b);

}  // namespace vestokes
