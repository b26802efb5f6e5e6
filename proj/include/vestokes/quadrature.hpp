#pragma once

#include <vector>

#include "vestokes/field.hpp"
#include "vestokes/tensor.hpp"

namespace vestokes {

/// Gauss rule on [0, 1] for the weight (1 - t)^a, n points.
struct Rule1D {
    std::vector<double> points;
    std::vector<double> weights;
};

Rule1D gauss_jacobi01(int n, int a);

/// Rule on the reference tetrahedron {xi, eta, zeta >= 0, xi + eta + zeta <= 1};
/// weights sum to 1/6.
struct TetRule {
    std::vector<Vec3> points;
    std::vector<double> weights;
    int degree = 0;

    std::size_t size() const { return points.size(); }
};

/// Collapsed conical product of n-point Gauss-Jacobi rules: n^3 points, exact
/// for polynomials of total degree 2n - 1.
TetRule tet_rule(int n);

/// Smallest conical rule exact for the requested total degree.
TetRule tet_rule_for_degree(int degree);

/// Composite Gauss-Legendre rule on the box: `order` points per axis in each
/// of the cells, exact per cell for degree 2 * order - 1 in each variable.
SampleSet gauss_box(const std::array<int, 3>& cells, int order, const Vec3& lengths);

}  // namespace vestokes
