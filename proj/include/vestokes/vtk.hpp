#pragma once

#include <ostream>
#include <vector>

#include "vestokes/assembly.hpp"

namespace vestokes {

/// Per tetrahedron, the minimum over its quadrature points of
/// lambda_min(A(B(x))).
std::vector<double> cell_alpha(const TaylorHoodSpace& space, const MuFields& mu, const TensorField& b,
                               int quad_points = 3);

/// Legacy ASCII unstructured grid (version 3.0) of quadratic tetrahedra
/// (cell type 24). Points are the P2 nodes: vertices first, then edge
/// midpoints. Point data `velocity` and `pressure` (the P1 field, exact at
/// midpoints); cell data `alpha`.
void write_vtk(std::ostream& out, const TaylorHoodSpace& space, const Vector& u, const Vector& p,
               const std::vector<double>& alpha);

}  // namespace vestokes
