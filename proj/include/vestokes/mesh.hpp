#pragma once

#include <array>
#include <vector>

#include "vestokes/tensor.hpp"

namespace vestokes {

/// Structured tetrahedral mesh of [0,Lx]x[0,Ly]x[0,Lz]: each cell is split
/// into the six Kuhn tetrahedra sharing its main diagonal. Vertex (i,j,k) has
/// index i + (nx+1)(j + (ny+1)k). All tetrahedra are positively oriented.
struct BoxMesh {
    std::array<int, 3> divisions{1, 1, 1};
    Vec3 lengths{1.0, 1.0, 1.0};
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 4>> tets;
    /// Unique edges as sorted vertex pairs, lexicographically ordered.
    std::vector<std::array<int, 2>> edges;
    /// Per tetrahedron, edge ids in local order (01, 02, 03, 12, 13, 23).
    std::vector<std::array<int, 6>> tet_edges;

    std::size_t num_vertices() const { return vertices.size(); }
    std::size_t num_tets() const { return tets.size(); }
    std::size_t num_edges() const { return edges.size(); }
    double volume(std::size_t t) const;
    double box_volume() const { return lengths[0] * lengths[1] * lengths[2]; }
    /// Whether x lies on the box surface.
    bool on_boundary(const Vec3& x) const;
    /// Largest cell edge h = max L_i / n_i.
    double cell_size() const;
};

/// Local vertex pairs of the six tetrahedron edges.
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// InvalidDimensions unless all divisions >= 1 and lengths > 0.
BoxMesh build_mesh(int nx, int ny, int nz, double lx = 1.0, double ly = 1.0, double lz = 1.0);

/// Affine map data of one tetrahedron.
struct TetGeometry {
    Vec3 origin;
    Mat3 jacobian;  // columns X1-X0, X2-X0, X3-X0
    double volume = 0.0;
    /// Gradients of the barycentric coordinates L0..L3.
    std::array<Vec3, 4> grad_bary;

    Vec3 map(const Vec3& ref) const;
};

TetGeometry tet_geometry(const BoxMesh& mesh, std::size_t t);

/// P2 velocity (per component) on vertices and edge midpoints, P1 pressure
/// on vertices. Velocity node n < V is vertex n, node V + e is the midpoint
/// of edge e. Velocity dof of (node, component) is 3 * node + component.
class TaylorHoodSpace {
public:
    explicit TaylorHoodSpace(BoxMesh mesh);

    const BoxMesh& mesh() const { return mesh_; }
    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_velocity_dofs() const { return 3 * nodes_.size(); }
    std::size_t num_pressure_dofs() const { return mesh_.num_vertices(); }
    const Vec3& node(std::size_t n) const { return nodes_[n]; }
    const std::vector<Vec3>& nodes() const { return nodes_; }
    /// Ten P2 nodes of tetrahedron t: 4 vertices then 6 edges in kTetEdges order.
    std::array<int, 10> element_nodes(std::size_t t) const;
    /// Dirichlet mask per velocity dof.
    const std::vector<char>& dirichlet() const { return dirichlet_; }
    bool node_on_boundary(std::size_t n) const { return dirichlet_[3 * n] != 0; }
    std::size_t num_dirichlet() const;

private:
    BoxMesh mesh_;
    std::vector<Vec3> nodes_;
    std::vector<char> dirichlet_;
};

/// P2 shape functions at barycentric coordinates l, with gradients given the
/// barycentric gradients. Order: 4 vertex functions, then 6 edge functions.
std::array<double, 10> p2_values(const std::array<double, 4>& l);
std::array<Vec3, 10> p2_gradients(const std::array<double, 4>& l, const std::array<Vec3, 4>& grad_bary);

/// Barycentric coordinates of a reference point.
inline std::array<double, 4> barycentric(const Vec3& ref) {
    return {1.0 - ref[0] - ref[1] - ref[2], ref[0], ref[1], ref[2]};
}

}  // namespace vestokes
