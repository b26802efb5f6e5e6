#include "vestokes/vtk.hpp"

#include <cstdio>

#include "vestokes/ellipticity.hpp"
#include "vestokes/errors.hpp"

namespace vestokes {

namespace {

// Our edge order (01, 02, 03, 12, 13, 23) in VTK's (01, 12, 20, 03, 13, 23).
constexpr int kVtkEdge[6] = {0, 3, 1, 2, 4, 5};

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<double> cell_alpha(const TaylorHoodSpace& space, const MuFields& mu, const TensorField& b,
                               int quad_points) {
    const std::vector<Vec3> pts = quadrature_points(space.mesh(), quad_points);
    const std::size_t per = pts.size() / space.mesh().num_tets();
    std::vector<double> alpha(space.mesh().num_tets());
    for (std::size_t t = 0; t < alpha.size(); ++t) {
        const std::vector<Vec3> cell(pts.begin() + t * per, pts.begin() + (t + 1) * per);
        alpha[t] = alpha_field(mu, b, cell).alpha;
    }
    return alpha;
}

void write_vtk(std::ostream& out, const TaylorHoodSpace& space, const Vector& u, const Vector& p,
               const std::vector<double>& alpha) {
    const BoxMesh& mesh = space.mesh();
    const std::size_t nn = space.num_nodes(), nv = mesh.num_vertices(), nt = mesh.num_tets();
    if (static_cast<std::size_t>(u.size()) != 3 * nn || static_cast<std::size_t>(p.size()) != nv ||
        alpha.size() != nt)
        throw InvalidDimensions("vtk output: field sizes do not match the mesh");

    out << "# vtk DataFile Version 3.0\nvestokes solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << nn << " double\n";
    for (const Vec3& x : space.nodes()) out << g17(x[0]) << ' ' << g17(x[1]) << ' ' << g17(x[2]) << '\n';

    out << "CELLS " << nt << ' ' << nt * 11 << '\n';
    for (std::size_t t = 0; t < nt; ++t) {
        const std::array<int, 10> en = space.element_nodes(t);
        out << 10;
        for (int k = 0; k < 4; ++k) out << ' ' << en[k];
        for (int k = 0; k < 6; ++k) out << ' ' << en[4 + kVtkEdge[k]];
        out << '\n';
    }
    out << "CELL_TYPES " << nt << '\n';
    for (std::size_t t = 0; t < nt; ++t) out << "24\n";

    out << "POINT_DATA " << nn << "\nVECTORS velocity double\n";
    for (std::size_t n = 0; n < nn; ++n)
        out << g17(u[3 * n]) << ' ' << g17(u[3 * n + 1]) << ' ' << g17(u[3 * n + 2]) << '\n';
    out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (std::size_t n = 0; n < nv; ++n) out << g17(p[n]) << '\n';
    for (const auto& e : mesh.edges) out << g17(0.5 * (p[e[0]] + p[e[1]])) << '\n';

    out << "CELL_DATA " << nt << "\nSCALARS alpha double 1\nLOOKUP_TABLE default\n";
    for (double a : alpha) out << g17(a) << '\n';
}

}  // namespace vestokes
