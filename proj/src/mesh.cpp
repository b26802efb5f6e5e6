#include "vestokes/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "vestokes/errors.hpp"

namespace vestokes {

namespace {

double det_cols(const Vec3& a, const Vec3& b, const Vec3& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - b[0] * (a[1] * c[2] - a[2] * c[1]) + c[0] * (a[1] * b[2] - a[2] * b[1]);
}

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

}  // namespace

double BoxMesh::volume(std::size_t t) const {
    const auto& v = tets[t];
    const Vec3& x0 = vertices[v[0]];
    return det_cols(sub(vertices[v[1]], x0), sub(vertices[v[2]], x0), sub(vertices[v[3]], x0)) / 6.0;
}

bool BoxMesh::on_boundary(const Vec3& x) const {
    for (int a = 0; a < 3; ++a) {
        const double tol = 1e-12 * lengths[a];
        if (std::abs(x[a]) <= tol || std::abs(x[a] - lengths[a]) <= tol) return true;
    }
    return false;
}

double BoxMesh::cell_size() const {
    double h = 0.0;
    for (int a = 0; a < 3; ++a) h = std::max(h, lengths[a] / divisions[a]);
    return h;
}

BoxMesh build_mesh(int nx, int ny, int nz, double lx, double ly, double lz) {
    if (nx < 1 || ny < 1 || nz < 1) throw InvalidDimensions("mesh divisions must be >= 1");
    if (!(lx > 0.0) || !(ly > 0.0) || !(lz > 0.0)) throw InvalidDimensions("box lengths must be positive");
    BoxMesh m;
    m.divisions = {nx, ny, nz};
    m.lengths = {lx, ly, lz};
    auto vid = [&](int i, int j, int k) { return i + (nx + 1) * (j + (ny + 1) * k); };
    m.vertices.resize(static_cast<std::size_t>(nx + 1) * (ny + 1) * (nz + 1));
    for (int k = 0; k <= nz; ++k)
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i <= nx; ++i)
                m.vertices[vid(i, j, k)] = {lx * i / nx, ly * j / ny, lz * k / nz};

    static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    m.tets.reserve(6 * static_cast<std::size_t>(nx) * ny * nz);
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                for (const auto& p : perms) {
                    std::array<int, 3> c{i, j, k};
                    std::array<int, 4> t{};
                    t[0] = vid(c[0], c[1], c[2]);
                    for (int s = 0; s < 3; ++s) {
                        ++c[p[s]];
                        t[s + 1] = vid(c[0], c[1], c[2]);
                    }
                    m.tets.push_back(t);
                    if (m.volume(m.tets.size() - 1) < 0.0) std::swap(m.tets.back()[2], m.tets.back()[3]);
                }

    std::vector<std::array<int, 2>> all;
    all.reserve(6 * m.tets.size());
    for (const auto& t : m.tets)
        for (const auto& e : kTetEdges) all.push_back({std::min(t[e[0]], t[e[1]]), std::max(t[e[0]], t[e[1]])});
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    m.edges = std::move(all);
    m.tet_edges.reserve(m.tets.size());
    for (const auto& t : m.tets) {
        std::array<int, 6> ids{};
        for (int e = 0; e < 6; ++e) {
            const std::array<int, 2> key{std::min(t[kTetEdges[e][0]], t[kTetEdges[e][1]]),
                                         std::max(t[kTetEdges[e][0]], t[kTetEdges[e][1]])};
            ids[e] = static_cast<int>(std::lower_bound(m.edges.begin(), m.edges.end(), key) - m.edges.begin());
        }
        m.tet_edges.push_back(ids);
    }
    return m;
}

Vec3 TetGeometry::map(const Vec3& ref) const {
    const Vec3 d = jacobian * ref;
    return {origin[0] + d[0], origin[1] + d[1], origin[2] + d[2]};
}

TetGeometry tet_geometry(const BoxMesh& mesh, std::size_t t) {
    const auto& v = mesh.tets[t];
    TetGeometry g;
    g.origin = mesh.vertices[v[0]];
    for (int c = 0; c < 3; ++c) {
        const Vec3 e = sub(mesh.vertices[v[c + 1]], g.origin);
        for (int r = 0; r < 3; ++r) g.jacobian(r, c) = e[r];
    }
    const Mat3& j = g.jacobian;
    const double det = j.det();
    g.volume = det / 6.0;
    // Rows of J^{-1} are the gradients of L1..L3.
    Mat3 inv;
    inv(0, 0) = (j(1, 1) * j(2, 2) - j(1, 2) * j(2, 1)) / det;
    inv(0, 1) = (j(0, 2) * j(2, 1) - j(0, 1) * j(2, 2)) / det;
    inv(0, 2) = (j(0, 1) * j(1, 2) - j(0, 2) * j(1, 1)) / det;
    inv(1, 0) = (j(1, 2) * j(2, 0) - j(1, 0) * j(2, 2)) / det;
    inv(1, 1) = (j(0, 0) * j(2, 2) - j(0, 2) * j(2, 0)) / det;
    inv(1, 2) = (j(0, 2) * j(1, 0) - j(0, 0) * j(1, 2)) / det;
    inv(2, 0) = (j(1, 0) * j(2, 1) - j(1, 1) * j(2, 0)) / det;
    inv(2, 1) = (j(0, 1) * j(2, 0) - j(0, 0) * j(2, 1)) / det;
    inv(2, 2) = (j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0)) / det;
    for (int a = 0; a < 3; ++a) g.grad_bary[a + 1] = {inv(a, 0), inv(a, 1), inv(a, 2)};
    for (int r = 0; r < 3; ++r) g.grad_bary[0][r] = -(g.grad_bary[1][r] + g.grad_bary[2][r] + g.grad_bary[3][r]);
    return g;
}

TaylorHoodSpace::TaylorHoodSpace(BoxMesh mesh) : mesh_(std::move(mesh)) {
    const std::size_t nv = mesh_.num_vertices();
    nodes_ = mesh_.vertices;
    nodes_.reserve(nv + mesh_.num_edges());
    for (const auto& e : mesh_.edges) {
        const Vec3& a = mesh_.vertices[e[0]];
        const Vec3& b = mesh_.vertices[e[1]];
        nodes_.push_back({0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])});
    }
    dirichlet_.assign(3 * nodes_.size(), 0);
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        if (mesh_.on_boundary(nodes_[n])) dirichlet_[3 * n] = dirichlet_[3 * n + 1] = dirichlet_[3 * n + 2] = 1;
    }
}

std::array<int, 10> TaylorHoodSpace::element_nodes(std::size_t t) const {
    const auto& v = mesh_.tets[t];
    const auto& e = mesh_.tet_edges[t];
    const int nv = static_cast<int>(mesh_.num_vertices());
    return {v[0], v[1], v[2], v[3], nv + e[0], nv + e[1], nv + e[2], nv + e[3], nv + e[4], nv + e[5]};
}

std::size_t TaylorHoodSpace::num_dirichlet() const {
    return static_cast<std::size_t>(std::count(dirichlet_.begin(), dirichlet_.end(), 1));
}

std::array<double, 10> p2_values(const std::array<double, 4>& l) {
    std::array<double, 10> v{};
    for (int i = 0; i < 4; ++i) v[i] = l[i] * (2.0 * l[i] - 1.0);
    for (int e = 0; e < 6; ++e) v[4 + e] = 4.0 * l[kTetEdges[e][0]] * l[kTetEdges[e][1]];
    return v;
}

std::array<Vec3, 10> p2_gradients(const std::array<double, 4>& l, const std::array<Vec3, 4>& gb) {
    std::array<Vec3, 10> g{};
    for (int i = 0; i < 4; ++i)
        for (int r = 0; r < 3; ++r) g[i][r] = (4.0 * l[i] - 1.0) * gb[i][r];
    for (int e = 0; e < 6; ++e) {
        const int a = kTetEdges[e][0], b = kTetEdges[e][1];
        for (int r = 0; r < 3; ++r) g[4 + e][r] = 4.0 * (l[a] * gb[b][r] + l[b] * gb[a][r]);
    }
    return g;
}

}  // namespace vestokes
