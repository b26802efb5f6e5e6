#include "vestokes/assembly.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "vestokes/constitutive.hpp"
#include "vestokes/errors.hpp"
#include "vestokes/parallel.hpp"

namespace vestokes {

namespace {

using Triplet = Eigen::Triplet<double>;

std::string point_str(const Vec3& x) {
    std::ostringstream os;
    os << "(" << x[0] << ", " << x[1] << ", " << x[2] << ")";
    return os.str();
}

struct ChunkOutput {
    std::vector<Triplet> k, g;
    std::vector<std::pair<int, double>> f;
    CoefficientStats stats;
};

}  // namespace

SparseMatrix SaddleSystem::kkt() const {
    const Eigen::Index n = nu(), q = np();
    std::vector<Triplet> t;
    t.reserve(K.nonZeros() + 2 * G.nonZeros() + 2 * q);
    for (Eigen::Index c = 0; c < K.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(K, c); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
    for (Eigen::Index c = 0; c < G.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(G, c); it; ++it) {
            t.emplace_back(n + it.row(), it.col(), it.value());
            t.emplace_back(it.col(), n + it.row(), it.value());
        }
    for (Eigen::Index j = 0; j < q; ++j) {
        t.emplace_back(n + j, n + q, m[j]);
        t.emplace_back(n + q, n + j, m[j]);
    }
    SparseMatrix a(n + q + 1, n + q + 1);
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

Vector SaddleSystem::kkt_rhs() const {
    Vector r = Vector::Zero(nu() + np() + 1);
    r.head(nu()) = F;
    return r;
}

std::vector<Vec3> quadrature_points(const BoxMesh& mesh, int quad_points) {
    const TetRule rule = tet_rule(quad_points);
    std::vector<Vec3> pts;
    pts.reserve(mesh.num_tets() * rule.size());
    for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
        const TetGeometry geo = tet_geometry(mesh, t);
        for (const Vec3& r : rule.points) pts.push_back(geo.map(r));
    }
    return pts;
}

SaddleSystem assemble(const TaylorHoodSpace& space, const MuFields& mu, const TensorField& b, const VectorFn& f,
                      const AssemblyOptions& opts) {
    const BoxMesh& mesh = space.mesh();
    const TetRule rule = tet_rule(opts.quad_points);
    const TetRule load_rule = tet_rule(opts.load_quad_points > 0 ? opts.load_quad_points : opts.quad_points);
    const std::vector<char>& dir = space.dirichlet();
    const std::size_t nt = mesh.num_tets();
    const std::size_t chunks = chunk_count(nt, opts.threads);
    std::vector<ChunkOutput> out(chunks);

    parallel_chunks(nt, opts.threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
        ChunkOutput& o = out[c];
        o.stats.alpha = std::numeric_limits<double>::infinity();
        o.k.reserve((end - begin) * 465);
        o.g.reserve((end - begin) * 120);
        double ke[30][30], ge[4][30], fe[30];
        for (std::size_t t = begin; t < end; ++t) {
            const TetGeometry geo = tet_geometry(mesh, t);
            const auto nodes = space.element_nodes(t);
            const auto& verts = mesh.tets[t];
            for (auto& row : ke)
                for (double& v : row) v = 0.0;
            for (auto& row : ge)
                for (double& v : row) v = 0.0;
            for (double& v : fe) v = 0.0;

            for (std::size_t q = 0; q < rule.size(); ++q) {
                const auto l = barycentric(rule.points[q]);
                const Vec3 x = geo.map(rule.points[q]);
                const double w = rule.weights[q] * 6.0 * geo.volume;

                const SymTensor3 bx = b.value(x);
                const EigenTriple eb = eig_sym3(bx);
                if (!(eb.min() > 0.0)) {
                    throw NotSPD("B is not positive definite at quadrature point " + point_str(x));
                }
                const double m1 = mu.mu1.value(x), m2 = mu.mu2.value(x), m3 = mu.mu3.value(x);
                const SymTensor3 a = acal(m1, m2, m3, bx);
                double gmin = std::numeric_limits<double>::infinity(), gmax = 0.0;
                for (double lam : eb.as_array()) {
                    const double g = m1 + m2 * lam + m3 / lam;
                    gmin = std::min(gmin, g);
                    gmax = std::max(gmax, std::abs(g));
                }
                if (gmin < o.stats.alpha) {
                    o.stats.alpha = gmin;
                    o.stats.alpha_point = x;
                }
                o.stats.a_norm = std::max(o.stats.a_norm, gmax);
                o.stats.a_max_entry = std::max(o.stats.a_max_entry, a.max_abs());
                ++o.stats.samples;

                const auto grad = p2_gradients(l, geo.grad_bary);

                // T = L(e_c (x) grad phi_a) for each local dof 3a + c.
                SymTensor3 tl[30];
                for (int i = 0; i < 10; ++i)
                    for (int c = 0; c < 3; ++c) {
                        Mat3 gm;
                        gm(c, 0) = grad[i][0];
                        gm(c, 1) = grad[i][1];
                        gm(c, 2) = grad[i][2];
                        tl[3 * i + c] = lop(a, gm);
                    }
                for (int r = 0; r < 30; ++r) {
                    const SymTensor3& tr = tl[r];
                    for (int j = 0; j < 10; ++j)
                        for (int d = 0; d < 3; ++d) {
                            const int s = 3 * j + d;
                            if (s < r) continue;
                            ke[r][s] += w * (tr(d, 0) * grad[j][0] + tr(d, 1) * grad[j][1] + tr(d, 2) * grad[j][2]);
                        }
                }
                for (int i = 0; i < 10; ++i)
                    for (int c = 0; c < 3; ++c)
                        for (int k = 0; k < 4; ++k) ge[k][3 * i + c] -= w * l[k] * grad[i][c];
            }
            if (f) {
                for (std::size_t q = 0; q < load_rule.size(); ++q) {
                    const auto phi = p2_values(barycentric(load_rule.points[q]));
                    const Vec3 fx = f(geo.map(load_rule.points[q]));
                    const double w = load_rule.weights[q] * 6.0 * geo.volume;
                    for (int i = 0; i < 10; ++i)
                        for (int c = 0; c < 3; ++c) fe[3 * i + c] += w * fx[c] * phi[i];
                }
            }

            int gdof[30];
            for (int i = 0; i < 10; ++i)
                for (int c = 0; c < 3; ++c) gdof[3 * i + c] = 3 * nodes[i] + c;
            for (int r = 0; r < 30; ++r) {
                if (dir[gdof[r]]) continue;
                for (int s = r; s < 30; ++s) {
                    if (dir[gdof[s]]) continue;
                    o.k.emplace_back(gdof[r], gdof[s], ke[r][s]);
                    if (s != r) o.k.emplace_back(gdof[s], gdof[r], ke[r][s]);
                }
                o.f.emplace_back(gdof[r], fe[r]);
                for (int k = 0; k < 4; ++k) o.g.emplace_back(verts[k], gdof[r], ge[k][r]);
            }
        }
    });

    SaddleSystem sys;
    sys.quad_points = opts.quad_points;
    sys.dirichlet = dir;
    const Eigen::Index nu = static_cast<Eigen::Index>(space.num_velocity_dofs());
    const Eigen::Index np = static_cast<Eigen::Index>(space.num_pressure_dofs());
    std::vector<Triplet> kt, gt;
    std::size_t nk = 0, ng = 0;
    for (const auto& o : out) {
        nk += o.k.size();
        ng += o.g.size();
    }
    kt.reserve(nk + space.num_dirichlet());
    gt.reserve(ng);
    sys.F = Vector::Zero(nu);
    sys.coeff.alpha = std::numeric_limits<double>::infinity();
    for (const auto& o : out) {
        kt.insert(kt.end(), o.k.begin(), o.k.end());
        gt.insert(gt.end(), o.g.begin(), o.g.end());
        for (const auto& [i, v] : o.f) sys.F[i] += v;
        if (o.stats.alpha < sys.coeff.alpha) {
            sys.coeff.alpha = o.stats.alpha;
            sys.coeff.alpha_point = o.stats.alpha_point;
        }
        sys.coeff.a_norm = std::max(sys.coeff.a_norm, o.stats.a_norm);
        sys.coeff.a_max_entry = std::max(sys.coeff.a_max_entry, o.stats.a_max_entry);
        sys.coeff.samples += o.stats.samples;
    }
    if (!(sys.coeff.alpha > 0.0)) {
        std::ostringstream os;
        os << "A(B) is not uniformly elliptic: alpha = " << sys.coeff.alpha << " at " << point_str(sys.coeff.alpha_point);
        throw NotElliptic(os.str());
    }
    for (Eigen::Index i = 0; i < nu; ++i)
        if (dir[i]) kt.emplace_back(i, i, 1.0);
    sys.K.resize(nu, nu);
    sys.K.setFromTriplets(kt.begin(), kt.end());
    sys.G.resize(np, nu);
    sys.G.setFromTriplets(gt.begin(), gt.end());
    sys.m = Vector::Zero(np);
    for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
        const double v4 = mesh.volume(t) / 4.0;
        for (int k = 0; k < 4; ++k) sys.m[mesh.tets[t][k]] += v4;
    }
    return sys;
}

KornTerms korn_terms(const TaylorHoodSpace& space, const Vector& u) {
    const auto& dir = space.dirichlet();
    if (u.size() != static_cast<Eigen::Index>(dir.size())) throw BCViolation("coefficient vector has the wrong size");
    for (std::size_t i = 0; i < dir.size(); ++i) {
        if (dir[i] && u[i] != 0.0) throw BCViolation("coefficient vector is nonzero on a boundary dof");
    }
    const BoxMesh& mesh = space.mesh();
    const TetRule rule = tet_rule(2);
    KornTerms k;
    for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
        const TetGeometry geo = tet_geometry(mesh, t);
        const auto nodes = space.element_nodes(t);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto grad = p2_gradients(barycentric(rule.points[q]), geo.grad_bary);
            Mat3 gv;
            for (int i = 0; i < 10; ++i)
                for (int c = 0; c < 3; ++c) {
                    const double coef = u[3 * nodes[i] + c];
                    for (int r = 0; r < 3; ++r) gv(c, r) += coef * grad[i][r];
                }
            const double w = rule.weights[q] * 6.0 * geo.volume;
            const SymTensor3 d = symmetrize(gv);
            const double dv = gv.trace();
            k.sym += w * contract(d, d);
            k.grad += w * contract(gv, gv);
            k.div += w * dv * dv;
        }
    }
    return k;
}

double l2_norm(const BoxMesh& mesh, const VectorFn& f, int quad_points) {
    const TetRule rule = tet_rule(quad_points);
    double s = 0.0;
    for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
        const TetGeometry geo = tet_geometry(mesh, t);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Vec3 v = f(geo.map(rule.points[q]));
            s += rule.weights[q] * 6.0 * geo.volume * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        }
    }
    return std::sqrt(s);
}

Vec3 eval_velocity(const TaylorHoodSpace& space, const Vector& u, std::size_t t, const Vec3& ref) {
    const auto nodes = space.element_nodes(t);
    const auto phi = p2_values(barycentric(ref));
    Vec3 v{0.0, 0.0, 0.0};
    for (int i = 0; i < 10; ++i)
        for (int c = 0; c < 3; ++c) v[c] += phi[i] * u[3 * nodes[i] + c];
    return v;
}

DiscreteNorms discrete_norms(const TaylorHoodSpace& space, const Vector& u, const Vector& p) {
    const BoxMesh& mesh = space.mesh();
    const TetRule rule = tet_rule(2);
    static constexpr int kPairs[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
    double h2 = 0.0, p2 = 0.0, pm = 0.0, vol = 0.0, gp2 = 0.0;
    for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
        const TetGeometry geo = tet_geometry(mesh, t);
        const auto nodes = space.element_nodes(t);
        const auto& verts = mesh.tets[t];
        const auto& gl = geo.grad_bary;
        // Second derivatives of the P2 basis are constant per element.
        std::array<Mat3, 10> hess;
        for (int i = 0; i < 4; ++i) hess[i] = Mat3::outer(gl[i], gl[i]) * 4.0;
        for (int e = 0; e < 6; ++e) {
            const int a = kTetEdges[e][0], b = kTetEdges[e][1];
            hess[4 + e] = (Mat3::outer(gl[a], gl[b]) + Mat3::outer(gl[b], gl[a])) * 4.0;
        }
        for (int c = 0; c < 3; ++c) {
            Mat3 h;
            for (int i = 0; i < 10; ++i) h += hess[i] * u[3 * nodes[i] + c];
            for (const auto& pr : kPairs) h2 += geo.volume * h(pr[0], pr[1]) * h(pr[0], pr[1]);
        }
        Vec3 gp{0.0, 0.0, 0.0};
        for (int k = 0; k < 4; ++k)
            for (int r = 0; r < 3; ++r) gp[r] += p[verts[k]] * gl[k][r];
        gp2 += geo.volume * (gp[0] * gp[0] + gp[1] * gp[1] + gp[2] * gp[2]);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto l = barycentric(rule.points[q]);
            const double w = rule.weights[q] * 6.0 * geo.volume;
            double ph = 0.0;
            for (int k = 0; k < 4; ++k) ph += l[k] * p[verts[k]];
            p2 += w * ph * ph;
            pm += w * ph;
            vol += w;
        }
    }
    DiscreteNorms n;
    n.grad_v = std::sqrt(korn_terms(space, u).grad);
    n.d2v = std::sqrt(h2);
    n.p_l2 = std::sqrt(std::max(0.0, p2 - pm * pm / vol));
    n.grad_p = std::sqrt(gp2);
    return n;
}

ErrorNorms error_norms(const TaylorHoodSpace& space, const Vector& u, const Vector& p, const VectorFn& v_exact,
                       const MatrixFn& grad_exact, const ScalarFn& p_exact, int quad_points) {
    const BoxMesh& mesh = space.mesh();
    const TetRule rule = tet_rule(quad_points);
    double ev = 0.0, eg = 0.0, ep = 0.0, ep_mean = 0.0, vol = 0.0;
    for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
        const TetGeometry geo = tet_geometry(mesh, t);
        const auto nodes = space.element_nodes(t);
        const auto& verts = mesh.tets[t];
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto l = barycentric(rule.points[q]);
            const Vec3 x = geo.map(rule.points[q]);
            const double w = rule.weights[q] * 6.0 * geo.volume;
            const auto phi = p2_values(l);
            const auto grad = p2_gradients(l, geo.grad_bary);
            Vec3 vh{0.0, 0.0, 0.0};
            Mat3 gh;
            for (int i = 0; i < 10; ++i)
                for (int c = 0; c < 3; ++c) {
                    const double coef = u[3 * nodes[i] + c];
                    vh[c] += coef * phi[i];
                    for (int r = 0; r < 3; ++r) gh(c, r) += coef * grad[i][r];
                }
            double ph = 0.0;
            for (int k = 0; k < 4; ++k) ph += l[k] * p[verts[k]];
            const Vec3 ve = v_exact(x);
            const Mat3 ge = grad_exact(x);
            for (int c = 0; c < 3; ++c) ev += w * (ve[c] - vh[c]) * (ve[c] - vh[c]);
            const Mat3 dg = ge - gh;
            eg += w * contract(dg, dg);
            const double dp = p_exact(x) - ph;
            ep += w * dp * dp;
            ep_mean += w * dp;
            vol += w;
        }
    }
    ErrorNorms e;
    e.v_l2 = std::sqrt(ev);
    e.v_h1 = std::sqrt(eg);
    e.p_l2 = std::sqrt(std::max(0.0, ep - ep_mean * ep_mean / vol));
    return e;
}

}  // namespace vestokes
