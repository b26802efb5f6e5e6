#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Dense>

#include "vestokes/assembly.hpp"
#include "vestokes/constitutive.hpp"
#include "vestokes/errors.hpp"
#include "vestokes/sampling.hpp"
#include "vestokes/vtk.hpp"

using namespace vestokes;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

Vector random_interior(const TaylorHoodSpace& s, Rng& rng) {
    Vector u(s.num_velocity_dofs());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = s.dirichlet()[i] ? 0.0 : uniform(rng, -1, 1);
    return u;
}

// Velocity gradient by central differences of the P2 field in reference
// coordinates, pushed forward with the inverse Jacobian.
Mat3 fd_gradient(const TaylorHoodSpace& s, const Vector& u, std::size_t t, const Vec3& ref) {
    const TetGeometry geo = tet_geometry(s.mesh(), t);
    const double h = 1e-3;
    Mat3 dref;
    for (int k = 0; k < 3; ++k) {
        Vec3 a = ref, b = ref;
        a[k] += h;
        b[k] -= h;
        const Vec3 va = eval_velocity(s, u, t, a), vb = eval_velocity(s, u, t, b);
        for (int c = 0; c < 3; ++c) dref(c, k) = (va[c] - vb[c]) / (2 * h);
    }
    Eigen::Matrix3d j, d;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            j(r, c) = geo.jacobian(r, c);
            d(r, c) = dref(r, c);
        }
    const Eigen::Matrix3d g = d * j.inverse();
    Mat3 out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out(r, c) = g(r, c);
    return out;
}

Mat3 to_mat(const SymTensor3& s) {
    Mat3 m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = s(r, c);
    return m;
}

}  // namespace

TEST(Quadrature, MonomialsExactUpToDegree) {
    for (int n = 1; n <= 5; ++n) {
        const TetRule rule = tet_rule(n);
        EXPECT_EQ(rule.degree, 2 * n - 1);
        for (int a = 0; a <= rule.degree; ++a)
            for (int b = 0; a + b <= rule.degree; ++b)
                for (int c = 0; a + b + c <= rule.degree; ++c) {
                    double s = 0.0;
                    for (std::size_t q = 0; q < rule.size(); ++q) {
                        const Vec3& p = rule.points[q];
                        s += rule.weights[q] * std::pow(p[0], a) * std::pow(p[1], b) * std::pow(p[2], c);
                    }
                    const double exact = factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
                    EXPECT_NEAR(s, exact, 1e-15) << n << ": " << a << b << c;
                }
    }
}

TEST(Quadrature, PointsInsideAndWeightsPositive) {
    const TetRule rule = tet_rule(4);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec3& p = rule.points[q];
        EXPECT_GT(rule.weights[q], 0.0);
        EXPECT_GT(std::min({p[0], p[1], p[2]}), 0.0);
        EXPECT_LT(p[0] + p[1] + p[2], 1.0);
    }
    EXPECT_GE(tet_rule_for_degree(5).degree, 5);
    EXPECT_EQ(tet_rule_for_degree(5).size(), 27u);
}

TEST(Mesh, Counts) {
    const BoxMesh m1 = build_mesh(1, 1, 1);
    EXPECT_EQ(m1.num_tets(), 6u);
    EXPECT_EQ(m1.num_vertices(), 8u);
    EXPECT_EQ(m1.num_edges(), 19u);
    const BoxMesh m2 = build_mesh(2, 2, 2);
    EXPECT_EQ(m2.num_tets(), 48u);
    EXPECT_EQ(m2.num_vertices(), 27u);
    const BoxMesh m3 = build_mesh(3, 2, 4, 1.5, 1.0, 0.5);
    EXPECT_EQ(m3.num_tets(), 6u * 24u);
    EXPECT_DOUBLE_EQ(m3.cell_size(), 0.5);
    EXPECT_THROW(build_mesh(0, 1, 1), InvalidDimensions);
    EXPECT_THROW(build_mesh(1, 1, 1, 1.0, -1.0, 1.0), InvalidDimensions);
}

TEST(Mesh, PositiveVolumesTileTheBox) {
    const BoxMesh m = build_mesh(3, 2, 4, 1.5, 1.0, 0.5);
    double total = 0.0;
    for (std::size_t t = 0; t < m.num_tets(); ++t) {
        EXPECT_GT(m.volume(t), 0.0);
        total += m.volume(t);
    }
    EXPECT_NEAR(total, m.box_volume(), 1e-14);
}

TEST(Mesh, FacesConforming) {
    const BoxMesh m = build_mesh(3, 3, 2, 1.0, 2.0, 1.0);
    std::map<std::array<int, 3>, int> faces;
    for (const auto& t : m.tets)
        for (int skip = 0; skip < 4; ++skip) {
            std::array<int, 3> f{};
            int k = 0;
            for (int i = 0; i < 4; ++i)
                if (i != skip) f[k++] = t[i];
            std::sort(f.begin(), f.end());
            ++faces[f];
        }
    for (const auto& [f, count] : faces) {
        bool on_boundary = false;
        for (int a = 0; a < 3; ++a) {
            const double x0 = m.vertices[f[0]][a];
            if (m.vertices[f[1]][a] == x0 && m.vertices[f[2]][a] == x0 && (x0 == 0.0 || x0 == m.lengths[a]))
                on_boundary = true;
        }
        EXPECT_EQ(count, on_boundary ? 1 : 2);
    }
}

TEST(Mesh, BarycentricGradients) {
    const BoxMesh m = build_mesh(2, 1, 1, 2.0, 1.0, 3.0);
    for (std::size_t t = 0; t < m.num_tets(); ++t) {
        const TetGeometry g = tet_geometry(m, t);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const Vec3& xj = m.vertices[m.tets[t][j]];
                const Vec3& x0 = m.vertices[m.tets[t][0]];
                // L_i(x_j) - L_i(x_0) = delta_ij - delta_i0
                double d = 0.0;
                for (int r = 0; r < 3; ++r) d += g.grad_bary[i][r] * (xj[r] - x0[r]);
                EXPECT_NEAR(d, (i == j) - (i == 0), 1e-13);
            }
    }
}

TEST(TaylorHood, DofCounts) {
    for (int n : {1, 2, 3}) {
        const TaylorHoodSpace s(build_mesh(n, n, n));
        const std::size_t m = 2 * n + 1;
        EXPECT_EQ(s.num_nodes(), m * m * m);
        EXPECT_EQ(s.num_velocity_dofs(), 3 * m * m * m);
        EXPECT_EQ(s.num_pressure_dofs(), static_cast<std::size_t>((n + 1) * (n + 1) * (n + 1)));
        const std::size_t inner = (m - 2) * (m - 2) * (m - 2);
        EXPECT_EQ(s.num_dirichlet(), 3 * (m * m * m - inner));
    }
}

TEST(TaylorHood, P2ReproducesQuadratics) {
    const TaylorHoodSpace s(build_mesh(2, 1, 2, 1.0, 0.5, 2.0));
    auto q = [](const Vec3& x) { return Vec3{x[0] * x[1] - x[2] * x[2], 1 + x[1], x[0] * x[0] + x[2]}; };
    Vector u(s.num_velocity_dofs());
    for (std::size_t n = 0; n < s.num_nodes(); ++n) {
        const Vec3 v = q(s.node(n));
        for (int c = 0; c < 3; ++c) u[3 * n + c] = v[c];
    }
    const TetRule rule = tet_rule(3);
    for (std::size_t t = 0; t < s.mesh().num_tets(); ++t) {
        const TetGeometry g = tet_geometry(s.mesh(), t);
        for (const Vec3& r : rule.points) {
            const Vec3 vh = eval_velocity(s, u, t, r), ve = q(g.map(r));
            for (int c = 0; c < 3; ++c) EXPECT_NEAR(vh[c], ve[c], 1e-13);
        }
    }
}

TEST(TaylorHood, GradientsMatchDifferences) {
    const std::array<double, 4> l{0.1, 0.2, 0.3, 0.4};
    const BoxMesh m = build_mesh(1, 1, 1, 1.0, 2.0, 0.5);
    const TetGeometry g = tet_geometry(m, 3);
    const auto grad = p2_gradients(l, g.grad_bary);
    const double h = 1e-6;
    for (int k = 0; k < 3; ++k) {
        std::array<double, 4> lp = l, lm = l;
        for (int i = 0; i < 4; ++i) {
            lp[i] += h * g.grad_bary[i][k];
            lm[i] -= h * g.grad_bary[i][k];
        }
        const auto vp = p2_values(lp), vm = p2_values(lm);
        for (int i = 0; i < 10; ++i) EXPECT_NEAR(grad[i][k], (vp[i] - vm[i]) / (2 * h), 1e-8);
    }
}

TEST(Assembly, BilinearFormMatchesIndependentQuadrature) {
    Rng rng(41);
    const TaylorHoodSpace s(build_mesh(2, 2, 2, 1.0, 1.5, 0.8));
    const SymTensor3 b = random_spd(rng, 5.0);
    const MuTriple mu{1.0, 0.5, 0.25};
    const SaddleSystem sys = assemble(s, mu.fields(), TensorField::constant(b), VectorFn());
    const Mat3 a = to_mat(acal(mu, b));
    const TetRule rule = tet_rule(3);
    for (int trial = 0; trial < 3; ++trial) {
        const Vector u = random_interior(s, rng), w = random_interior(s, rng);
        double ref = 0.0;
        for (std::size_t t = 0; t < s.mesh().num_tets(); ++t) {
            const double vol = s.mesh().volume(t);
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const Mat3 gu = fd_gradient(s, u, t, rule.points[q]);
                const Mat3 gw = fd_gradient(s, w, t, rule.points[q]);
                const Mat3 d = 0.5 * (gu + gu.transpose());
                const Mat3 stress = d * a + a * d;
                ref += rule.weights[q] * 6 * vol * contract(stress, gw);
            }
        }
        const double val = u.dot(sys.K * w);
        EXPECT_NEAR(val, ref, 1e-8 * (1 + std::abs(ref)));
    }
}

TEST(Assembly, LoadAndDivergenceMatchIndependentQuadrature) {
    Rng rng(42);
    const TaylorHoodSpace s(build_mesh(2, 1, 2));
    const VectorFn f = [](const Vec3& x) { return Vec3{1 + x[0], x[1] * x[2], -2.0}; };
    const SaddleSystem sys = assemble(s, MuFields::constant(1, 0, 0), TensorField(), f);
    const Vector u = random_interior(s, rng);
    Vector q(s.num_pressure_dofs());
    for (Eigen::Index i = 0; i < q.size(); ++i) q[i] = uniform(rng, -1, 1);
    const TetRule rule = tet_rule(4);
    double load = 0.0, div = 0.0, mass = 0.0;
    for (std::size_t t = 0; t < s.mesh().num_tets(); ++t) {
        const TetGeometry g = tet_geometry(s.mesh(), t);
        for (std::size_t k = 0; k < rule.size(); ++k) {
            const Vec3 x = g.map(rule.points[k]);
            const double w = rule.weights[k] * 6 * g.volume;
            const Vec3 v = eval_velocity(s, u, t, rule.points[k]), fx = f(x);
            load += w * (v[0] * fx[0] + v[1] * fx[1] + v[2] * fx[2]);
            const auto l = barycentric(rule.points[k]);
            double qh = 0.0;
            for (int i = 0; i < 4; ++i) qh += l[i] * q[s.mesh().tets[t][i]];
            div -= w * qh * fd_gradient(s, u, t, rule.points[k]).trace();
            mass += w * qh;
        }
    }
    EXPECT_NEAR(sys.F.dot(u), load, 1e-13 * (1 + std::abs(load)));
    EXPECT_NEAR(q.dot(sys.G * u), div, 1e-8 * (1 + std::abs(div)));
    EXPECT_NEAR(sys.m.dot(q), mass, 1e-13);
    EXPECT_NEAR(sys.m.sum(), 1.0, 1e-14);
    // Constants are in the kernel of G^t on the interior.
    EXPECT_NEAR(Vector::Ones(q.size()).dot(sys.G * u), 0.0, 1e-12);
}

TEST(Assembly, DirichletRowsAreIdentity) {
    const TaylorHoodSpace s(build_mesh(2, 2, 2));
    const SaddleSystem sys =
        assemble(s, MuFields::constant(1, 1, 1), TensorField(), [](const Vec3&) { return Vec3{1, 1, 1}; });
    const Eigen::MatrixXd k(sys.K);
    const Eigen::MatrixXd g(sys.G);
    for (Eigen::Index i = 0; i < sys.nu(); ++i) {
        if (!s.dirichlet()[i]) continue;
        EXPECT_EQ(sys.F[i], 0.0);
        EXPECT_EQ(k(i, i), 1.0);
        EXPECT_EQ(k.row(i).cwiseAbs().sum(), 1.0);
        EXPECT_EQ(k.col(i).cwiseAbs().sum(), 1.0);
        EXPECT_EQ(g.col(i).cwiseAbs().sum(), 0.0);
    }
}

TEST(Assembly, StiffnessIsExactlySymmetric) {
    const TaylorHoodSpace s(build_mesh(2, 3, 2));
    const TensorField b = TensorField::expression({"2+x", "1+y^2", "1.5", "0.3*z", "0.1*x*y", "0"});
    const MuFields mu{ScalarField::expression("1+0.5*x"), ScalarField::constant(0.3), ScalarField::constant(0.2)};
    const SaddleSystem sys = assemble(s, mu, b, VectorFn());
    const SparseMatrix kt = sys.K.transpose();
    EXPECT_EQ((sys.K - kt).norm(), 0.0);
    const SparseMatrix kkt = sys.kkt();
    EXPECT_EQ((kkt - SparseMatrix(kkt.transpose())).norm(), 0.0);
    EXPECT_EQ(kkt.rows(), sys.nu() + sys.np() + 1);
}

TEST(Assembly, ThreadCountDoesNotChangeResult) {
    const TaylorHoodSpace s(build_mesh(3, 2, 2));
    const TensorField b = TensorField::expression({"2+x", "1+y^2", "1.5", "0.3*z", "0.1*x*y", "0"});
    const VectorFn f = [](const Vec3& x) { return Vec3{std::sin(x[0]), x[1], x[2] * x[0]}; };
    const MuFields mu = MuFields::constant(1, 0.5, 0.5);
    const SaddleSystem a = assemble(s, mu, b, f, {3, 1});
    for (int threads : {2, 3, 7}) {
        const SaddleSystem c = assemble(s, mu, b, f, {3, threads});
        EXPECT_EQ((a.K - c.K).norm(), 0.0);
        EXPECT_EQ((a.G - c.G).norm(), 0.0);
        EXPECT_EQ((a.F - c.F).norm(), 0.0);
        EXPECT_EQ(a.coeff.alpha, c.coeff.alpha);
    }
}

TEST(Assembly, KornIdentity) {
    Rng rng(43);
    const TaylorHoodSpace s(build_mesh(2, 2, 3, 1.0, 1.0, 2.0));
    for (int n = 0; n < 10; ++n) {
        const KornTerms k = korn_terms(s, random_interior(s, rng));
        EXPECT_NEAR(k.sym, 0.5 * k.grad + 0.5 * k.div, 1e-10 * k.grad);
    }
    Vector bad = Vector::Zero(s.num_velocity_dofs());
    bad[0] = 1.0;
    EXPECT_THROW(korn_terms(s, bad), BCViolation);
}

TEST(Assembly, CoercivitySandwich) {
    Rng rng(44);
    const TaylorHoodSpace s(build_mesh(2, 2, 2));
    for (int n = 0; n < 10; ++n) {
        const MuTriple mu{uniform(rng, 0.5, 2), uniform(rng, 0, 1), uniform(rng, 0, 1)};
        const SymTensor3 b = random_spd(rng, 20.0);
        const SaddleSystem sys = assemble(s, mu.fields(), TensorField::constant(b), VectorFn());
        const Vector u = random_interior(s, rng);
        const double e = u.dot(sys.K * u);
        const double g2 = korn_terms(s, u).grad;
        EXPECT_GE(e, sys.coeff.alpha * g2 * (1 - 1e-12));
        EXPECT_LE(e, 2 * sys.coeff.a_norm * g2 * (1 + 1e-12));
    }
}

TEST(Assembly, CoefficientStatsAndFailures) {
    const TaylorHoodSpace s(build_mesh(1, 1, 1));
    const SaddleSystem sys =
        assemble(s, MuFields::constant(1, 1, 1), TensorField::constant(SymTensor3::diag(2, 0.5, 1)), VectorFn());
    EXPECT_NEAR(sys.coeff.alpha, 3.0, 1e-14);
    EXPECT_NEAR(sys.coeff.a_norm, 3.5, 1e-14);
    EXPECT_EQ(sys.coeff.samples, 6u * 27u);
    EXPECT_EQ(quadrature_points(s.mesh(), 3).size(), 6u * 27u);
    EXPECT_THROW(assemble(s, MuFields::constant(-2.5, 4, 0.25), TensorField::constant(SymTensor3::diag(2, 0.5, 1)),
                          VectorFn()),
                 NotElliptic);
    EXPECT_THROW(assemble(s, MuFields::constant(1, 0, 0), TensorField::constant(SymTensor3::diag(1, 1, -1)), VectorFn()),
                 NotSPD);
}

TEST(Norms, L2AndErrorNorms) {
    const TaylorHoodSpace s(build_mesh(2, 2, 2, 1.0, 2.0, 1.0));
    EXPECT_NEAR(l2_norm(s.mesh(), [](const Vec3& x) { return Vec3{x[0], 0, 0}; }), std::sqrt(2.0 / 3.0), 1e-14);
    // Exact interpolant of a quadratic and a pressure shifted by a constant: zero error.
    auto v = [](const Vec3& x) { return Vec3{x[0] * x[1], x[2] * x[2], 1 - x[0]}; };
    auto gv = [](const Vec3& x) {
        Mat3 g;
        g(0, 0) = x[1];
        g(0, 1) = x[0];
        g(1, 2) = 2 * x[2];
        g(2, 0) = -1;
        return g;
    };
    auto p = [](const Vec3& x) { return 2 * x[0] - x[1] + 0.5 * x[2]; };
    Vector u(s.num_velocity_dofs()), ph(s.num_pressure_dofs());
    for (std::size_t n = 0; n < s.num_nodes(); ++n)
        for (int c = 0; c < 3; ++c) u[3 * n + c] = v(s.node(n))[c];
    for (std::size_t n = 0; n < s.num_pressure_dofs(); ++n) ph[n] = p(s.mesh().vertices[n]) + 7.0;
    const ErrorNorms e = error_norms(s, u, ph, v, gv, p);
    EXPECT_LT(e.v_l2, 1e-13);
    EXPECT_LT(e.v_h1, 1e-12);
    EXPECT_LT(e.p_l2, 1e-6);
}

TEST(Vtk, QuadraticTetraLayout) {
    const TaylorHoodSpace s(build_mesh(1, 2, 1));
    Vector u = Vector::Zero(s.num_velocity_dofs());
    for (std::size_t n = 0; n < s.num_nodes(); ++n) u[3 * n + 1] = s.node(n)[0];
    Vector p(s.num_pressure_dofs());
    for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = s.node(i)[2];
    const std::vector<double> alpha = cell_alpha(s, MuFields::constant(1, 1, 1), TensorField());
    ASSERT_EQ(alpha.size(), s.mesh().num_tets());
    for (double a : alpha) EXPECT_DOUBLE_EQ(a, 3.0);

    std::stringstream out;
    write_vtk(out, s, u, p, alpha);
    std::string line;
    std::getline(out, line);
    EXPECT_EQ(line, "# vtk DataFile Version 3.0");
    std::string word;
    std::size_t count = 0;
    while (out >> word && word != "POINTS") {
    }
    out >> count >> word;
    ASSERT_EQ(count, s.num_nodes());
    std::vector<Vec3> pts(count);
    for (auto& x : pts) out >> x[0] >> x[1] >> x[2];
    std::size_t cells = 0, total = 0;
    out >> word >> cells >> total;
    ASSERT_EQ(word, "CELLS");
    ASSERT_EQ(cells, s.mesh().num_tets());
    EXPECT_EQ(total, 11 * cells);
    // VTK edge order: 01 12 20 03 13 23.
    const int ends[6][2] = {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {1, 3}, {2, 3}};
    for (std::size_t c = 0; c < cells; ++c) {
        int k = 0;
        std::array<int, 10> id{};
        out >> k;
        ASSERT_EQ(k, 10);
        for (int& i : id) out >> i;
        for (int e = 0; e < 6; ++e)
            for (int a = 0; a < 3; ++a)
                EXPECT_DOUBLE_EQ(pts[id[4 + e]][a], 0.5 * (pts[id[ends[e][0]]][a] + pts[id[ends[e][1]]][a]));
    }
    out >> word >> cells;
    EXPECT_EQ(word, "CELL_TYPES");
    for (std::size_t c = 0; c < cells; ++c) {
        int type = 0;
        out >> type;
        EXPECT_EQ(type, 24);
    }
    out >> word >> count >> word >> word >> word;
    ASSERT_EQ(word, "double");
    for (std::size_t n = 0; n < count; ++n) {
        Vec3 v;
        out >> v[0] >> v[1] >> v[2];
        EXPECT_EQ(v[1], pts[n][0]);
    }
    out >> word >> word >> word >> word >> word >> word;
    ASSERT_EQ(word, "default");
    for (std::size_t n = 0; n < count; ++n) {
        double q = 0;
        out >> q;
        EXPECT_NEAR(q, pts[n][2], 1e-15);
    }
    out >> word >> cells;
    EXPECT_EQ(word, "CELL_DATA");
}
