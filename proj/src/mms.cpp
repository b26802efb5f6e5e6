#include "vestokes/mms.hpp"

#include <cmath>
#include <iomanip>

#include "vestokes/errors.hpp"

namespace vestokes {

namespace {

Expr div_free_potential() { return Expr::parse("(x*(1-x)*y*(1-y)*z*(1-z))^2"); }

ExprVec curl_of_diagonal(const Expr& psi) {
    const Expr px = psi.diff(0), py = psi.diff(1), pz = psi.diff(2);
    return {py - pz, pz - px, px - py};
}

ExprTensor sheared_stretch() {
    const Expr s = Expr::parse("0.4*sin(pi*x)*y");
    const Expr l1 = Expr::parse("exp(0.4*cos(pi*y)*z)");
    const Expr l2 = Expr::parse("exp(0.2*x*z)");
    const Expr l3 = Expr::parse("exp(-0.4*cos(pi*y)*z - 0.2*x*z)");
    return {l1 + s * s * l2, l2, l3, s * l2, Expr(0.0), Expr(0.0)};
}

// Full 3x3 access into slot storage.
const Expr& at(const ExprTensor& t, int i, int j) {
    static constexpr int kSlot[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
    return t[kSlot[i][j]];
}

}  // namespace

MuFields MMSCase::mu_fields() const {
    return {ScalarField::expression(mu[0]), ScalarField::expression(mu[1]), ScalarField::expression(mu[2])};
}

TensorField MMSCase::b_field() const {
    std::array<ScalarField, 6> c;
    for (int k = 0; k < 6; ++k) c[k] = ScalarField::expression(b[k]);
    return TensorField(c);
}

VectorFn MMSCase::velocity() const {
    const std::array<CompiledExpr, 3> e{CompiledExpr(v[0]), CompiledExpr(v[1]), CompiledExpr(v[2])};
    return [e](const Vec3& x) { return Vec3{e[0](x), e[1](x), e[2](x)}; };
}

MatrixFn MMSCase::velocity_gradient() const {
    std::array<std::array<CompiledExpr, 3>, 3> g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g[i][j] = CompiledExpr(v[i].diff(j));
    return [g](const Vec3& x) {
        Mat3 m;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = g[i][j](x);
        return m;
    };
}

ScalarFn MMSCase::pressure() const {
    const CompiledExpr e(p);
    return [e](const Vec3& x) { return e(x); };
}

MMSCase classical_case() {
    MMSCase c;
    c.name = "classical";
    c.v = curl_of_diagonal(div_free_potential());
    c.p = Expr::parse("cos(pi*x)");
    return c;
}

MMSCase anisotropic_case() {
    MMSCase c = classical_case();
    c.name = "anisotropic";
    c.mu = {Expr(1.0), Expr(1.0), Expr(1.0)};
    c.b = sheared_stretch();
    return c;
}

MMSCase zero_case() {
    MMSCase c;
    c.name = "zero";
    c.v = {Expr(0.0), Expr(0.0), Expr(0.0)};
    c.p = Expr(0.0);
    return c;
}

std::vector<std::string> mms_case_names() { return {"classical", "anisotropic", "zero"}; }

MMSCase mms_case(const std::string& name) {
    if (name == "classical") return classical_case();
    if (name == "anisotropic") return anisotropic_case();
    if (name == "zero") return zero_case();
    throw ConfigError("unknown MMS case '" + name + "' (expected classical, anisotropic or zero)");
}

ExprTensor acal_expr(const std::array<Expr, 3>& mu, const ExprTensor& b) {
    const Expr &b11 = b[0], &b22 = b[1], &b33 = b[2], &b12 = b[3], &b13 = b[4], &b23 = b[5];
    const ExprTensor adj{b22 * b33 - b23 * b23, b11 * b33 - b13 * b13, b11 * b22 - b12 * b12,
                         b13 * b23 - b12 * b33, b12 * b23 - b13 * b22, b12 * b13 - b11 * b23};
    const Expr det = b11 * adj[0] + b12 * adj[3] + b13 * adj[4];
    ExprTensor a;
    for (int k = 0; k < 6; ++k) {
        const Expr id = k < 3 ? mu[0] : Expr(0.0);
        a[k] = id + mu[1] * b[k] + mu[2] * adj[k] / det;
    }
    return a;
}

ExprVec mms_forcing(const MMSCase& c) {
    const ExprTensor a = acal_expr(c.mu, c.b);
    std::array<std::array<Expr, 3>, 3> d;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) d[i][j] = Expr(0.5) * (c.v[i].diff(j) + c.v[j].diff(i));
    ExprVec f;
    for (int i = 0; i < 3; ++i) {
        Expr fi = c.p.diff(i);
        for (int j = 0; j < 3; ++j) {
            Expr sij(0.0);
            for (int k = 0; k < 3; ++k) sij = sij + d[i][k] * at(a, k, j) + at(a, i, k) * d[k][j];
            fi = fi - sij.diff(j);
        }
        f[i] = fi;
    }
    return f;
}

std::array<ScalarField, 3> to_fields(const ExprVec& e) {
    return {ScalarField::expression(e[0]), ScalarField::expression(e[1]), ScalarField::expression(e[2])};
}

double observed_rate(double coarse, double fine) { return std::log2(coarse / fine); }

namespace {

std::optional<double> min_of(const std::vector<ConvergenceRow>& rows, std::optional<double> ConvergenceRow::*m) {
    std::optional<double> out;
    for (const auto& r : rows)
        if (r.*m) out = out ? std::min(*out, *(r.*m)) : *(r.*m);
    return out;
}

}  // namespace

std::optional<double> ConvergenceTable::min_rate_v_l2() const { return min_of(rows, &ConvergenceRow::rate_v_l2); }
std::optional<double> ConvergenceTable::min_rate_v_h1() const { return min_of(rows, &ConvergenceRow::rate_v_h1); }
std::optional<double> ConvergenceTable::min_rate_p_l2() const { return min_of(rows, &ConvergenceRow::rate_p_l2); }

void ConvergenceTable::write_csv(std::ostream& out) const {
    auto opt = [&](const std::optional<double>& v) {
        if (v) out << *v;
    };
    out << "case,n,h,velocity_dofs,pressure_dofs,alpha,residual,v_l2,v_h1,p_l2,rate_v_l2,rate_v_h1,rate_p_l2\n";
    const auto flags = out.flags();
    const auto prec = out.precision();
    out << std::setprecision(10);
    for (const auto& r : rows) {
        out << case_name << ',' << r.n << ',' << r.h << ',' << r.nu << ',' << r.np << ',' << r.alpha << ','
            << r.residual << ',' << r.errors.v_l2 << ',' << r.errors.v_h1 << ',' << r.errors.p_l2 << ',';
        opt(r.rate_v_l2);
        out << ',';
        opt(r.rate_v_h1);
        out << ',';
        opt(r.rate_p_l2);
        out << '\n';
    }
    out.flags(flags);
    out.precision(prec);
}

ConvergenceTable run_convergence(const MMSCase& c, const std::vector<int>& meshes, const ConvergenceOptions& opts,
                                 const LevelHook& hook) {
    if (meshes.empty()) throw ConfigError("mesh sequence is empty");
    for (std::size_t i = 1; i < meshes.size(); ++i)
        if (meshes[i] != 2 * meshes[i - 1]) throw ConfigError("mesh sequence must double at each step");
    const ExprVec f = mms_forcing(c);
    const VectorFn force = make_vector_fn(to_fields(f));
    const MuFields mu = c.mu_fields();
    const TensorField b = c.b_field();
    ConvergenceTable table;
    table.case_name = c.name;
    for (int n : meshes) {
        const TaylorHoodSpace space(build_mesh(n, n, n, c.lengths[0], c.lengths[1], c.lengths[2]));
        const SaddleSystem sys = assemble(space, mu, b, force, {opts.quad_points, opts.threads, opts.load_quad_points});
        const SolveResult res = opts.uzawa ? uzawa_solve(sys, opts.uzawa_opts) : solve(sys, opts.solve);
        ConvergenceRow row;
        row.n = n;
        row.h = space.mesh().cell_size();
        row.nu = sys.nu();
        row.np = sys.np();
        row.alpha = sys.coeff.alpha;
        row.residual = res.residual;
        row.errors = error_norms(space, res.u, res.p, c.velocity(), c.velocity_gradient(), c.pressure(),
                                 opts.error_quad_points);
        if (!table.rows.empty()) {
            const ErrorNorms& e = table.rows.back().errors;
            row.rate_v_l2 = observed_rate(e.v_l2, row.errors.v_l2);
            row.rate_v_h1 = observed_rate(e.v_h1, row.errors.v_h1);
            row.rate_p_l2 = observed_rate(e.p_l2, row.errors.p_l2);
        }
        if (hook) hook(space, sys, res);
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace vestokes
