#include "vestokes/verification.hpp"

#include <cmath>

#include "vestokes/quadrature.hpp"

namespace vestokes {

namespace {

std::map<int, double> scaled(const std::vector<double>& semi, double lambda) {
    std::map<int, double> out;
    for (std::size_t k = 0; k < semi.size(); ++k) {
        double v = 0.0;
        for (std::size_t j = 0; j <= k; ++j) v += std::pow(lambda, 0.5 * double(k - j)) * semi[j];
        out[static_cast<int>(k)] = v;
    }
    return out;
}

std::vector<ScalarField> fields_of(const ExprVec& v) {
    return {ScalarField::expression(v[0]), ScalarField::expression(v[1]), ScalarField::expression(v[2])};
}

BoundAudit ratio_entry(std::string id, std::string statement, double lhs, double rhs, std::string note = {}) {
    BoundAudit a;
    a.id = std::move(id);
    a.statement = std::move(statement);
    a.lhs = lhs;
    a.rhs = rhs;
    a.note = std::move(note);
    return a;
}

}  // namespace

DataNorms data_norms(const MuFields& mu, const TensorField& b, const std::array<ScalarField, 3>& f, const Vec3& lengths,
                     const DataNormOptions& opts) {
    DataNorms d;
    d.lambda1 = first_eigenvalue(lengths);
    const SampleSet s = gauss_box({opts.cells, opts.cells, opts.cells}, opts.order, lengths);
    const DimNorm fh = dim_norm({f[0], f[1], f[2]}, 2, 2.0, d.lambda1, s);
    d.f_h = scaled(fh.seminorms, d.lambda1);
    d.f_hm1 = d.f_l2() / std::sqrt(d.lambda1);

    const std::vector<ScalarField> a = tensor_entries(acal_grid_field(mu, b, lengths, opts.grid_nodes));
    d.a_linf = seminorm(a, 0, kLinf, s);
    d.a_w1inf = dim_norm(a, 1, kLinf, d.lambda1, s).value;
    d.a_d2_l3 = seminorm(a, 2, 3.0, s);
    d.a_h[3] = dim_norm(a, 3, 2.0, d.lambda1, s).value;
    return d;
}

ExactSeminorms exact_seminorms(const MMSCase& c, const DataNormOptions& opts) {
    const SampleSet s = gauss_box({opts.cells, opts.cells, opts.cells}, opts.order, c.lengths);
    const std::vector<ScalarField> v = fields_of(c.v);
    const std::vector<ScalarField> p{ScalarField::expression(c.p)};
    ExactSeminorms e;
    e.d3v = seminorm(v, 3, 2.0, s);
    e.d4v = seminorm(v, 4, 2.0, s);
    e.d2p = seminorm(p, 2, 2.0, s);
    e.d3p = seminorm(p, 3, 2.0, s);
    return e;
}

std::vector<BoundAudit> audit_estimates(const DiscreteNorms& lhs, double alpha, const DataNorms& data,
                                        const ExactSeminorms* exact) {
    std::vector<BoundAudit> out;
    const double f = data.f_l2();

    BoundAudit g;
    g.id = "grad_v";
    g.statement = "|grad v_h| <= lambda1^{-1/2} |f|_L2 / alpha";
    g.lhs = lhs.grad_v;
    g.rhs = data.f_hm1 / alpha;
    g.satisfied = bound_holds(g.lhs, g.rhs);
    out.push_back(g);

    const double b2 = h2_bracket(alpha, f, data.a_w1inf, data.f_hm1) / alpha;
    const double b3 =
        h3_bracket(alpha, data.f_h.at(1), data.a_w1inf, data.a_d2_l3, f, data.f_hm1) / alpha;
    const std::string unresolved = "lhs from the exact solution; not representable by P2/P1";

    out.push_back(ratio_entry("p_l2", "|p_h|_{L2/R} <= c |A|_inf |f|_H-1 / alpha", lhs.p_l2,
                              data.a_linf * data.f_hm1 / alpha));
    out.push_back(ratio_entry("d2v", "|D^2 v_h| <= c (|f| + |A|_W1inf |f|_H-1 / alpha) / alpha", lhs.d2v, b2,
                              "broken Hessian of the discrete velocity"));
    out.push_back(ratio_entry("grad_p", "|grad p_h| <= c |A|_inf (|f| + |A|_W1inf |f|_H-1 / alpha) / alpha",
                              lhs.grad_p, data.a_linf * b2));
    if (exact) {
        out.push_back(ratio_entry("d3v", "|D^3 v| <= c (|f|_H1 + (|A|_W1inf + |D^2 A|_L3) h2 / alpha) / alpha",
                                  exact->d3v, b3, unresolved));
        out.push_back(ratio_entry("d2p", "|D^2 p| <= c |A|_inf h3 / alpha", exact->d2p, data.a_linf * b3, unresolved));
        RkInputs in;
        in.f_h = data.f_h;
        in.f_hm1 = data.f_hm1;
        in.a_w1inf = data.a_w1inf;
        in.a_d2_l3 = data.a_d2_l3;
        in.a_h = data.a_h;
        const double r2 = rk_evaluate(alpha, data.lambda1, in, 2) / alpha;
        out.push_back(ratio_entry("d4v", "|D^4 v| <= c R_2 / alpha", exact->d4v, r2, unresolved));
        out.push_back(ratio_entry("d3p", "|D^3 p| <= c |A|_inf R_2 / alpha", exact->d3p, data.a_linf * r2, unresolved));
    }
    return out;
}

std::vector<GuardResult> blow_up_guard(const std::vector<BoundAudit>& coarse, const std::vector<BoundAudit>& fine,
                                       double factor) {
    std::vector<GuardResult> out;
    for (const auto& c : coarse) {
        if (!c.ratio_only()) continue;
        for (const auto& f : fine) {
            if (f.id != c.id) continue;
            GuardResult r{c.id, c.ratio(), f.ratio(), true};
            r.ok = std::isfinite(r.fine) && r.fine <= factor * r.coarse;
            out.push_back(r);
        }
    }
    return out;
}

std::vector<NamedTensorField> shipped_b_fields() {
    return {
        {"sheared-stretch",
         {"exp(0.4*cos(pi*y)*z) + (0.4*sin(pi*x)*y)^2*exp(0.2*x*z)", "exp(0.2*x*z)",
          "exp(-0.4*cos(pi*y)*z - 0.2*x*z)", "0.4*sin(pi*x)*y*exp(0.2*x*z)", "0", "0"}},
        {"diagonal-stretch",
         {"exp(0.3*sin(pi*x))", "exp(0.2*cos(pi*y*z))", "exp(-0.3*sin(pi*x) - 0.2*cos(pi*y*z))", "0", "0", "0"}},
        {"rotated-stretch",
         {"cos(pi*x*y/2)^2*exp(0.5*z) + sin(pi*x*y/2)^2*exp(-0.5*z)",
          "sin(pi*x*y/2)^2*exp(0.5*z) + cos(pi*x*y/2)^2*exp(-0.5*z)", "1",
          "cos(pi*x*y/2)*sin(pi*x*y/2)*(exp(0.5*z) - exp(-0.5*z))", "0", "0"}},
        {"simple-shear", {"1 + (0.5*sin(pi*y))^2", "1", "1", "0", "0.5*sin(pi*y)", "0"}},
        {"uniaxial", {"(1 + 0.3*x*y*z)^2", "1/(1 + 0.3*x*y*z)", "1/(1 + 0.3*x*y*z)", "0", "0", "0"}},
    };
}

}  // namespace vestokes
