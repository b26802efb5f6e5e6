#include "vestokes/norms.hpp"

#include <cmath>

#include "vestokes/constitutive.hpp"
#include "vestokes/errors.hpp"

namespace vestokes {

namespace {

// Derivative fields D^gamma c for every component and nondecreasing axis
// sequence of length j.
std::vector<ScalarField> derivative_fields(const std::vector<ScalarField>& comps, int j) {
    std::vector<ScalarField> cur = comps;
    std::vector<int> last(comps.size(), 0);
    for (int order = 0; order < j; ++order) {
        std::vector<ScalarField> next;
        std::vector<int> next_last;
        for (std::size_t n = 0; n < cur.size(); ++n)
            for (int a = last[n]; a < 3; ++a) {
                next.push_back(cur[n].diff(a));
                next_last.push_back(a);
            }
        cur = std::move(next);
        last = std::move(next_last);
    }
    return cur;
}

double lp_of(const std::vector<ScalarField>& fields, double p, const SampleSet& s) {
    double acc = 0.0;
    for (std::size_t q = 0; q < s.size(); ++q) {
        double sq = 0.0;
        for (const auto& f : fields) {
            const double v = f.value(s.points[q]);
            sq += v * v;
        }
        const double mag = std::sqrt(sq);
        if (p == kLinf) {
            acc = std::max(acc, mag);
        } else {
            acc += s.weights[q] * std::pow(mag, p);
        }
    }
    return p == kLinf ? acc : std::pow(acc, 1.0 / p);
}

const double& need(const std::optional<double>& v, const char* name) {
    if (!v) throw MissingNormInput(std::string("missing norm input: ") + name);
    return *v;
}

double need(const std::map<int, double>& m, int key, const char* name) {
    const auto it = m.find(key);
    if (it == m.end()) throw MissingNormInput(std::string("missing norm input: ") + name + " order " + std::to_string(key));
    return it->second;
}

}  // namespace

double seminorm(const std::vector<ScalarField>& components, int j, double p, const SampleSet& s) {
    if (j < 0) throw DomainError("derivative order must be nonnegative");
    if (!(p >= 1.0)) throw DomainError("exponent p must be >= 1");
    return lp_of(derivative_fields(components, j), p, s);
}

DimNorm dim_norm(const std::vector<ScalarField>& components, int k, double p, double lambda, const SampleSet& s) {
    if (k < 0) throw DomainError("order k must be nonnegative");
    if (!(lambda > 0.0)) throw DomainError("scale lambda must be positive");
    DimNorm d;
    d.k = k;
    d.p = p;
    d.lambda = lambda;
    for (int j = 0; j <= k; ++j) {
        d.seminorms.push_back(seminorm(components, j, p, s));
        d.value += std::pow(lambda, 0.5 * (k - j)) * d.seminorms.back();
    }
    return d;
}

std::vector<ScalarField> tensor_entries(const TensorField& t) {
    const auto& c = t.components();
    // a11 a22 a33 a12 a13 a23 -> full 3x3
    return {c[0], c[3], c[4], c[3], c[1], c[5], c[4], c[5], c[2]};
}

TensorField acal_grid_field(const MuFields& mu, const TensorField& b, const Vec3& lengths, int nodes_per_axis) {
    if (mu.mu1.is_constant() && mu.mu2.is_constant() && mu.mu3.is_constant() && b.is_constant()) {
        return TensorField::constant(acal(mu, b, {0.0, 0.0, 0.0}));
    }
    std::array<GridData, 6> g;
    for (auto& d : g) {
        d.nodes = {nodes_per_axis, nodes_per_axis, nodes_per_axis};
        d.lengths = lengths;
        d.values.resize(d.size());
    }
    for (int i = 0; i < nodes_per_axis; ++i)
        for (int j = 0; j < nodes_per_axis; ++j)
            for (int k = 0; k < nodes_per_axis; ++k) {
                const Vec3 x = g[0].position(i, j, k);
                const SymTensor3 a = acal(mu, b, x);
                for (int c = 0; c < 6; ++c) g[c].values[g[c].index(i, j, k)] = a.slot(c);
            }
    std::array<ScalarField, 6> comps;
    for (int c = 0; c < 6; ++c) comps[c] = ScalarField::grid(std::move(g[c]));
    return TensorField(comps);
}

double h2_bracket(double alpha, double f_l2, double a_w1inf, double f_hm1) { return f_l2 + a_w1inf * f_hm1 / alpha; }

double h3_bracket(double alpha, double f_h1, double a_w1inf, double a_d2_l3, double f_l2, double f_hm1) {
    return f_h1 + (a_w1inf + a_d2_l3) / alpha * h2_bracket(alpha, f_l2, a_w1inf, f_hm1);
}

double rk_evaluate(double alpha, double lambda1, const RkInputs& in, int k) {
    if (k < 2) throw DomainError("R_k is defined for k >= 2");
    if (!(alpha > 0.0) || !(lambda1 > 0.0)) throw DomainError("alpha and lambda1 must be positive");
    auto a_sum = [&](int n) {
        double s = 0.0;
        for (int i = 1; i <= n; ++i) {
            const double e = static_cast<double>(n) / i;
            s += std::pow(alpha, -e) * std::pow(lambda1, -e / 4.0) * std::pow(need(in.a_h, i + 2, "|A|_H"), e);
        }
        return s;
    };
    double r = need(in.f_h, k, "|f|_H");
    for (int j = 2; j <= k - 1; ++j) r += a_sum(k - j) * need(in.f_h, j, "|f|_H");
    const double bracket = h3_bracket(alpha, need(in.f_h, 1, "|f|_H"), need(in.a_w1inf, "|A|_W1inf"),
                                      need(in.a_d2_l3, "|D2A|_L3"), need(in.f_h, 0, "|f|_H"),
                                      need(in.f_hm1, "|f|_H-1"));
    return r + a_sum(k - 1) * bracket;
}

}  // namespace vestokes
