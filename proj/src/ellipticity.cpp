#include "vestokes/ellipticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vestokes/errors.hpp"

namespace vestokes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

bool close(double a, double b, double rtol) {
    if (a == b) return true;
    if (std::isinf(a) || std::isinf(b)) return false;
    return std::abs(a - b) <= rtol * std::max({std::abs(a), std::abs(b), 1e-300});
}

double p_eval(const MuTriple& mu, double l) { return (mu.mu2 * l + mu.mu1) * l + mu.mu3; }

// Positive roots of p, ascending, double roots merged.
std::vector<double> positive_roots(const MuTriple& mu) {
    std::vector<double> r;
    if (mu.mu2 != 0.0) {
        if (auto rr = roots(mu)) {
            r = {rr->first, rr->second};
        }
    } else if (mu.mu1 != 0.0) {
        r = {-mu.mu3 / mu.mu1};
    }
    r.erase(std::remove_if(r.begin(), r.end(), [](double v) { return !(v > 0.0); }), r.end());
    std::sort(r.begin(), r.end());
    if (r.size() == 2 && close(r[0], r[1], 1e-12)) r.pop_back();
    return r;
}

IntervalSet sign_analysis(const MuTriple& mu) {
    std::vector<double> cuts{0.0};
    for (double v : positive_roots(mu)) cuts.push_back(v);
    cuts.push_back(kInf);
    std::vector<Interval> parts;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        double t;
        if (std::isinf(b)) {
            t = a > 0.0 ? 2.0 * a : 1.0;
        } else {
            t = 0.5 * (a + b);
        }
        if (p_eval(mu, t) > 0.0) parts.push_back({a, b});
    }
    return IntervalSet(std::move(parts));
}

IntervalSet case_table(Scenario s, const MuTriple& mu) {
    auto r = [&]() { return mu.mu2 != 0.0 ? roots(mu) : std::nullopt; };
    switch (s) {
        case Scenario::I:
        case Scenario::III:
        case Scenario::VI:
            return IntervalSet::positive_axis();
        case Scenario::II: {
            const auto rr = r();
            if (!rr) return {};
            return IntervalSet({{0.0, rr->first}, {rr->second, kInf}});
        }
        case Scenario::IV:
            return IntervalSet({{0.0, -mu.mu3 / mu.mu1}});
        case Scenario::V: {
            const auto rr = r();
            if (!rr) return {};
            return IntervalSet({{0.0, rr->second}});
        }
        case Scenario::VII:
            return IntervalSet({{-mu.mu1 / mu.mu2, kInf}});
        case Scenario::VIII:
            return IntervalSet({{0.0, -mu.mu1 / mu.mu2}});
        case Scenario::IX: {
            const auto rr = r();
            if (!rr) return {};
            return IntervalSet({{rr->second, kInf}});
        }
        case Scenario::X: {
            const auto rr = r();
            if (!rr) return {};
            return IntervalSet({{rr->first, rr->second}});
        }
        case Scenario::XI:
            return IntervalSet({{-mu.mu3 / mu.mu1, kInf}});
        case Scenario::NotThermodynamic:
            break;
    }
    return {};
}

}  // namespace

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) {
    std::sort(parts_.begin(), parts_.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t k = 0; k < parts_.size(); ++k) {
        const Interval& iv = parts_[k];
        if (!(iv.lo >= 0.0) || !(iv.hi > iv.lo)) {
            throw DomainError("interval (" + fmt(iv.lo) + ", " + fmt(iv.hi) + ") is empty or has negative endpoint");
        }
        if (k > 0 && parts_[k - 1].hi > iv.lo) throw DomainError("intervals overlap");
    }
}

IntervalSet IntervalSet::positive_axis() { return IntervalSet({{0.0, kInf}}); }

bool IntervalSet::is_positive_axis() const {
    return parts_.size() == 1 && parts_[0].lo == 0.0 && std::isinf(parts_[0].hi);
}

bool IntervalSet::contains(double x) const {
    return std::any_of(parts_.begin(), parts_.end(), [x](const Interval& iv) { return iv.contains(x); });
}

double IntervalSet::margin(double x) const {
    if (parts_.empty()) return -kInf;
    for (const Interval& iv : parts_) {
        if (iv.contains(x)) {
            double d = kInf;
            if (iv.lo > 0.0) d = std::min(d, x - iv.lo);
            if (!std::isinf(iv.hi)) d = std::min(d, iv.hi - x);
            return d;
        }
    }
    double d = kInf;
    for (const Interval& iv : parts_) {
        d = std::min(d, std::abs(x - iv.lo));
        if (!std::isinf(iv.hi)) d = std::min(d, std::abs(x - iv.hi));
    }
    return -d;
}

bool IntervalSet::approx_equal(const IntervalSet& other, double rtol) const {
    if (parts_.size() != other.parts_.size()) return false;
    for (std::size_t k = 0; k < parts_.size(); ++k) {
        if (!close(parts_[k].lo, other.parts_[k].lo, rtol) || !close(parts_[k].hi, other.parts_[k].hi, rtol)) {
            return false;
        }
    }
    return true;
}

std::string IntervalSet::str() const {
    if (parts_.empty()) return "empty";
    std::string s;
    for (std::size_t k = 0; k < parts_.size(); ++k) {
        if (k) s += " U ";
        s += "(" + fmt(parts_[k].lo) + ", " + fmt(parts_[k].hi) + ")";
    }
    return s;
}

std::string scenario_label(Scenario s) {
    static const char* names[] = {"(i)", "(ii)", "(iii)", "(iv)", "(v)", "(vi)",
                                  "(vii)", "(viii)", "(ix)", "(x)", "(xi)"};
    if (s == Scenario::NotThermodynamic) return "not-thermodynamic";
    return names[static_cast<int>(s) - 1];
}

std::optional<std::pair<double, double>> roots(const MuTriple& mu) {
    if (mu.mu2 == 0.0) throw DegenerateQuadratic("mu2 = 0: p is linear, root is -mu3/mu1");
    const double disc = mu.mu1 * mu.mu1 - 4.0 * mu.mu2 * mu.mu3;
    if (disc < 0.0) return std::nullopt;
    const double q = -0.5 * (mu.mu1 + std::copysign(std::sqrt(disc), mu.mu1));
    double r1 = q / mu.mu2;
    double r2 = q != 0.0 ? mu.mu3 / q : r1;
    if (r1 > r2) std::swap(r1, r2);
    return std::make_pair(r1, r2);
}

Scenario scenario_of(const MuTriple& mu) {
    const double m1 = mu.mu1, m2 = mu.mu2, m3 = mu.mu3;
    if (!mu.thermodynamic()) return Scenario::NotThermodynamic;
    if (m3 > 0.0) {
        if (m2 > 0.0) return m1 > -2.0 * std::sqrt(m2 * m3) ? Scenario::I : Scenario::II;
        if (m2 == 0.0) return m1 >= 0.0 ? Scenario::III : Scenario::IV;
        return Scenario::V;
    }
    if (m3 == 0.0) {
        if (m1 >= 0.0 && m2 >= 0.0) return Scenario::VI;
        if (m2 > 0.0) return Scenario::VII;
        return Scenario::VIII;
    }
    if (m2 > 0.0) return Scenario::IX;
    if (m2 < 0.0) return Scenario::X;
    return Scenario::XI;
}

Classification classify(const MuTriple& mu) {
    Classification c;
    c.lambda = sign_analysis(mu);
    c.scenario = scenario_of(mu);
    if (c.scenario != Scenario::NotThermodynamic) {
        c.case_consistent = case_table(c.scenario, mu).approx_equal(c.lambda, 1e-9);
    }
    return c;
}

EllipticityReport alpha_field(const MuFields& mu, const TensorField& b, const std::vector<Vec3>& points) {
    if (points.empty()) throw DomainError("alpha_field needs at least one sample point");
    EllipticityReport rep;
    rep.alpha = kInf;
    rep.min_eigenvalue = kInf;
    rep.max_eigenvalue = -kInf;
    rep.samples = points.size();

    std::optional<Classification> cls;
    if (mu.is_constant()) {
        cls = classify({mu.mu1.constant_value(), mu.mu2.constant_value(), mu.mu3.constant_value()});
        rep.scenario = cls->scenario;
        rep.lambda = cls->lambda;
        rep.margin = kInf;
    }
    for (const Vec3& x : points) {
        const EigenTriple e = eig_sym3(b.value(x));
        if (!(e.min() > 0.0)) {
            std::ostringstream os;
            os << "B is not positive definite at (" << x[0] << ", " << x[1] << ", " << x[2]
               << "), smallest eigenvalue " << e.min();
            throw NotSPD(os.str());
        }
        const double m1 = mu.mu1.value(x), m2 = mu.mu2.value(x), m3 = mu.mu3.value(x);
        for (double l : e.as_array()) {
            const double g = m1 + m2 * l + m3 / l;
            if (g < rep.alpha) {
                rep.alpha = g;
                rep.minimizer = x;
                rep.minimizer_eigenvalue = l;
            }
            rep.min_eigenvalue = std::min(rep.min_eigenvalue, l);
            rep.max_eigenvalue = std::max(rep.max_eigenvalue, l);
            if (cls) rep.margin = std::min(*rep.margin, cls->lambda.margin(l));
        }
    }
    rep.positive = rep.alpha > 0.0;
    return rep;
}

EllipticityReport alpha_field(const MuFields& mu, const TensorField& b, const SampleSet& samples) {
    return alpha_field(mu, b, samples.points);
}

double max_identity_perturbation(const MuTriple& mu, double eps) {
    const double g1 = mu.sum();
    if (!(g1 > eps)) {
        throw NotAdmissible("g(1) = " + fmt(g1) + " does not exceed the margin " + fmt(eps));
    }
    // Minimum of g over the eigenvalue range [1 - 3d, 1 + 3d] intersected with (0, inf).
    auto min_g = [&](double d) {
        const double lo = 1.0 - 3.0 * d, hi = 1.0 + 3.0 * d;
        double m = g_eval(mu, hi);
        if (lo > 0.0) {
            m = std::min(m, g_eval(mu, lo));
        } else if (mu.mu3 < 0.0) {
            return -kInf;
        } else if (mu.mu3 == 0.0) {
            m = std::min(m, mu.mu1);
        }
        if (mu.mu2 * mu.mu3 > 0.0) {
            const double c = std::sqrt(mu.mu3 / mu.mu2);
            if (c > std::max(lo, 0.0) && c < hi) m = std::min(m, g_eval(mu, c));
        }
        return m;
    };
    auto ok = [&](double d) {
        const double m = min_g(d);
        return m >= eps && m > 0.0;
    };
    double good = 0.0, bad = 1.0;
    while (ok(bad)) {
        good = bad;
        bad *= 2.0;
        if (bad > 1e15) return kInf;
    }
    while (bad - good > 1e-12 * bad) {
        const double mid = 0.5 * (good + bad);
        if (ok(mid)) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    return good;
}

}  // namespace vestokes
