#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vestokes/constitutive.hpp"
#include "vestokes/field.hpp"

namespace vestokes {

/// Open interval (lo, hi); hi may be +inf.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return x > lo && x < hi; }
};

/// Union of at most two disjoint open intervals in (0, +inf], ordered.
class IntervalSet {
public:
    IntervalSet() = default;
    explicit IntervalSet(std::vector<Interval> parts);

    static IntervalSet positive_axis();

    const std::vector<Interval>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    bool is_positive_axis() const;
    bool contains(double x) const;
    /// Signed distance from x to the boundary, ignoring the endpoints 0 and
    /// +inf: positive inside, negative outside, +inf when no finite boundary.
    double margin(double x) const;
    bool approx_equal(const IntervalSet& other, double rtol = 1e-9) const;
    std::string str() const;

private:
    std::vector<Interval> parts_;
};

/// Parameter-space cases of the admissible-set characterization.
enum class Scenario { I = 1, II, III, IV, V, VI, VII, VIII, IX, X, XI, NotThermodynamic };

/// "(i)" ... "(xi)", or "not-thermodynamic".
std::string scenario_label(Scenario s);

/// Real roots of mu2 l^2 + mu1 l + mu3 in ascending order, or nullopt when
/// the discriminant is negative. DegenerateQuadratic when mu2 = 0.
std::optional<std::pair<double, double>> roots(const MuTriple& mu);

struct Classification {
    Scenario scenario = Scenario::NotThermodynamic;
    /// Lambda = {l > 0 : g(l) > 0} from sign analysis of p(l).
    IntervalSet lambda;
    /// Whether the case table reproduces `lambda` (positive roots as endpoints).
    bool case_consistent = true;
};

/// Scenario guard only, without computing Lambda.
Scenario scenario_of(const MuTriple& mu);

Classification classify(const MuTriple& mu);

struct EllipticityReport {
    double alpha = 0.0;
    bool positive = false;
    std::optional<Scenario> scenario;
    std::optional<IntervalSet> lambda;
    Vec3 minimizer{0.0, 0.0, 0.0};
    /// Eigenvalue of B at the minimizer where g attains alpha.
    double minimizer_eigenvalue = 0.0;
    /// Minimum signed distance of sampled eigenvalues to the boundary of
    /// Lambda; present only for constant parameters.
    std::optional<double> margin;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    std::size_t samples = 0;
};

/// alpha = min over samples and eigenvalues of g_x(lambda_i(B(x))).
/// NotSPD (with the offending point) when B(x) has a non-positive eigenvalue.
EllipticityReport alpha_field(const MuFields& mu, const TensorField& b, const std::vector<Vec3>& points);
EllipticityReport alpha_field(const MuFields& mu, const TensorField& b, const SampleSet& samples);

/// Largest delta such that |B - I|_max <= delta keeps every eigenvalue in
/// Lambda with g >= eps, using |lambda_i(B) - 1| <= 3 delta. +inf when
/// unbounded. NotAdmissible if g(1) <= eps.
double max_identity_perturbation(const MuTriple& mu, double eps);

}  // namespace vestokes
