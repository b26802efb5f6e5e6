#pragma once

// Seeded property checks shared by the `verify` command and the acceptance
// runner. Reports carry no timings so that reruns are byte-identical.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vestokes/ellipticity.hpp"
#include "vestokes/mms.hpp"
#include "vestokes/verification.hpp"

namespace vestokes {

struct PropertyResult {
    /// Acceptance criterion number, 0 for supporting checks.
    int criterion = 0;
    std::string id;
    std::string description;
    bool passed = false;
    std::string detail;
};

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// One parameter triple per scenario (i)..(xi).
std::vector<std::pair<Scenario, MuTriple>> scenario_representatives();

/// Points of the 1000-point logarithmic grid on [1e-6, 1e6] where membership
/// in `set` disagrees with g > 0. Points where g vanishes to rounding are
/// skipped.
int sign_mismatches(const MuTriple& mu, const IntervalSet& set);

PropertyResult check_ch_inverse(std::uint64_t seed);
PropertyResult check_inverse_derivatives(std::uint64_t seed);
PropertyResult check_lambda_classification(std::uint64_t seed);
PropertyResult check_explicit_bounds(std::uint64_t seed);
PropertyResult check_lop_coercivity(std::uint64_t seed);
PropertyResult check_korn(std::uint64_t seed);
PropertyResult check_coercivity_sandwich(std::uint64_t seed, int threads);

struct SolveRecord {
    std::string label;
    int n = 0;
    double alpha = 0.0;
    double residual = 0.0;
    std::vector<BoundAudit> audits;
};

/// Every solve of the suite: both MMS sequences on 2^3, 4^3, 8^3, a zero
/// forcing solve and seeded random data on 2^3 and 4^3.
struct SolveStudy {
    std::vector<SolveRecord> records;
    std::vector<ConvergenceTable> tables;
    /// Consecutive levels of the same label, ids prefixed by label and sizes.
    std::vector<GuardResult> guards;
};

SolveStudy run_solve_study(std::uint64_t seed, int threads, double tol = 1e-10);

/// Rate thresholds for P2/P1 on smooth solutions.
struct RateThresholds {
    double v_h1 = 1.9;
    double v_l2 = 2.8;
    double p_l2 = 1.9;
};

PropertyResult check_apriori_bound(const SolveStudy& study);
PropertyResult check_mms_rates(const SolveStudy& study, const RateThresholds& t = {});
PropertyResult check_ratio_guard(const SolveStudy& study);

struct SuiteOptions {
    std::uint64_t seed = kDefaultSeed;
    int threads = 1;
    /// Relative residual required of every solve.
    double tol = 1e-10;
};

/// All checks in criterion order, supporting checks first.
std::vector<PropertyResult> run_property_suite(const SuiteOptions& opts = {});

}  // namespace vestokes
