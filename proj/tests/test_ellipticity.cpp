#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "vestokes/ellipticity.hpp"
#include "vestokes/errors.hpp"
#include "vestokes/sampling.hpp"

using namespace vestokes;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Representative {
    Scenario scenario;
    MuTriple mu;
};

const Representative kCases[] = {
    {Scenario::I, {-1, 1, 1}},        {Scenario::II, {-2.5, 4, 0.25}}, {Scenario::III, {1, 0, 1}},
    {Scenario::IV, {-0.5, 0, 1}},     {Scenario::V, {1, -1, 1}},       {Scenario::VI, {1, 0, 0}},
    {Scenario::VII, {-1, 2, 0}},      {Scenario::VIII, {2, -1, 0}},    {Scenario::IX, {1, 1, -0.5}},
    {Scenario::X, {3, -1, -1}},       {Scenario::XI, {2, 0, -1}},
};

// Membership of every logarithmic sample in the set agrees with g > 0.
int sign_mismatches(const MuTriple& mu, const IntervalSet& set) {
    int bad = 0;
    for (int k = 0; k < 1000; ++k) {
        const double l = std::pow(10.0, -6.0 + 12.0 * k / 999.0);
        const double g = mu.mu1 + mu.mu2 * l + mu.mu3 / l;
        // Skip points numerically on the boundary.
        if (std::abs(g) <= 1e-12 * (std::abs(mu.mu1) + std::abs(mu.mu2 * l) + std::abs(mu.mu3 / l))) continue;
        if ((g > 0.0) != set.contains(l)) ++bad;
    }
    return bad;
}

double brute_alpha(const MuTriple& mu, const SymTensor3& b) {
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = b(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m, Eigen::EigenvaluesOnly);
    double a = kInf;
    for (int k = 0; k < 3; ++k) a = std::min(a, g_eval(mu, es.eigenvalues()(k)));
    return a;
}

}  // namespace

TEST(Roots, Examples) {
    auto r = roots({-3, 1, 1});
    ASSERT_TRUE(r);
    EXPECT_NEAR(r->first, (3 - std::sqrt(5.0)) / 2, 1e-15);
    EXPECT_NEAR(r->second, (3 + std::sqrt(5.0)) / 2, 1e-15);
    r = roots({-2.5, 4, 0.25});
    ASSERT_TRUE(r);
    EXPECT_NEAR(r->first, 0.125, 1e-15);
    EXPECT_NEAR(r->second, 0.5, 1e-15);
    EXPECT_FALSE(roots({0, 1, 1}));
    EXPECT_THROW(roots({1, 0, 1}), DegenerateQuadratic);
}

TEST(Roots, AscendingAndAccurate) {
    Rng rng(41);
    for (int n = 0; n < 1000; ++n) {
        const MuTriple mu{uniform(rng, -5, 5), uniform(rng, -5, 5), uniform(rng, -5, 5) * 1e-6};
        const auto r = roots(mu);
        if (!r) continue;
        EXPECT_LE(r->first, r->second);
        for (double l : {r->first, r->second}) {
            const double scale = std::abs(mu.mu2 * l * l) + std::abs(mu.mu1 * l) + std::abs(mu.mu3);
            EXPECT_LE(std::abs((mu.mu2 * l + mu.mu1) * l + mu.mu3), 1e-14 * scale);
        }
    }
}

TEST(Classify, DocumentedExamples) {
    Classification c = classify({-1, 1, 1});
    EXPECT_EQ(c.scenario, Scenario::I);
    EXPECT_TRUE(c.lambda.is_positive_axis());

    c = classify({-2.5, 4, 0.25});
    EXPECT_EQ(c.scenario, Scenario::II);
    EXPECT_TRUE(c.lambda.approx_equal(IntervalSet({{0, 0.125}, {0.5, kInf}})));

    c = classify({1, -1, 1});
    EXPECT_EQ(c.scenario, Scenario::V);
    EXPECT_TRUE(c.lambda.approx_equal(IntervalSet({{0, (1 + std::sqrt(5.0)) / 2}})));

    c = classify({1, 0, 0});
    EXPECT_EQ(c.scenario, Scenario::VI);
    EXPECT_TRUE(c.lambda.is_positive_axis());
}

TEST(Classify, RepresentativesAgreeWithSignSampling) {
    for (const auto& rc : kCases) {
        const Classification c = classify(rc.mu);
        EXPECT_EQ(c.scenario, rc.scenario) << scenario_label(rc.scenario);
        EXPECT_TRUE(c.case_consistent) << scenario_label(rc.scenario) << " " << c.lambda.str();
        EXPECT_EQ(sign_mismatches(rc.mu, c.lambda), 0) << scenario_label(rc.scenario);
    }
}

TEST(Classify, SpecificEndpoints) {
    EXPECT_TRUE(classify({-0.5, 0, 1}).lambda.approx_equal(IntervalSet({{0, 2}})));
    EXPECT_TRUE(classify({-1, 2, 0}).lambda.approx_equal(IntervalSet({{0.5, kInf}})));
    EXPECT_TRUE(classify({2, -1, 0}).lambda.approx_equal(IntervalSet({{0, 2}})));
    EXPECT_TRUE(classify({2, 0, -1}).lambda.approx_equal(IntervalSet({{0.5, kInf}})));
    EXPECT_TRUE(classify({3, -1, -1}).lambda.approx_equal(
        IntervalSet({{(3 - std::sqrt(5.0)) / 2, (3 + std::sqrt(5.0)) / 2}})));
    // Double root: the root itself is excluded.
    const Classification d = classify({-4, 1, 4});
    EXPECT_EQ(d.scenario, Scenario::II);
    EXPECT_TRUE(d.lambda.approx_equal(IntervalSet({{0, 2}, {2, kInf}})));
    EXPECT_FALSE(d.lambda.contains(2.0));
}

TEST(Classify, RandomAdmissibleTriples) {
    Rng rng(42);
    for (int n = 0; n < 500; ++n) {
        const MuTriple mu = random_admissible_mu(rng);
        const Classification c = classify(mu);
        EXPECT_NE(c.scenario, Scenario::NotThermodynamic);
        EXPECT_TRUE(c.case_consistent) << mu.mu1 << "," << mu.mu2 << "," << mu.mu3;
        EXPECT_EQ(sign_mismatches(mu, c.lambda), 0);
        EXPECT_TRUE(c.lambda.contains(1.0));
    }
}

TEST(Classify, GuardsPartitionParameterSpace) {
    const double vals[] = {-3, -2, -1, -0.5, 0, 0.25, 0.5, 1, 2, 4};
    for (double a : vals)
        for (double b : vals)
            for (double c : vals) {
                const MuTriple mu{a, b, c};
                const Classification k = classify(mu);
                if (mu.thermodynamic()) {
                    EXPECT_NE(k.scenario, Scenario::NotThermodynamic);
                    EXPECT_TRUE(k.case_consistent) << a << "," << b << "," << c;
                } else {
                    EXPECT_EQ(k.scenario, Scenario::NotThermodynamic);
                }
                EXPECT_EQ(sign_mismatches(mu, k.lambda), 0);
            }
}

TEST(Classify, ScalingInvariance) {
    Rng rng(43);
    for (int n = 0; n < 200; ++n) {
        const MuTriple mu = random_admissible_mu(rng);
        const double s = std::exp(uniform(rng, -3, 3));
        const Classification a = classify(mu), b = classify({s * mu.mu1, s * mu.mu2, s * mu.mu3});
        EXPECT_EQ(a.scenario, b.scenario);
        EXPECT_TRUE(a.lambda.approx_equal(b.lambda, 1e-10));
    }
}

TEST(Classify, NotThermodynamic) {
    const Classification c = classify({-1, -1, 1});
    EXPECT_EQ(c.scenario, Scenario::NotThermodynamic);
    EXPECT_EQ(scenario_label(c.scenario), "not-thermodynamic");
    EXPECT_EQ(scenario_label(Scenario::XI), "(xi)");
}

TEST(IntervalSetTest, MarginAndInvariants) {
    const IntervalSet s({{0, 0.125}, {0.5, kInf}});
    EXPECT_NEAR(s.margin(1.0), 0.5, 1e-15);
    EXPECT_NEAR(s.margin(0.1), 0.025, 1e-15);
    EXPECT_NEAR(s.margin(0.3), -0.175, 1e-15);
    EXPECT_EQ(IntervalSet::positive_axis().margin(3.0), kInf);
    EXPECT_THROW(IntervalSet({{0, 2}, {1, 3}}), DomainError);
    EXPECT_THROW(IntervalSet({{-1, 2}}), DomainError);
    EXPECT_EQ(s.str(), "(0, 0.125) U (0.5, inf)");
}

TEST(AlphaField, Examples) {
    const SampleSet s = SampleSet::cell_centers({2, 2, 2}, {1, 1, 1});
    EllipticityReport r = alpha_field(MuFields::constant(1, 1, 1), TensorField(), s);
    EXPECT_DOUBLE_EQ(r.alpha, 3.0);
    EXPECT_TRUE(r.positive);
    EXPECT_EQ(r.scenario, Scenario::I);

    const TensorField d = TensorField::constant(SymTensor3::diag(2, 0.5, 1));
    r = alpha_field(MuFields::constant(1, 1, 1), d, s);
    EXPECT_NEAR(r.alpha, 3.0, 1e-14);
    EXPECT_NEAR(r.minimizer_eigenvalue, 1.0, 1e-14);

    r = alpha_field(MuFields::constant(-2.5, 4, 0.25), d, s);
    EXPECT_NEAR(r.alpha, 0.0, 1e-14);
    EXPECT_FALSE(r.positive);
    EXPECT_NEAR(r.minimizer_eigenvalue, 0.5, 1e-14);
    ASSERT_TRUE(r.margin);
    EXPECT_NEAR(*r.margin, 0.0, 1e-14);
}

TEST(AlphaField, MatchesBruteForce) {
    Rng rng(44);
    const SampleSet s = SampleSet::cell_centers({1, 1, 1}, {1, 1, 1});
    for (int n = 0; n < 300; ++n) {
        const SymTensor3 b = random_spd(rng, 100);
        const MuTriple mu = random_admissible_mu(rng);
        const EllipticityReport r = alpha_field(mu.fields(), TensorField::constant(b), s);
        const double ref = brute_alpha(mu, b);
        EXPECT_NEAR(r.alpha, ref, 1e-10 * (1.0 + std::abs(ref)));
        EXPECT_EQ(r.positive, r.alpha > 0.0);
    }
}

TEST(AlphaField, VaryingFieldsTrackMinimizer) {
    const MuFields mu{ScalarField::expression("1 + x"), ScalarField::constant(0), ScalarField::constant(0)};
    const SampleSet s = SampleSet::cell_centers({4, 4, 4}, {1, 1, 1});
    const EllipticityReport r = alpha_field(mu, TensorField(), s);
    EXPECT_NEAR(r.alpha, 1.125, 1e-15);
    EXPECT_NEAR(r.minimizer[0], 0.125, 1e-15);
    EXPECT_FALSE(r.scenario);
    EXPECT_FALSE(r.margin);
}

TEST(AlphaField, NotSpdThrows) {
    const SampleSet s = SampleSet::cell_centers({2, 2, 2}, {1, 1, 1});
    EXPECT_THROW(alpha_field(MuFields::constant(1, 1, 1), TensorField::constant(SymTensor3::diag(1, -1, 1)), s),
                 NotSPD);
}

TEST(Perturbation, Examples) {
    EXPECT_EQ(max_identity_perturbation({1, 1, 1}, 0.0), kInf);
    EXPECT_NEAR(max_identity_perturbation({-2.5, 4, 0.25}, 0.0), 0.5 / 3.0, 1e-6 * 0.5 / 3.0);
    EXPECT_THROW(max_identity_perturbation({1, 1, 1}, 3.0), NotAdmissible);
    EXPECT_THROW(max_identity_perturbation({-1, -1, 1}, 0.0), NotAdmissible);
}

TEST(Perturbation, AgreesWithDenseScan) {
    Rng rng(45);
    for (int n = 0; n < 100; ++n) {
        const MuTriple mu = random_admissible_mu(rng);
        const double eps = 0.1 * mu.sum();
        const double d = max_identity_perturbation(mu, eps);
        if (std::isinf(d)) continue;
        // Every eigenvalue reachable at radius d has g >= eps; slightly beyond, some does not.
        auto min_g = [&](double delta) {
            double m = kInf;
            const double lo = std::max(1.0 - 3.0 * delta, 1e-9), hi = 1.0 + 3.0 * delta;
            for (int k = 0; k <= 20000; ++k) m = std::min(m, g_eval(mu, lo + (hi - lo) * k / 20000.0));
            return m;
        };
        EXPECT_GE(min_g(d), eps - 1e-9 * std::abs(eps));
        EXPECT_LT(min_g(d * (1 + 1e-4) + 1e-12), eps + 1e-9) << mu.mu1 << "," << mu.mu2 << "," << mu.mu3;
    }
}
