#include <cmath>

#include <gtest/gtest.h>

#include "hmmlab/errors.hpp"
#include "hmmlab/fixtures.hpp"
#include "hmmlab/model.hpp"
#include "test_support.hpp"

using namespace hmmlab;
using hmmlab::testing::near;

namespace {

HmmModel raw(TransitionKernel p, Distribution pi, ObservationChannel ch) {
    return HmmModel{std::move(p), std::move(pi), std::move(ch), "raw"};
}

} // namespace

TEST(ValidateModel, FixturesAreValid) {
    for (const auto &label : fixtures::labels())
        EXPECT_TRUE(validate_model(fixtures::by_label(label)).empty()) << label;
}

TEST(ValidateModel, ReportsNonStochasticRow) {
    const auto m = raw(TransitionKernel{{0.5, 0.6}, {0.5, 0.5}}, {0.5, 0.5},
                       ObservationChannel::finite({{1.0}, {1.0}}));
    EXPECT_FALSE(validate_model(m).empty());
}

TEST(ValidateModel, ReportsNonInvariantStationary) {
    const auto m = raw(TransitionKernel{{0.9, 0.1}, {0.1, 0.9}}, {0.3, 0.7},
                       ObservationChannel::finite({{1.0}, {1.0}}));
    const auto report = validate_model(m);
    ASSERT_EQ(report.size(), 1u);
    EXPECT_NE(report[0].find("invariant"), std::string::npos);
}

TEST(ValidateModel, ReportsChannelNotIntegratingToOne) {
    const auto m = raw(TransitionKernel{{1.0}}, {1.0}, ObservationChannel::finite({{0.5, 0.4}}));
    EXPECT_FALSE(validate_model(m).empty());
}

TEST(ValidateModel, PhiWeightsEnterNormalization) {
    // g integrates to one against phi = (0.5, 0.5), not against counting measure.
    const auto ch = ObservationChannel::finite({{1.2, 0.8}, {0.4, 1.6}}, {0.5, 0.5});
    EXPECT_TRUE(ch.validate().empty());
    EXPECT_TRUE(validate_model(raw(TransitionKernel{{0.5, 0.5}, {0.5, 0.5}}, {0.5, 0.5}, ch)).empty());
}

TEST(MakeModel, ThrowsModelErrorOnInvalidInput) {
    EXPECT_THROW(make_model(TransitionKernel{{0.9, 0.1}, {0.1, 0.9}}, ObservationChannel::finite({{1.0}, {1.0}}), "x",
                            Distribution{0.3, 0.7}),
                 ModelError);
    EXPECT_THROW(make_model(TransitionKernel{{0.5, 0.6}, {0.5, 0.5}}, ObservationChannel::finite({{1.0}, {1.0}}), "x"),
                 ModelError);
}

TEST(StationaryDistribution, SymmetricTwoState) {
    EXPECT_TRUE(near(stationary_distribution(TransitionKernel{{0.9, 0.1}, {0.1, 0.9}}), {0.5, 0.5}, 1e-12));
}

TEST(StationaryDistribution, PeriodicCycleSettlesOnUniform) {
    EXPECT_TRUE(near(stationary_distribution(TransitionKernel::cycle(4)), Distribution::uniform(4), 1e-12));
}

TEST(StationaryDistribution, IdentityIsNotUnique) {
    EXPECT_THROW(stationary_distribution(TransitionKernel::identity(3)), NonUniqueStationary);
}

TEST(StationaryDistribution, AsymmetricKernel) {
    // pi = (b, a) / (a + b) for P = ((1-a, a), (b, 1-b)).
    const double a = 0.3, b = 0.1;
    const auto pi = stationary_distribution(TransitionKernel{{1 - a, a}, {b, 1 - b}});
    EXPECT_TRUE(near(pi, {b / (a + b), a / (a + b)}, 1e-12));
}

TEST(StationaryDistribution, TransientStatesGetExactlyZero) {
    const auto pi = stationary_distribution(fixtures::m4_transient().kernel);
    EXPECT_EQ(pi[2], 0.0);
    EXPECT_TRUE(near(pi, {0.5, 0.5, 0.0}, 1e-12));
}

TEST(NStepMarginal, SpecExamples) {
    const auto p = fixtures::m1().kernel;
    const Distribution d0 = Distribution::point_mass(2, 0);
    EXPECT_EQ(n_step_marginal(p, d0, 0), d0);
    EXPECT_TRUE(near(n_step_marginal(p, d0, 1), {0.9, 0.1}, 0.0));
    EXPECT_TRUE(near(n_step_marginal(p, d0, 2), {0.82, 0.18}, 1e-15));
}

TEST(CheckErgodicity, M1DecaysAsPowerOfSecondEigenvalue) {
    const auto report = check_ergodicity(fixtures::m1(), 60, 1e-5);
    EXPECT_TRUE(report.ergodic);
    ASSERT_EQ(report.decay.size(), 61u);
    for (std::size_t n = 0; n <= 60; ++n) EXPECT_NEAR(report.decay[n], std::pow(0.8, double(n)), 1e-14) << n;
}

TEST(CheckErgodicity, PeriodicAndIdentityFail) {
    EXPECT_FALSE(check_ergodicity(fixtures::m2(), 500, 1e-6).ergodic);
    EXPECT_FALSE(check_ergodicity(fixtures::m3(), 500, 1e-6).ergodic);
}

TEST(CheckErgodicity, IgnoresStatesOutsideSupport) {
    const auto report = check_ergodicity(fixtures::m4_transient(), 200, 1e-9);
    EXPECT_TRUE(report.ergodic);
    EXPECT_EQ(report.decay[0], 1.0);
}

TEST(CheckNondegeneracy, FiniteChannels) {
    EXPECT_TRUE(check_nondegeneracy(fixtures::m1().channel));
    EXPECT_FALSE(check_nondegeneracy(fixtures::m2().channel));
    EXPECT_TRUE(check_nondegeneracy(ObservationChannel::finite({{1.0}, {1.0}})));
}

TEST(CheckNondegeneracy, ContinuousChannelsUseDeclaredFlag) {
    EXPECT_TRUE(check_nondegeneracy(ObservationChannel::gaussian({0.0, 1.0}, 1.0)));
    const auto flagged = ObservationChannel::continuous(
        2, [](std::size_t, double) { return 0.0; }, std::nullopt, false);
    EXPECT_FALSE(check_nondegeneracy(flagged));
}

TEST(TimeReverse, SymmetricKernelIsSelfReversed) {
    const auto m1 = fixtures::m1();
    const auto rev = time_reverse(m1);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(rev(i, j), m1.kernel(i, j), 1e-15);
}

TEST(TimeReverse, CycleReversesDirection) {
    const auto rev = time_reverse(fixtures::m2());
    for (std::size_t x = 0; x < 4; ++x) EXPECT_NEAR(rev(x, (x + 3) % 4), 1.0, 1e-15);
}

TEST(TimeReverse, PreservesStationarity) {
    const auto p = TransitionKernel{{0.5, 0.3, 0.2}, {0.1, 0.6, 0.3}, {0.4, 0.4, 0.2}};
    const auto pi = stationary_distribution(p);
    EXPECT_LE(tv_distance(propagate(pi, time_reverse(p, pi)), pi), 1e-12);
}

TEST(TimeReverse, ZeroStationaryMass) {
    const auto m4 = fixtures::m4_transient();
    EXPECT_THROW(time_reverse(m4), ZeroStationaryMass);
    const auto rev = time_reverse(m4, true);
    EXPECT_EQ(rev(2, 2), 1.0);
    EXPECT_EQ(rev(0, 2), 0.0);
    EXPECT_LE(tv_distance(propagate(m4.stationary, rev), m4.stationary), 1e-12);
}

TEST(Simulate, SameSeedSamePath) {
    const auto m1 = fixtures::m1();
    const auto a = simulate(m1, m1.stationary, 500, 99);
    const auto b = simulate(m1, m1.stationary, 500, 99);
    EXPECT_EQ(a.states, b.states);
    EXPECT_EQ(a.observations, b.observations);
    EXPECT_NE(simulate(m1, m1.stationary, 500, 100).states, a.states);
}

TEST(Simulate, DeterministicCycle) {
    const auto path = simulate(fixtures::m2(), Distribution::point_mass(4, 0), 8, 1);
    EXPECT_EQ(path.states, (std::vector<std::size_t>{0, 1, 2, 3, 0, 1, 2, 3}));
    for (std::size_t k = 0; k < 8; ++k) EXPECT_EQ(path.observations[k].symbol(), k % 2);
}

TEST(Simulate, EmpiricalFrequenciesMatchStationaryLaw) {
    const auto m1 = fixtures::m1();
    const auto path = simulate(m1, m1.stationary, 100000, 2024);
    double zeros = 0;
    for (auto s : path.states) zeros += s == 0;
    EXPECT_NEAR(zeros / 100000.0, 0.5, 0.01);
}

TEST(Simulate, ContinuousChannels) {
    const auto p = TransitionKernel{{0.9, 0.1}, {0.1, 0.9}};
    const auto gauss = make_model(p, ObservationChannel::gaussian({-1.0, 1.0}, 0.5), "g");
    const auto path = simulate(gauss, gauss.stationary, 20, 5);
    EXPECT_FALSE(path.observations[0].is_discrete());
    const auto blind = make_model(p,
                                  ObservationChannel::continuous(
                                      2, [](std::size_t, double) { return 0.0; }, std::nullopt, true),
                                  "no-sampler");
    EXPECT_THROW(simulate(blind, blind.stationary, 5, 1), MissingSampler);
}

TEST(Relabel, PermutesKernelChannelAndLaws) {
    const auto m4 = fixtures::m4_transient();
    const std::vector<std::size_t> perm{2, 0, 1};
    const auto r = relabel(m4, perm);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(r.stationary[i], m4.stationary[perm[i]]);
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(r.kernel(i, j), m4.kernel(perm[i], perm[j]));
        EXPECT_EQ(r.channel.g(i, 0), m4.channel.g(perm[i], 0));
    }
    EXPECT_EQ(relabel(Distribution{0.1, 0.2, 0.7}, perm), (Distribution{0.7, 0.1, 0.2}));
}

TEST(Fixtures, LabelsAndUnknown) {
    EXPECT_EQ(fixtures::labels(), (std::vector<std::string>{"M1", "M2", "M3", "M4"}));
    EXPECT_THROW(fixtures::by_label("M9"), ConfigError);
    EXPECT_EQ(fixtures::m3().stationary, Distribution::uniform(3));
}
