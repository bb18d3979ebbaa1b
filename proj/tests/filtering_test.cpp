#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "hmmlab/errors.hpp"
#include "hmmlab/filtering.hpp"
#include "hmmlab/fixtures.hpp"
#include "hmmlab/oracle.hpp"
#include "test_support.hpp"

using namespace hmmlab;
using hmmlab::testing::near;

namespace {

const Observation y0s = Observation::discrete(0);
const Observation y1s = Observation::discrete(1);

HmmModel m1_blind() {
    auto m = fixtures::m1();
    return make_model(m.kernel, ObservationChannel::finite({{1.0}, {1.0}}), "M1-blind");
}

} // namespace

TEST(FilterInit, NormalizedLikelihoodRow) {
    const auto u = filter_init(fixtures::m1(), {0.5, 0.5}, y0s);
    EXPECT_TRUE(near(u.state, {0.8, 0.2}, 1e-15));
    EXPECT_NEAR(u.log_normalizer, std::log(0.5), 1e-15);
}

TEST(FilterInit, UninformativeObservationKeepsPrior) {
    const Distribution prior{0.3, 0.7};
    EXPECT_TRUE(near(filter_init(m1_blind(), prior, y0s).state, prior, 0.0));
}

TEST(FilterInit, ImpossibleObservation) {
    try {
        filter_init(fixtures::m2(), Distribution::point_mass(4, 0), y1s);
        FAIL() << "expected DegenerateFilter";
    } catch (const DegenerateFilter &e) {
        EXPECT_EQ(e.time(), 0u);
    }
}

TEST(FilterStep, M1PosteriorMatchesOracle) {
    const auto m1 = fixtures::m1();
    const auto u = filter_step(m1, {0.8, 0.2}, y0s);
    EXPECT_TRUE(near(u.state, {0.592 / 0.644, 0.052 / 0.644}, 1e-15));
    EXPECT_NEAR(u.state[0], 0.919255, 1e-6);
    EXPECT_NEAR(u.log_normalizer, std::log(0.644), 1e-15);

    const auto table = oracle::joint_table(m1, {0.5, 0.5}, ObservationPath::symbols({0, 0}));
    EXPECT_TRUE(near(u.state, oracle::marginal(table, 1), 1e-15));
}

TEST(FilterStep, UninformativeObservationIsPrediction) {
    const auto m = m1_blind();
    const Distribution cur{0.8, 0.2};
    EXPECT_TRUE(near(filter_step(m, cur, y0s).state, propagate(cur, m.kernel), 0.0));
}

TEST(FilterStep, ForcedTransitionOnCycle) {
    EXPECT_EQ(filter_step(fixtures::m2(), Distribution::point_mass(4, 0), y1s).state, Distribution::point_mass(4, 1));
}

TEST(FilterRun, LengthOneReducesToInit) {
    const auto m1 = fixtures::m1();
    const auto traj = filter_run(m1, {0.5, 0.5}, ObservationPath::symbols({1}));
    ASSERT_EQ(traj.states.size(), 1u);
    EXPECT_EQ(traj.states[0], filter_init(m1, {0.5, 0.5}, y1s).state);
}

TEST(FilterRun, ParityNeverSeparatesSameParityStates) {
    const auto m2 = fixtures::m2();
    const auto path = simulate(m2, Distribution::point_mass(4, 0), 40, 3);
    const auto traj = filter_run(m2, {0.5, 0.0, 0.5, 0.0}, path.observations);
    for (std::size_t n = 0; n < 40; ++n) {
        const std::size_t a = n % 4, b = (n + 2) % 4;
        EXPECT_EQ(traj.states[n][a], 0.5);
        EXPECT_EQ(traj.states[n][b], 0.5);
    }
}

TEST(FilterRun, DegenerateFilterCarriesTime) {
    try {
        filter_run(fixtures::m2(), Distribution::point_mass(4, 0), ObservationPath::symbols({0, 1, 1}));
        FAIL() << "expected DegenerateFilter";
    } catch (const DegenerateFilter &e) {
        EXPECT_EQ(e.time(), 2u);
    }
}

TEST(FilterRun, LongHorizonDoesNotUnderflow) {
    const auto m1 = fixtures::m1();
    const auto path = simulate(m1, m1.stationary, 100001, 17);
    const auto traj = filter_run(m1, m1.stationary, path.observations);
    EXPECT_TRUE(std::isfinite(traj.log_likelihood()));
    EXPECT_LT(traj.log_likelihood(), -1000.0);
    EXPECT_TRUE(traj.states.back().validate().empty());
}

TEST(FilterRun, GaussianFarObservation) {
    const auto m = make_model(TransitionKernel{{0.9, 0.1}, {0.1, 0.9}}, ObservationChannel::gaussian({-1.0, 1.0}, 0.5),
                              "gauss");
    const auto traj = filter_run(m, m.stationary, ObservationPath::reals({0.0, 40.0, 45.0}));
    EXPECT_EQ(traj.states[0][0], 0.5);
    EXPECT_EQ(traj.states[2][1], 1.0);
    EXPECT_TRUE(std::isfinite(traj.log_likelihood()));
}

TEST(Predictor, StartsAtPrior) {
    const auto m1 = fixtures::m1();
    const Distribution prior{0.3, 0.7};
    const auto traj = filter_run(m1, prior, ObservationPath::symbols({0, 1, 1}));
    EXPECT_EQ(predictor(m1, traj, 0), prior);
    EXPECT_EQ(predictor(m1, traj, 3), propagate(traj.states[2], m1.kernel));
    EXPECT_THROW(predictor(m1, traj, 5), IndexOutOfRange);
}

TEST(Predictor, StationaryUnderBlindChannel) {
    const auto m = m1_blind();
    const auto traj = filter_run(m, m.stationary, ObservationPath::symbols({0, 0, 0, 0}));
    for (std::size_t n = 0; n <= 4; ++n) EXPECT_TRUE(near(predictor(m, traj, n), m.stationary, 1e-15));
}

TEST(Predictor, MatchesOracleOneStepPredictive) {
    const auto m1 = fixtures::m1();
    const auto path = simulate(m1, m1.stationary, 3, 8).observations;
    const auto traj = filter_run(m1, m1.stationary, path);
    const auto table = oracle::joint_table(m1, m1.stationary, path);
    for (std::size_t x = 0; x < 2; ++x) {
        const double expect = oracle::conditional_expectation(
            table, [](auto) { return true; }, [&](auto p) { return m1.kernel(p[2], x); });
        EXPECT_NEAR(predictor(m1, traj, 3)[x], expect, 1e-15);
    }
}

TEST(PathLogLikelihood, SpecExamples) {
    const auto m1 = fixtures::m1();
    EXPECT_NEAR(path_log_likelihood(m1, {0.5, 0.5}, ObservationPath::symbols({0})), std::log(0.5), 1e-15);
    EXPECT_NEAR(path_log_likelihood(m1, {0.5, 0.5}, ObservationPath::symbols({0, 0})), std::log(0.322), 1e-15);
    EXPECT_EQ(path_log_likelihood(m1_blind(), {0.5, 0.5}, ObservationPath::symbols({0, 0, 0})), 0.0);
}

TEST(PathLogLikelihood, EqualsSumOfNormalizers) {
    const auto m1 = fixtures::m1();
    const auto path = simulate(m1, m1.stationary, 300, 4).observations;
    const Distribution prior{0.9, 0.1};
    EXPECT_NEAR(path_log_likelihood(m1, prior, path), filter_run(m1, prior, path).log_likelihood(), 1e-10);
}

TEST(PathLogLikelihood, ZeroLikelihoodIsDegenerate) {
    EXPECT_THROW(path_log_likelihood(fixtures::m2(), Distribution::point_mass(4, 0), ObservationPath::symbols({1})),
                 DegenerateFilter);
}

TEST(ObsLogLikelihoodRatio, SpecExamples) {
    const auto ch = fixtures::m1().channel;
    const auto y = ObservationPath::symbols({0});
    EXPECT_EQ(obs_log_likelihood_ratio(ch, {0}, {0}, y), 0.0);
    EXPECT_NEAR(obs_log_likelihood_ratio(ch, {0}, {1}, y), std::log(0.2 / 0.8), 1e-15);
    EXPECT_THROW(obs_log_likelihood_ratio(fixtures::m2().channel, {1}, {0}, y), UndefinedRatio);
}

TEST(ObsLogLikelihoodRatio, CoupledTimesContributeNothing) {
    const auto ch = fixtures::m1().channel;
    const auto y = ObservationPath::symbols({0, 1, 1});
    EXPECT_NEAR(obs_log_likelihood_ratio(ch, {0, 1, 1}, {1, 1, 1}, y), std::log(0.2 / 0.8), 1e-15);
    EXPECT_THROW(obs_log_likelihood_ratio(ch, {0, 1}, {0}, y), DimensionMismatch);
}

TEST(RelativeEntropy, SpecExamples) {
    EXPECT_EQ(relative_entropy({0.3, 0.7}, {0.3, 0.7}), 0.0);
    EXPECT_NEAR(relative_entropy({1.0, 0.0}, {0.5, 0.5}), std::log(2.0), 1e-15);
    EXPECT_EQ(relative_entropy({1.0, 0.0}, {0.0, 1.0}), std::numeric_limits<double>::infinity());
}
