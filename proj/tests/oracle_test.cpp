#include <cmath>

#include <gtest/gtest.h>

#include "hmmlab/environment.hpp"
#include "hmmlab/errors.hpp"
#include "hmmlab/filtering.hpp"
#include "hmmlab/fixtures.hpp"
#include "hmmlab/oracle.hpp"
#include "test_support.hpp"

using namespace hmmlab;
using hmmlab::testing::near;

namespace {

HmmModel blind(const TransitionKernel &p) {
    return make_model(p, ObservationChannel::finite({std::vector<std::vector<double>>(p.dim(), {1.0})}), "blind");
}

} // namespace

TEST(JointTable, SingleTimeIsPriorTimesLikelihood) {
    const auto t = oracle::joint_table(fixtures::m1(), {0.3, 0.7}, ObservationPath::symbols({1}));
    ASSERT_EQ(t.path_count(), 2u);
    EXPECT_DOUBLE_EQ(t.weight(0), 0.3 * 0.2);
    EXPECT_DOUBLE_EQ(t.weight(1), 0.7 * 0.8);
    EXPECT_DOUBLE_EQ(t.total(), 0.62);
}

TEST(JointTable, DecodeLeastSignificantFirst) {
    const auto t = oracle::joint_table(fixtures::m1(), {0.5, 0.5}, ObservationPath::symbols({0, 0, 0}));
    std::vector<std::size_t> path;
    t.decode(0b110, path);
    EXPECT_EQ(path, (std::vector<std::size_t>{0, 1, 1}));
}

TEST(JointTable, CycleHasOneLivePathPerStart) {
    const auto m = blind(TransitionKernel::cycle(4));
    const auto t = oracle::joint_table(m, Distribution::uniform(4), ObservationPath::symbols({0, 0, 0, 0}));
    std::size_t live = 0;
    for (std::size_t c = 0; c < t.path_count(); ++c) live += t.weight(c) > 0.0;
    EXPECT_EQ(live, 4u);
    EXPECT_DOUBLE_EQ(t.total(), 1.0);
}

TEST(JointTable, DensityTotalMatchesFilterLikelihood) {
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto m = oracle::random_model(rng, {3, 2, 0.0});
        const auto y = simulate(m, m.stationary, 6, rng.next_u64()).observations;
        const auto t = oracle::joint_table(m, m.stationary, y);
        EXPECT_NEAR(std::log(t.density_total()), path_log_likelihood(m, m.stationary, y), 1e-12);
    }
}

TEST(JointTable, PhiWeightsScaleTotal) {
    const auto ch = ObservationChannel::finite({{1.2, 0.8}, {0.4, 1.6}}, {0.5, 0.5});
    const auto m = make_model(TransitionKernel{{0.5, 0.5}, {0.5, 0.5}}, ch, "phi");
    const auto t = oracle::joint_table(m, m.stationary, ObservationPath::symbols({0, 1}));
    EXPECT_NEAR(t.density_total(), t.total() / 0.25, 1e-15);
}

TEST(JointTable, Guards) {
    const auto m1 = fixtures::m1();
    EXPECT_THROW(oracle::joint_table(m1, m1.stationary, ObservationPath::symbols(std::vector<std::size_t>(30, 0))),
                 SizeGuardExceeded);
    const auto g = make_model(TransitionKernel{{0.9, 0.1}, {0.1, 0.9}}, ObservationChannel::gaussian({0.0, 1.0}, 1.0),
                              "g");
    EXPECT_THROW(oracle::joint_table(g, g.stationary, ObservationPath::reals({0.0})), ModelError);
}

TEST(ConditionalLaw, TrivialConditionOnLastTimeIsFilter) {
    const auto m1 = fixtures::m1();
    const auto y = ObservationPath::symbols({0, 1, 1, 0, 1});
    const auto t = oracle::joint_table(m1, {0.9, 0.1}, y);
    const auto law = oracle::conditional_law(
        t, [](auto) { return true; }, [](auto p) { return p[4]; });
    EXPECT_TRUE(near(law, filter_run(m1, {0.9, 0.1}, y).states[4], 1e-14));
}

TEST(ConditionalLaw, ZeroMassCondition) {
    const auto t = oracle::joint_table(fixtures::m2(), Distribution::uniform(4), ObservationPath::symbols({0, 1}));
    EXPECT_THROW(oracle::conditional_law(
                     t, [](auto p) { return p[0] == 1; }, [](auto p) { return p[1]; }),
                 ZeroMassCondition);
    EXPECT_THROW(oracle::conditional_expectation(
                     t, [](auto) { return false; }, [](auto) { return 1.0; }),
                 ZeroMassCondition);
}

TEST(CommonQueries, AgreeWithRecursions) {
    Rng rng(8);
    for (int i = 0; i < 10; ++i) {
        const auto m = oracle::random_model(rng, {3, 2, 0.0});
        const auto y = simulate(m, m.stationary, 6, rng.next_u64()).observations;
        const auto t = oracle::joint_table(m, m.stationary, y);
        const auto smooth = smoothed_marginals(m, m.stationary, y);
        const auto kernels = conditional_kernels(m, y);
        for (std::size_t n = 0; n <= 5; ++n) EXPECT_TRUE(near(oracle::marginal(t, n), smooth[n], 1e-12));
        for (std::size_t n = 1; n <= 5; ++n)
            for (std::size_t x = 0; x < 3; ++x)
                EXPECT_TRUE(near(oracle::transition(t, n, x), kernels.at(n).row_distribution(x), 1e-12));
        const auto prefix = oracle::joint_table(m, m.stationary, y.prefix(3));
        const auto ps = pinned_smoother(m, y, m.stationary, 3);
        for (std::size_t x = 0; x < 3; ++x) EXPECT_TRUE(near(oracle::pinned_initial(prefix, 3, x), ps.rows[x], 1e-12));
    }
}

TEST(TableSummary, MatchesPerQueryScans) {
    Rng rng(21);
    const auto m = oracle::random_model(rng, {3, 3, 0.3});
    const auto y = simulate(m, m.stationary, 5, 4).observations;
    const auto t = oracle::joint_table(m, m.stationary, y);
    const oracle::TableSummary s(t);
    for (std::size_t n = 0; n < 5; ++n) {
        EXPECT_TRUE(near(s.marginal_law(n), oracle::marginal(t, n), 1e-14));
        for (std::size_t x = 0; x < 3; ++x) {
            const auto pinned = s.pinned_law(n, x);
            if (pinned) {
                EXPECT_TRUE(near(*pinned, oracle::pinned_initial(t, n, x), 1e-14));
            } else {
                EXPECT_THROW(oracle::pinned_initial(t, n, x), ZeroMassCondition);
            }
            if (n == 0) continue;
            const auto row = s.transition_law(n, x);
            if (row) {
                EXPECT_TRUE(near(*row, oracle::transition(t, n, x), 1e-14));
            } else {
                EXPECT_THROW(oracle::transition(t, n, x), ZeroMassCondition);
            }
        }
    }
}

TEST(RandomModel, ValidAndPositiveByDefault) {
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        const auto m = oracle::random_model(rng, {4, 3, 0.0});
        EXPECT_TRUE(validate_model(m).empty());
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = 0; b < 4; ++b) EXPECT_GT(m.kernel(a, b), 0.0);
    }
}

TEST(RandomModel, ZeroInjectionKeepsRowsAlive) {
    Rng rng(2);
    bool saw_zero = false;
    for (int i = 0; i < 50; ++i) {
        const auto m = oracle::random_model(rng, {3, 2, 0.4});
        EXPECT_TRUE(validate_model(m).empty());
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) saw_zero |= m.kernel(a, b) == 0.0;
    }
    EXPECT_TRUE(saw_zero);
}

TEST(RandomModel, SameSeedSameModel) {
    Rng a(77), b(77);
    const auto ma = oracle::random_model(a, {3, 2, 0.2});
    const auto mb = oracle::random_model(b, {3, 2, 0.2});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(ma.kernel(i, j), mb.kernel(i, j));
}
