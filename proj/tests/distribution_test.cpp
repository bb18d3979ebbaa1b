#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "hmmlab/csv.hpp"
#include "hmmlab/distribution.hpp"
#include "hmmlab/errors.hpp"
#include "hmmlab/numeric.hpp"
#include "hmmlab/rng.hpp"
#include "test_support.hpp"

using namespace hmmlab;
using hmmlab::testing::near;

TEST(Distribution, CheckedRejectsBadWeights) {
    EXPECT_NO_THROW(Distribution::checked({0.25, 0.75}));
    EXPECT_THROW(Distribution::checked({0.5, 0.6}), ModelError);
    EXPECT_THROW(Distribution::checked({1.5, -0.5}), ModelError);
}

TEST(Distribution, ValidateListsEveryProblem) {
    EXPECT_TRUE(Distribution({0.5, 0.5}).validate().empty());
    EXPECT_FALSE(Distribution({0.5, 0.6}).validate().empty());
    EXPECT_FALSE(Distribution({-0.1, 1.1}).validate().empty());
}

TEST(Distribution, PointMassAndUniform) {
    EXPECT_EQ(Distribution::point_mass(3, 1), (Distribution{0.0, 1.0, 0.0}));
    EXPECT_EQ(Distribution::uniform(4), (Distribution{0.25, 0.25, 0.25, 0.25}));
    EXPECT_THROW(Distribution::point_mass(3, 3), IndexOutOfRange);
}

TEST(TvDistance, SpecExamples) {
    EXPECT_EQ(tv_distance({0.5, 0.5}, {0.5, 0.5}), 0.0);
    EXPECT_EQ(tv_distance({1.0, 0.0}, {0.0, 1.0}), 2.0);
    EXPECT_EQ(tv_distance({0.5, 0.5}, {1.0, 0.0}), 1.0);
}

TEST(TvDistance, SymmetricAndDimensionChecked) {
    const Distribution a{0.2, 0.3, 0.5}, b{0.6, 0.1, 0.3};
    EXPECT_EQ(tv_distance(a, b), tv_distance(b, a));
    EXPECT_THROW(tv_distance(a, Distribution{0.5, 0.5}), DimensionMismatch);
}

TEST(Support, MarksPositiveEntries) {
    EXPECT_EQ(support({0.5, 0.0, 0.5}), (std::vector<bool>{true, false, true}));
}

TEST(TransitionKernel, ValidateAndRows) {
    const TransitionKernel good{{0.9, 0.1}, {0.1, 0.9}};
    EXPECT_TRUE(good.validate().empty());
    EXPECT_EQ(good.row_distribution(0), (Distribution{0.9, 0.1}));
    const TransitionKernel bad{{0.5, 0.6}, {0.5, 0.5}};
    EXPECT_FALSE(bad.validate().empty());
    EXPECT_THROW(TransitionKernel({{1.0, 0.0}, {1.0}}), DimensionMismatch);
}

TEST(TransitionKernel, CycleAndIdentity) {
    const auto c = TransitionKernel::cycle(4);
    for (std::size_t x = 0; x < 4; ++x) EXPECT_EQ(c(x, (x + 1) % 4), 1.0);
    const auto id = TransitionKernel::identity(3);
    EXPECT_EQ(propagate({0.2, 0.3, 0.5}, id), (Distribution{0.2, 0.3, 0.5}));
}

TEST(Propagate, MatchesHandProduct) {
    const TransitionKernel p{{0.9, 0.1}, {0.1, 0.9}};
    EXPECT_TRUE(near(propagate({1.0, 0.0}, p), {0.9, 0.1}, 0.0));
    EXPECT_TRUE(near(propagate({0.9, 0.1}, p), {0.82, 0.18}, 1e-15));
}

TEST(Compose, EqualsSequentialPropagation) {
    const TransitionKernel a{{0.7, 0.3}, {0.2, 0.8}}, b{{0.5, 0.5}, {0.1, 0.9}};
    const Distribution mu{0.4, 0.6};
    EXPECT_TRUE(near(propagate(mu, compose(a, b)), propagate(propagate(mu, a), b), 1e-15));
}

TEST(OrderedSum, IndependentOfTermOrder) {
    std::vector<double> t{1e16, 1.0, -1e16, 3.0, 1e-3};
    const double s = numeric::ordered_sum(t);
    std::reverse(t.begin(), t.end());
    EXPECT_EQ(numeric::ordered_sum(t), s);
    std::swap(t[0], t[2]);
    EXPECT_EQ(numeric::ordered_sum(t), s);
}

TEST(KahanSum, RecoversSmallTerms) {
    numeric::KahanSum k;
    k.add(1.0);
    for (int i = 0; i < 1000; ++i) k.add(1e-16);
    EXPECT_NEAR(k.value(), 1.0 + 1e-13, 1e-16);
}

TEST(Rng, SameSeedSameStream) {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
    EXPECT_NE(Rng(42).next_u64(), c.next_u64());
}

TEST(Rng, UniformInUnitInterval) {
    Rng r(7);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Rng, CategoricalSkipsZeroWeights) {
    Rng r(9);
    const std::vector<double> w{0.0, 0.5, 0.0, 0.5};
    std::set<std::size_t> seen;
    for (int i = 0; i < 1000; ++i) seen.insert(r.categorical(w));
    EXPECT_EQ(seen, (std::set<std::size_t>{1, 3}));
}

TEST(Rng, CategoricalFrequencies) {
    Rng r(11);
    const std::vector<double> w{0.2, 0.8};
    int ones = 0;
    constexpr int n = 100000;
    for (int i = 0; i < n; ++i) ones += r.categorical(w) == 1;
    EXPECT_NEAR(ones / double(n), 0.8, 0.01);
}

TEST(ChildSeed, DistinctPerIndexAndStable) {
    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(child_seed(123, i));
    EXPECT_EQ(seeds.size(), 1000u);
    static_assert(child_seed(1, 2) == child_seed(1, 2));
}

TEST(CsvFormat, ShortestRoundTrip) {
    EXPECT_EQ(csv::format_double(2.0), "2.0");
    EXPECT_EQ(csv::format_double(0.1), "0.1");
    EXPECT_EQ(csv::format_double(1e-300), "1e-300");
    EXPECT_EQ(csv::format_double(-0.25), "-0.25");
    EXPECT_EQ(csv::format_double(INFINITY), "inf");
    EXPECT_EQ(csv::format_double(-INFINITY), "-inf");
    EXPECT_EQ(csv::format_double(NAN), "nan");
    for (double v : {0.1 + 0.2, 1.0 / 3.0, 2.0 / 0.644, 6.02214076e23}) EXPECT_EQ(std::stod(csv::format_double(v)), v);
}
