#include <gtest/gtest.h>

#include <cmath>

#include "modde/core.hpp"

using namespace modde;

TEST(SearchSpace, RejectsInvertedBounds)
{
    EXPECT_THROW(SearchSpace({1.0}, {0.0}), ConfigError);
    EXPECT_THROW(SearchSpace({}, {}), ConfigError);
    EXPECT_THROW(SearchSpace({0.0, 0.0}, {1.0}), ConfigError);
}

TEST(SearchSpace, ClosedBounds)
{
    const auto space = SearchSpace::cube(2, -5, 5);
    EXPECT_TRUE(space.contains(Vector{5.0, -5.0}));
    EXPECT_FALSE(space.contains(Vector{5.0000001, 0.0}));
    EXPECT_FALSE(space.contains(Vector{0.0, std::nan("")}));
}

TEST(Initialize, PointsInsideBox)
{
    const auto space = SearchSpace::cube(2, -5, 5);
    Rng rng(1);
    const auto pop = initialize_population(space, 4, rng);
    ASSERT_EQ(pop.size(), 4u);
    for (const auto& ind : pop.members) {
        EXPECT_TRUE(space.contains(ind.x));
        EXPECT_FALSE(ind.evaluated());
    }
}

TEST(Initialize, ZeroWidthBox)
{
    const SearchSpace space({2.0, 2.0}, {2.0, 2.0});
    Rng rng(3);
    EXPECT_THROW(initialize_population(space, 3, rng), ConfigError);
    const auto pop = initialize_population(space, 4, rng);
    for (const auto& ind : pop.members) {
        EXPECT_EQ(ind.x, (Vector{2.0, 2.0}));
    }
}

TEST(Initialize, SameSeedSamePopulation)
{
    const auto space = SearchSpace::cube(5, -5, 5);
    Rng a(42);
    Rng b(42);
    const auto pa = initialize_population(space, 10, a);
    const auto pb = initialize_population(space, 10, b);
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_EQ(pa[i].x, pb[i].x);
    }
}

TEST(Select, StrictImprovementOnly)
{
    const Individual parent{{0.0}, 1.0};
    EXPECT_EQ(select(parent, Individual{{1.0}, 0.5}).fitness, 0.5);
    EXPECT_EQ(&select(parent, Individual{{1.0}, 1.0}), &parent);
    EXPECT_EQ(select(Individual{{0.0}, 3.7}, Individual{{9.0}, kPenalty}).fitness, 3.7);
    EXPECT_THROW(select(parent, Individual{{1.0}, kUnevaluated}), std::logic_error);
}

TEST(Budget, ThrowsWhenExhausted)
{
    Budget budget(2);
    budget.consume();
    budget.consume();
    EXPECT_TRUE(budget.exhausted());
    EXPECT_EQ(budget.remaining(), 0u);
    EXPECT_THROW(budget.consume(), BudgetExhausted);
    EXPECT_EQ(budget.used(), 2u);
}

TEST(Rng, UniformRangeAndIndex)
{
    Rng rng(9);
    std::array<int, 7> hist{};
    for (int i = 0; i < 70000; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        ++hist[rng.index(7)];
    }
    for (int c : hist) {
        EXPECT_NEAR(c, 10000, 500);
    }
    EXPECT_EQ(rng.uniform(2.0, 2.0), 2.0);
    EXPECT_THROW(rng.index(0), std::invalid_argument);
}

TEST(Rng, NormalMoments)
{
    Rng rng(11);
    double sum = 0;
    double sq = 0;
    const int count = 200000;
    for (int i = 0; i < count; ++i) {
        const double z = rng.normal(1.0, 2.0);
        sum += z;
        sq += z * z;
    }
    const double mean = sum / count;
    EXPECT_NEAR(mean, 1.0, 0.02);
    EXPECT_NEAR(sq / count - mean * mean, 4.0, 0.05);
}

TEST(Rng, CauchyQuartiles)
{
    Rng rng(12);
    int below_lower = 0;
    int below_median = 0;
    const int count = 100000;
    for (int i = 0; i < count; ++i) {
        const double c = rng.cauchy(0.0, 1.0);
        below_lower += c < -1.0;
        below_median += c < 0.0;
    }
    EXPECT_NEAR(below_lower / double(count), 0.25, 0.01);
    EXPECT_NEAR(below_median / double(count), 0.5, 0.01);
}
