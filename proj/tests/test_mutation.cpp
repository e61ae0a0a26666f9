#include <gtest/gtest.h>

#include <set>

#include "modde/mutation.hpp"
#include "oracles.hpp"

using namespace modde;

namespace {

Population random_population(std::size_t m, std::size_t n, Rng& rng)
{
    Population pop;
    pop.members.resize(m);
    for (auto& ind : pop.members) {
        ind.x.resize(n);
        for (auto& v : ind.x) {
            v = rng.uniform(-5, 5);
        }
        ind.fitness = rng.uniform(-10, 10);
    }
    return pop;
}

Population from_points(std::vector<Vector> points, std::vector<double> fitness)
{
    Population pop;
    for (std::size_t i = 0; i < points.size(); ++i) {
        pop.members.push_back({points[i], fitness[i]});
    }
    return pop;
}

} // namespace

TEST(Mutation, TagsRoundTrip)
{
    for (auto s : kAllMutations) {
        EXPECT_EQ(parse_mutation(to_string(s)), s);
    }
    EXPECT_THROW(parse_mutation("rand/3"), ConfigError);
}

TEST(Mutation, MatchesOracleForAllStrategies)
{
    Rng gen(100);
    for (auto s : kAllMutations) {
        for (int c = 0; c < 200; ++c) {
            const auto pop = random_population(8 + gen.index(5), 4, gen);
            const std::size_t target = gen.index(pop.size());
            const double F = gen.uniform(0.1, 1.0);
            const std::uint64_t seed = gen.index(1u << 30);
            Rng a(seed);
            Rng b(seed);
            const auto got = mutate(s, pop, target, F, a);
            const auto want = oracle::mutate(s, pop, target, F, b);
            for (std::size_t j = 0; j < 4; ++j) {
                ASSERT_NEAR(got.donor[j], want.donor[j], 1e-12) << to_string(s);
                ASSERT_NEAR(got.base[j], want.base[j], 1e-12) << to_string(s);
            }
        }
    }
}

TEST(Mutation, IndicesDistinctAndNotTarget)
{
    Rng gen(5);
    for (auto s : kAllMutations) {
        const auto pop = random_population(min_population(s), 3, gen);
        for (int c = 0; c < 200; ++c) {
            const std::size_t target = gen.index(pop.size());
            const auto out = mutate(s, pop, target, 0.5, gen);
            const std::set<std::size_t> unique(out.indices.begin(), out.indices.end());
            EXPECT_EQ(unique.size(), random_index_count(s));
            EXPECT_EQ(unique.count(target), 0u);
        }
    }
}

TEST(Mutation, Rand1WorkedExample)
{
    // members 1, 2, 3 are r1, r2, r3 once the draw is replayed
    const auto pop = from_points({{9, 9}, {0, 0}, {2, 2}, {0, 0}}, {0, 0, 0, 0});
    bool found = false;
    for (std::uint64_t seed = 0; seed < 1000 && !found; ++seed) {
        Rng rng(seed);
        const auto out = mutate(MutationStrategy::Rand1, pop, 0, 0.5, rng);
        if (out.indices != std::vector<std::size_t>{1, 2, 3}) {
            continue;
        }
        found = true;
        EXPECT_EQ(out.donor, (Vector{1, 1}));
        EXPECT_EQ(out.base, (Vector{0, 0}));
    }
    EXPECT_TRUE(found);
}

TEST(Mutation, TargetToBestIdentity)
{
    // target is the best; all others equal, so every difference vanishes
    const auto pop = from_points({{1, 2}, {3, 3}, {3, 3}, {3, 3}}, {0, 1, 1, 1});
    Rng rng(1);
    const auto out = mutate(MutationStrategy::TargetToBest1, pop, 0, 0.7, rng);
    EXPECT_EQ(out.donor, (Vector{1, 2}));
}

TEST(Mutation, TrigonometricEqualWeightsGiveCentroid)
{
    const auto pop = from_points({{9, 9}, {0, 0}, {3, 0}, {0, 3}}, {5, 1, 1, 1});
    bool found = false;
    for (std::uint64_t seed = 0; seed < 100000 && !found; ++seed) {
        Rng rng(seed);
        const auto out = mutate(MutationStrategy::Trigonometric, pop, 0, 0.5, rng);
        if (out.base != Vector{1, 1}) {
            continue;
        }
        found = true;
        EXPECT_NEAR(out.donor[0], 1.0, 1e-15);
        EXPECT_NEAR(out.donor[1], 1.0, 1e-15);
    }
    EXPECT_TRUE(found);
}

TEST(Mutation, TrigonometricBranchRate)
{
    Rng gen(3);
    const auto pop = random_population(10, 2, gen);
    int trig = 0;
    const int reps = 40000;
    for (int c = 0; c < reps; ++c) {
        const auto out = mutate(MutationStrategy::Trigonometric, pop, 0, 0.5, gen);
        trig += out.base != pop[out.indices[0]].x;
    }
    EXPECT_NEAR(trig / double(reps), kTrigonometricRate, 0.005);
}

TEST(Mutation, TwoOptOtherwiseBranch)
{
    // f(r1)=5 > f(r2)=1 -> base x_r2, donor x_r2 + F(x_r1 - x_r3)
    const auto pop = from_points({{9, 9}, {4, 0}, {1, 1}, {0, 2}}, {0, 5, 1, 3});
    bool found = false;
    for (std::uint64_t seed = 0; seed < 1000 && !found; ++seed) {
        Rng rng(seed);
        const auto out = mutate(MutationStrategy::TwoOpt1, pop, 0, 0.5, rng);
        if (out.indices != std::vector<std::size_t>{1, 2, 3}) {
            continue;
        }
        found = true;
        EXPECT_EQ(out.base, (Vector{1, 1}));
        EXPECT_EQ(out.donor, (Vector{1 + 0.5 * 4, 1 + 0.5 * -2}));
    }
    EXPECT_TRUE(found);
}

TEST(Mutation, Rand2DirSwapsToFitterBase)
{
    const auto pop = from_points({{9, 9}, {2, 0}, {0, 0}, {0, 1}, {0, 3}}, {0, 2, 1, 1, 2});
    bool found = false;
    for (std::uint64_t seed = 0; seed < 5000 && !found; ++seed) {
        Rng rng(seed);
        const auto out = mutate(MutationStrategy::Rand2Dir, pop, 0, 1.0, rng);
        if (out.indices != std::vector<std::size_t>{2, 1, 3, 4}) {
            // the library reports indices after ordering
            continue;
        }
        found = true;
        EXPECT_EQ(out.base, (Vector{0, 0}));
        // x2 + F/2 (x2 - x1 + x3 - x4)
        EXPECT_EQ(out.donor, (Vector{-1, -1}));
    }
    EXPECT_TRUE(found);
}

TEST(Mutation, PbestPoolSize)
{
    EXPECT_EQ(pbest_pool_size(100), 5u);
    EXPECT_EQ(pbest_pool_size(10), 3u);
    EXPECT_EQ(pbest_pool_size(4), 3u);
    EXPECT_EQ(pbest_pool_size(1000), 50u);
}

TEST(Mutation, PbestComesFromPool)
{
    Rng gen(8);
    auto pop = random_population(40, 1, gen);
    // target-to-pbest with F=1 and r1==r2 contributions isolated:
    // donor - x_i - (x_r1 - x_r2) = x_pbest - x_i
    const auto order = detail::fitness_order(pop);
    const std::set<std::size_t> pool(order.begin(), order.begin() + pbest_pool_size(40));
    for (int c = 0; c < 500; ++c) {
        const auto out = mutate(MutationStrategy::TargetToPBest1, pop, 0, 1.0, gen);
        const double pbest_x = out.donor[0] - (pop[out.indices[0]].x[0] - pop[out.indices[1]].x[0]);
        bool matched = false;
        for (auto k : pool) {
            matched = matched || std::abs(pop[k].x[0] - pbest_x) < 1e-12;
        }
        EXPECT_TRUE(matched);
    }
}

TEST(Mutation, RankingFavoursFitMembers)
{
    Rng gen(9);
    auto pop = random_population(20, 1, gen);
    const auto order = detail::fitness_order(pop);
    std::vector<int> picked(20, 0);
    for (int c = 0; c < 40000; ++c) {
        const auto out = mutate(MutationStrategy::RankingPBest1, pop, order[19], 0.5, gen);
        ++picked[out.indices[0]];
    }
    EXPECT_GT(picked[order[0]], 3 * picked[order[17]]);
}

TEST(Mutation, Preconditions)
{
    Rng rng(1);
    const auto pop = from_points({{0}, {1}, {2}, {3}}, {0, 1, 2, 3});
    EXPECT_THROW(mutate(MutationStrategy::Rand2, pop, 0, 0.5, rng), ConfigError);
    EXPECT_THROW(mutate(MutationStrategy::Rand1, pop, 0, 0.0, rng), ConfigError);
    EXPECT_THROW(mutate(MutationStrategy::Rand1, pop, 4, 0.5, rng), std::out_of_range);
    auto unevaluated = pop;
    unevaluated[2].fitness = kUnevaluated;
    EXPECT_THROW(mutate(MutationStrategy::Best1, unevaluated, 0, 0.5, rng), std::logic_error);
    EXPECT_NO_THROW(mutate(MutationStrategy::Rand1, unevaluated, 0, 0.5, rng));
}

TEST(Mutation, MinPopulation)
{
    EXPECT_EQ(min_population(MutationStrategy::Best1), 4u);
    EXPECT_EQ(min_population(MutationStrategy::Rand1), 4u);
    EXPECT_EQ(min_population(MutationStrategy::Best2), 5u);
    EXPECT_EQ(min_population(MutationStrategy::Rand2), 6u);
    EXPECT_EQ(min_population(MutationStrategy::TwoOpt2), 6u);
}
