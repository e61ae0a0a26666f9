#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modde/core.hpp"
#include "modde/tags.hpp"

namespace modde {

enum class MutationStrategy {
    Rand1,
    Best1,
    TargetToBest1,
    Best2,
    Rand2,
    TargetToBest2,
    TargetToPBest1,
    Rand2Dir,
    Nsde,
    Trigonometric,
    TwoOpt1,
    TwoOpt2,
    ProximityRand1,
    RankingPBest1,
};

inline constexpr std::array<std::string_view, 14> kMutationTags{
    "rand/1",          "best/1",     "target-to-best/1", "best/2",
    "rand/2",          "target-to-best/2", "target-to-pbest/1", "rand/2/dir",
    "nsde",            "trigonometric", "2-opt/1",        "2-opt/2",
    "proximity-rand/1", "ranking-pbest/1",
};

inline constexpr std::array<MutationStrategy, 14> kAllMutations{
    MutationStrategy::Rand1,          MutationStrategy::Best1,
    MutationStrategy::TargetToBest1,  MutationStrategy::Best2,
    MutationStrategy::Rand2,          MutationStrategy::TargetToBest2,
    MutationStrategy::TargetToPBest1, MutationStrategy::Rand2Dir,
    MutationStrategy::Nsde,           MutationStrategy::Trigonometric,
    MutationStrategy::TwoOpt1,        MutationStrategy::TwoOpt2,
    MutationStrategy::ProximityRand1, MutationStrategy::RankingPBest1,
};

inline std::string_view to_string(MutationStrategy s) { return kMutationTags[static_cast<std::size_t>(s)]; }

inline MutationStrategy parse_mutation(std::string_view tag)
{
    return detail::parse_tag<MutationStrategy>(kMutationTags, tag, "mutation");
}

/// Probability of taking the trigonometric branch; rand/1 otherwise.
inline constexpr double kTrigonometricRate = 0.05;

struct MutationOutcome {
    Vector donor;
    /// The vector the scaled differences were added to (the centroid for the
    /// trigonometric branch).
    Vector base;
    /// Random indices r_1, r_2, ... in formula order. Never contains the target.
    std::vector<std::size_t> indices;
};

/// Number of distinct random non-target indices the strategy draws.
inline constexpr std::size_t random_index_count(MutationStrategy s)
{
    switch (s) {
    case MutationStrategy::Best1:
    case MutationStrategy::TargetToBest1:
    case MutationStrategy::TargetToPBest1:
    case MutationStrategy::RankingPBest1:
        return 2;
    case MutationStrategy::Rand1:
    case MutationStrategy::Nsde:
    case MutationStrategy::Trigonometric:
    case MutationStrategy::TwoOpt1:
    case MutationStrategy::ProximityRand1:
        return 3;
    case MutationStrategy::Best2:
    case MutationStrategy::TargetToBest2:
    case MutationStrategy::Rand2Dir:
        return 4;
    case MutationStrategy::Rand2:
    case MutationStrategy::TwoOpt2:
        return 5;
    }
    return 5;
}

inline constexpr std::size_t min_population(MutationStrategy s)
{
    return std::max(kMinPopulation, random_index_count(s) + 1);
}

/// p = max(0.05, 3/M); the pbest pool is the best round(p*M) members.
inline std::size_t pbest_pool_size(std::size_t population_size)
{
    const double p = std::max(0.05, 3.0 / static_cast<double>(population_size));
    const auto count = static_cast<std::size_t>(std::lround(p * static_cast<double>(population_size)));
    return std::clamp<std::size_t>(count, 1, population_size);
}

namespace detail {

/// Uniform distinct indices in [0, m) avoiding `excluded`, by rejection.
inline void draw_distinct(std::size_t m, std::size_t count, std::vector<std::size_t>& taken,
                          std::size_t target, Rng& rng)
{
    for (std::size_t k = 0; k < count; ++k) {
        std::size_t r = 0;
        do {
            r = rng.index(m);
        } while (r == target || std::find(taken.begin(), taken.end(), r) != taken.end());
        taken.push_back(r);
    }
}

/// Roulette wheel without replacement. The target and already taken indices
/// are ineligible; remaining weights are re-normalized per pick. When every
/// eligible weight is zero the pick falls back to uniform.
inline void roulette_distinct(std::span<const double> weights, std::size_t count,
                              std::vector<std::size_t>& taken, std::size_t target, Rng& rng)
{
    const std::size_t m = weights.size();
    auto eligible = [&](std::size_t i) {
        return i != target && std::find(taken.begin(), taken.end(), i) == taken.end();
    };
    for (std::size_t k = 0; k < count; ++k) {
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (eligible(i)) {
                total += weights[i];
            }
        }
        if (!(total > 0.0)) {
            draw_distinct(m, 1, taken, target, rng);
            continue;
        }
        const double u = rng.uniform() * total;
        double acc = 0.0;
        std::size_t pick = m;
        std::size_t last_positive = m;
        for (std::size_t i = 0; i < m; ++i) {
            if (!eligible(i) || !(weights[i] > 0.0)) {
                continue;
            }
            last_positive = i;
            acc += weights[i];
            if (u < acc) {
                pick = i;
                break;
            }
        }
        taken.push_back(pick == m ? last_positive : pick);
    }
}

/// Members sorted by fitness, best first; ties keep index order.
inline std::vector<std::size_t> fitness_order(const Population& pop)
{
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return pop[a].fitness < pop[b].fitness;
    });
    return order;
}

inline bool uses_fitness(MutationStrategy s)
{
    return s != MutationStrategy::Rand1 && s != MutationStrategy::Rand2 &&
           s != MutationStrategy::Nsde && s != MutationStrategy::ProximityRand1;
}

} // namespace detail

/// Creates the donor vector for `target` under `strategy`. No bound handling
/// happens here; the donor may lie outside the search space.
inline MutationOutcome mutate(MutationStrategy strategy, const Population& pop, std::size_t target,
                              double F, Rng& rng)
{
    const std::size_t m = pop.size();
    if (m < min_population(strategy)) {
        throw ConfigError("mutation " + std::string(to_string(strategy)) + " needs a population of at least " +
                          std::to_string(min_population(strategy)) + ", got " + std::to_string(m));
    }
    if (target >= m) {
        throw std::out_of_range("mutate: target index out of range");
    }
    if (!(F > 0.0)) {
        throw ConfigError("mutation scale factor F must be positive");
    }
    if (detail::uses_fitness(strategy)) {
        for (const auto& member : pop.members) {
            if (!member.evaluated()) {
                throw std::logic_error("mutate: strategy requires an evaluated population");
            }
        }
    }

    const std::size_t n = pop[0].x.size();
    const Vector& xi = pop[target].x;
    auto x = [&](std::size_t i) -> const Vector& { return pop[i].x; };
    auto f = [&](std::size_t i) { return pop[i].fitness; };

    MutationOutcome out;
    out.donor.resize(n);
    auto& r = out.indices;
    r.reserve(random_index_count(strategy));

    // base + F(a - b)
    auto rand1_form = [&](const Vector& base, const Vector& a, const Vector& b, double scale) {
        out.base = base;
        for (std::size_t j = 0; j < n; ++j) {
            out.donor[j] = base[j] + scale * (a[j] - b[j]);
        }
    };
    // base + F(a - b) + F(c - d)
    auto two_diff_form = [&](const Vector& base, const Vector& a, const Vector& b, const Vector& c,
                             const Vector& d) {
        out.base = base;
        for (std::size_t j = 0; j < n; ++j) {
            out.donor[j] = base[j] + F * (a[j] - b[j]) + F * (c[j] - d[j]);
        }
    };

    switch (strategy) {
    case MutationStrategy::Rand1: {
        detail::draw_distinct(m, 3, r, target, rng);
        rand1_form(x(r[0]), x(r[1]), x(r[2]), F);
        break;
    }
    case MutationStrategy::Best1: {
        detail::draw_distinct(m, 2, r, target, rng);
        rand1_form(x(pop.best_index()), x(r[0]), x(r[1]), F);
        break;
    }
    case MutationStrategy::TargetToBest1: {
        detail::draw_distinct(m, 2, r, target, rng);
        two_diff_form(xi, x(pop.best_index()), xi, x(r[0]), x(r[1]));
        break;
    }
    case MutationStrategy::Best2: {
        detail::draw_distinct(m, 4, r, target, rng);
        two_diff_form(x(pop.best_index()), x(r[0]), x(r[1]), x(r[2]), x(r[3]));
        break;
    }
    case MutationStrategy::Rand2: {
        detail::draw_distinct(m, 5, r, target, rng);
        two_diff_form(x(r[0]), x(r[1]), x(r[2]), x(r[3]), x(r[4]));
        break;
    }
    case MutationStrategy::TargetToBest2: {
        detail::draw_distinct(m, 4, r, target, rng);
        const Vector& best = x(pop.best_index());
        out.base = xi;
        for (std::size_t j = 0; j < n; ++j) {
            out.donor[j] = xi[j] + F * (best[j] - xi[j]) + F * (x(r[0])[j] - x(r[1])[j]) +
                           F * (x(r[2])[j] - x(r[3])[j]);
        }
        break;
    }
    case MutationStrategy::TargetToPBest1:
    case MutationStrategy::RankingPBest1: {
        const auto order = detail::fitness_order(pop);
        const std::size_t pbest = order[rng.index(pbest_pool_size(m))];
        if (strategy == MutationStrategy::TargetToPBest1) {
            detail::draw_distinct(m, 2, r, target, rng);
        } else {
            // rank weight: best member M, worst member 1
            std::vector<double> weights(m);
            for (std::size_t k = 0; k < m; ++k) {
                weights[order[k]] = static_cast<double>(m - k);
            }
            detail::roulette_distinct(weights, 1, r, target, rng);
            detail::draw_distinct(m, 1, r, target, rng);
        }
        two_diff_form(xi, x(pbest), xi, x(r[0]), x(r[1]));
        break;
    }
    case MutationStrategy::Rand2Dir: {
        detail::draw_distinct(m, 4, r, target, rng);
        if (f(r[0]) > f(r[1])) {
            std::swap(r[0], r[1]);
        }
        if (f(r[2]) > f(r[3])) {
            std::swap(r[2], r[3]);
        }
        out.base = x(r[0]);
        const double half = F / 2.0;
        for (std::size_t j = 0; j < n; ++j) {
            out.donor[j] = x(r[0])[j] + half * (x(r[0])[j] - x(r[1])[j] + x(r[2])[j] - x(r[3])[j]);
        }
        break;
    }
    case MutationStrategy::Nsde: {
        detail::draw_distinct(m, 3, r, target, rng);
        const double scale = rng.uniform() < 0.5 ? rng.normal(0.5, 0.5) : rng.cauchy(0.0, 1.0);
        rand1_form(x(r[0]), x(r[1]), x(r[2]), scale);
        break;
    }
    case MutationStrategy::Trigonometric: {
        detail::draw_distinct(m, 3, r, target, rng);
        const double p_sum = std::abs(f(r[0])) + std::abs(f(r[1])) + std::abs(f(r[2]));
        const bool trig = rng.uniform() < kTrigonometricRate;
        if (!trig || !(p_sum > 0.0) || !std::isfinite(p_sum)) {
            rand1_form(x(r[0]), x(r[1]), x(r[2]), F);
            break;
        }
        const double p1 = std::abs(f(r[0])) / p_sum;
        const double p2 = std::abs(f(r[1])) / p_sum;
        const double p3 = std::abs(f(r[2])) / p_sum;
        const Vector& a = x(r[0]);
        const Vector& b = x(r[1]);
        const Vector& c = x(r[2]);
        out.base.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            out.base[j] = (a[j] + b[j] + c[j]) / 3.0;
            out.donor[j] = out.base[j] + (p2 - p1) * (a[j] - b[j]) + (p3 - p2) * (b[j] - c[j]) +
                           (p1 - p3) * (c[j] - a[j]);
        }
        break;
    }
    case MutationStrategy::TwoOpt1: {
        detail::draw_distinct(m, 3, r, target, rng);
        if (f(r[0]) < f(r[1])) {
            rand1_form(x(r[0]), x(r[1]), x(r[2]), F);
        } else {
            rand1_form(x(r[1]), x(r[0]), x(r[2]), F);
        }
        break;
    }
    case MutationStrategy::TwoOpt2: {
        detail::draw_distinct(m, 5, r, target, rng);
        if (f(r[0]) < f(r[1])) {
            two_diff_form(x(r[0]), x(r[1]), x(r[2]), x(r[3]), x(r[4]));
        } else {
            two_diff_form(x(r[1]), x(r[0]), x(r[2]), x(r[3]), x(r[4]));
        }
        break;
    }
    case MutationStrategy::ProximityRand1: {
        std::vector<double> weights(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == target) {
                continue;
            }
            double sq = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double d = x(i)[j] - xi[j];
                sq += d * d;
            }
            weights[i] = std::sqrt(sq);
        }
        detail::roulette_distinct(weights, 3, r, target, rng);
        rand1_form(x(r[0]), x(r[1]), x(r[2]), F);
        break;
    }
    }
    return out;
}

} // namespace modde
