#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace modde {

/// Raised for invalid user-supplied configuration (bad tags, sizes, bounds).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an objective evaluation is requested after the budget ran out.
class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted() : std::runtime_error("evaluation budget exhausted") {}
};

using Vector = std::vector<double>;

/// Fitness assigned to death-penalized trials. Compares greater than every
/// finite objective value and equal to itself.
inline constexpr double kPenalty = std::numeric_limits<double>::infinity();

/// Marks an individual whose objective value has not been computed.
inline constexpr double kUnevaluated = std::numeric_limits<double>::quiet_NaN();

/// Seeded random stream. The engine is mt19937_64, whose output sequence is
/// fixed by the standard; the variates below are derived from raw engine
/// output so draw sequences do not depend on the standard library vendor.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    /// U[0,1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi]; returns lo exactly when lo == hi. The result never
    /// leaves the closed interval even when hi - lo rounds up.
    double uniform(double lo, double hi) { return std::min(hi, lo + (hi - lo) * uniform()); }

    /// Uniform integer in [0, n) by rejection (unbiased).
    std::size_t index(std::size_t n)
    {
        if (n == 0) {
            throw std::invalid_argument("Rng::index: empty range");
        }
        const std::uint64_t range = n;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % range;
        std::uint64_t draw = engine_();
        while (draw >= limit) {
            draw = engine_();
        }
        return static_cast<std::size_t>(draw % range);
    }

    /// Normal variate via the Marsaglia polar method (no cached spare, so
    /// every call consumes a fresh pair).
    double normal(double mean, double sd)
    {
        double u = 0.0;
        double v = 0.0;
        double s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        return mean + sd * u * std::sqrt(-2.0 * std::log(s) / s);
    }

    double cauchy(double location, double scale)
    {
        double u = uniform();
        while (u == 0.0) {
            u = uniform();
        }
        return location + scale * std::tan(std::numbers::pi * (u - 0.5));
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Box-shaped feasible region [lower_1, upper_1] x ... x [lower_n, upper_n].
/// Bounds are closed.
class SearchSpace {
public:
    SearchSpace(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper))
    {
        if (lower_.empty() || lower_.size() != upper_.size()) {
            throw ConfigError("search space: bound vectors must be non-empty and of equal length");
        }
        for (std::size_t j = 0; j < lower_.size(); ++j) {
            if (!(lower_[j] <= upper_[j]) || !std::isfinite(lower_[j]) || !std::isfinite(upper_[j])) {
                throw ConfigError("search space: lower bound exceeds upper bound in dimension " +
                                  std::to_string(j));
            }
        }
    }

    static SearchSpace cube(std::size_t n, double lo, double hi)
    {
        return SearchSpace(Vector(n, lo), Vector(n, hi));
    }

    std::size_t dim() const noexcept { return lower_.size(); }
    const Vector& lower() const noexcept { return lower_; }
    const Vector& upper() const noexcept { return upper_; }
    double lower(std::size_t j) const { return lower_[j]; }
    double upper(std::size_t j) const { return upper_[j]; }
    double width(std::size_t j) const { return upper_[j] - lower_[j]; }

    bool contains(std::size_t j, double value) const
    {
        return lower_[j] <= value && value <= upper_[j];
    }

    bool contains(std::span<const double> x) const
    {
        if (x.size() != dim()) {
            return false;
        }
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (!contains(j, x[j])) {
                return false;
            }
        }
        return true;
    }

private:
    Vector lower_;
    Vector upper_;
};

struct Individual {
    Vector x;
    double fitness = kUnevaluated;

    bool evaluated() const noexcept { return !std::isnan(fitness); }
};

struct Population {
    std::vector<Individual> members;
    std::size_t generation = 0;

    std::size_t size() const noexcept { return members.size(); }
    const Individual& operator[](std::size_t i) const { return members[i]; }
    Individual& operator[](std::size_t i) { return members[i]; }

    /// Index of the minimum-fitness member; ties resolve to the lowest index.
    std::size_t best_index() const
    {
        std::size_t best = 0;
        for (std::size_t i = 1; i < members.size(); ++i) {
            if (members[i].fitness < members[best].fitness) {
                best = i;
            }
        }
        return best;
    }
};

/// Objective-evaluation counter. Every evaluation consumes exactly one unit.
class Budget {
public:
    explicit Budget(std::uint64_t max_evaluations) : max_(max_evaluations) {}

    std::uint64_t max_evaluations() const noexcept { return max_; }
    std::uint64_t used() const noexcept { return used_; }
    std::uint64_t remaining() const noexcept { return max_ - used_; }
    bool exhausted() const noexcept { return used_ >= max_; }

    void consume()
    {
        if (exhausted()) {
            throw BudgetExhausted();
        }
        ++used_;
    }

private:
    std::uint64_t max_;
    std::uint64_t used_ = 0;
};

/// Smallest population every mutation strategy can draw from without
/// running out of distinct non-target indices for rand/1.
inline constexpr std::size_t kMinPopulation = 4;

inline Population initialize_population(const SearchSpace& space, std::size_t size, Rng& rng)
{
    if (size < kMinPopulation) {
        throw ConfigError("population size must be at least " + std::to_string(kMinPopulation) +
                          ", got " + std::to_string(size));
    }
    Population pop;
    pop.members.resize(size);
    for (auto& member : pop.members) {
        member.x.resize(space.dim());
        for (std::size_t j = 0; j < space.dim(); ++j) {
            member.x[j] = rng.uniform(space.lower(j), space.upper(j));
        }
    }
    return pop;
}

/// Elitist one-to-one selection: the trial replaces the parent only when it
/// is strictly better.
inline const Individual& select(const Individual& parent, const Individual& trial)
{
    if (!parent.evaluated() || !trial.evaluated()) {
        throw std::logic_error("select: both individuals must be evaluated");
    }
    return trial.fitness < parent.fitness ? trial : parent;
}

} // namespace modde
