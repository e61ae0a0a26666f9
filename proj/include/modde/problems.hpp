#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modde/core.hpp"
#include "modde/tags.hpp"

namespace modde {

// Surrogate objectives, one or more per function group of the BBOB suite.
// These are stand-ins with BBOB-like structure, not the official functions.
enum class FunctionId {
    F0Noise,
    Sphere,
    LinearSlope,
    Rosenbrock,
    EllipsoidRot,
    Rastrigin,
    RandomPeaks,
};

inline constexpr std::array<std::string_view, 7> kFunctionTags{
    "f0-noise", "sphere", "linear-slope", "rosenbrock", "ellipsoid-rot", "rastrigin", "random-peaks",
};

inline constexpr std::array<FunctionId, 6> kSurrogateFunctions{
    FunctionId::Sphere,       FunctionId::LinearSlope, FunctionId::Rosenbrock,
    FunctionId::EllipsoidRot, FunctionId::Rastrigin,   FunctionId::RandomPeaks,
};

inline std::string_view to_string(FunctionId id) { return kFunctionTags[static_cast<std::size_t>(id)]; }

inline FunctionId parse_function(std::string_view tag)
{
    return detail::parse_tag<FunctionId>(kFunctionTags, tag, "function");
}

/// Function group (1..5) a surrogate stands in for; 0 for the noise landscape.
inline int function_group(FunctionId id)
{
    switch (id) {
    case FunctionId::F0Noise: return 0;
    case FunctionId::Sphere:
    case FunctionId::LinearSlope: return 1;
    case FunctionId::Rosenbrock: return 2;
    case FunctionId::EllipsoidRot: return 3;
    case FunctionId::Rastrigin: return 4;
    case FunctionId::RandomPeaks: return 5;
    }
    return 0;
}

inline constexpr std::size_t kRandomPeaksCount = 21;
inline constexpr double kDefaultBound = 5.0;

/// Row-major n x n matrix with orthonormal rows.
struct Rotation {
    std::size_t n = 0;
    std::vector<double> data;

    double operator()(std::size_t row, std::size_t col) const { return data[row * n + col]; }
};

/// Orthonormalizes the rows of a seeded Gaussian matrix with modified
/// Gram-Schmidt (two passes for numerical orthogonality).
inline Rotation random_rotation(std::size_t n, Rng& rng)
{
    Rotation rot{n, std::vector<double>(n * n)};
    for (auto& value : rot.data) {
        value = rng.normal(0.0, 1.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        double* row = rot.data.data() + i * n;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < i; ++k) {
                const double* prev = rot.data.data() + k * n;
                double dot = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    dot += row[j] * prev[j];
                }
                for (std::size_t j = 0; j < n; ++j) {
                    row[j] -= dot * prev[j];
                }
            }
        }
        double norm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            norm += row[j] * row[j];
        }
        norm = std::sqrt(norm);
        for (std::size_t j = 0; j < n; ++j) {
            row[j] /= norm;
        }
    }
    return rot;
}

struct ProblemInstance {
    FunctionId id = FunctionId::Sphere;
    std::size_t n = 0;
    SearchSpace space = SearchSpace::cube(1, -kDefaultBound, kDefaultBound);
    /// Optimum location; empty for the noise landscape.
    Vector shift;
    std::optional<Rotation> rotation;
    double f_opt = 0.0;
    std::uint64_t instance_seed = 0;
    /// random-peaks: centers[0] is the global peak (== shift, weight 0).
    std::vector<Vector> peak_centers;
    std::vector<double> peak_weights;

    bool has_optimum() const noexcept { return id != FunctionId::F0Noise; }
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
} // namespace detail

/// Builds a deterministic instance for (id, n, instance_seed) on `space`.
inline ProblemInstance make_instance(FunctionId id, std::size_t n, std::uint64_t instance_seed, const SearchSpace& space)
{
    if (n < 2) {
        throw ConfigError("problem dimension must be at least 2");
    }
    if (space.dim() != n) {
        throw ConfigError("problem dimension does not match the search space");
    }
    ProblemInstance inst;
    inst.id = id;
    inst.n = n;
    inst.space = space;
    inst.instance_seed = instance_seed;
    Rng rng(detail::splitmix64(instance_seed ^ detail::splitmix64(static_cast<std::uint64_t>(id) * 1000003ULL + n)));

    if (id == FunctionId::F0Noise) {
        return inst;
    }
    inst.f_opt = rng.uniform(-100.0, 100.0);
    inst.shift.resize(n);
    if (id == FunctionId::LinearSlope) {
        for (std::size_t j = 0; j < n; ++j) {
            inst.shift[j] = rng.uniform() < 0.5 ? space.lower(j) : space.upper(j);
        }
    } else {
        for (std::size_t j = 0; j < n; ++j) {
            inst.shift[j] = rng.uniform(space.lower(j), space.upper(j));
        }
    }
    if (id == FunctionId::EllipsoidRot) {
        inst.rotation = random_rotation(n, rng);
    }
    if (id == FunctionId::RandomPeaks) {
        inst.peak_centers.push_back(inst.shift);
        inst.peak_weights.push_back(0.0);
        for (std::size_t k = 1; k < kRandomPeaksCount; ++k) {
            Vector c(n);
            for (std::size_t j = 0; j < n; ++j) {
                c[j] = rng.uniform(space.lower(j), space.upper(j));
            }
            inst.peak_centers.push_back(std::move(c));
            inst.peak_weights.push_back(rng.uniform(1.0, 10.0));
        }
    }
    return inst;
}

inline ProblemInstance make_instance(FunctionId id, std::size_t n, std::uint64_t instance_seed)
{
    return make_instance(id, n, instance_seed, SearchSpace::cube(n, -kDefaultBound, kDefaultBound));
}

/// Objective value without budget accounting. `rng` is only drawn from by the
/// noise landscape.
inline double objective(const ProblemInstance& inst, std::span<const double> x, Rng& rng)
{
    const std::size_t n = inst.n;
    if (x.size() != n) {
        throw std::logic_error("objective: dimension mismatch");
    }
    if (inst.id == FunctionId::F0Noise) {
        return rng.uniform();
    }
    const Vector& o = inst.shift;
    const double denom = static_cast<double>(n - 1);
    double sum = 0.0;
    switch (inst.id) {
    case FunctionId::F0Noise:
        break;
    case FunctionId::Sphere:
        for (std::size_t j = 0; j < n; ++j) {
            const double z = x[j] - o[j];
            sum += z * z;
        }
        break;
    case FunctionId::LinearSlope:
        // Distance to the optimal corner along each axis, weighted 1 .. 10.
        for (std::size_t j = 0; j < n; ++j) {
            const double s = std::pow(10.0, static_cast<double>(j) / denom);
            const double sign = o[j] >= inst.space.upper(j) ? 1.0 : -1.0;
            sum += s * (o[j] - x[j]) * sign;
        }
        break;
    case FunctionId::Rosenbrock:
        // Shifted by one so the minimum sits at x == o.
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double z = x[j] - o[j] + 1.0;
            const double z_next = x[j + 1] - o[j + 1] + 1.0;
            const double a = z * z - z_next;
            sum += 100.0 * a * a + (z - 1.0) * (z - 1.0);
        }
        break;
    case FunctionId::EllipsoidRot: {
        const Rotation& r = *inst.rotation;
        for (std::size_t i = 0; i < n; ++i) {
            double y = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                y += r(i, j) * (x[j] - o[j]);
            }
            sum += std::pow(10.0, 6.0 * static_cast<double>(i) / denom) * y * y;
        }
        break;
    }
    case FunctionId::Rastrigin: {
        double acc = 10.0 * static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double z = x[j] - o[j];
            acc += z * z - 10.0 * std::cos(2.0 * std::numbers::pi * z);
        }
        sum = acc;
        break;
    }
    case FunctionId::RandomPeaks: {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < inst.peak_centers.size(); ++k) {
            double d = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double z = x[j] - inst.peak_centers[k][j];
                d += z * z;
            }
            best = std::min(best, inst.peak_weights[k] + d);
        }
        sum = best;
        break;
    }
    }
    return sum + inst.f_opt;
}

/// Budgeted evaluation: consumes one unit before computing the value.
inline double evaluate(const ProblemInstance& inst, std::span<const double> x, Budget& budget, Rng& rng)
{
    budget.consume();
    return objective(inst, x, rng);
}

} // namespace modde
