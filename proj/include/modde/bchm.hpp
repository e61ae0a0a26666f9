#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "modde/core.hpp"
#include "modde/mutation.hpp"
#include "modde/tags.hpp"

namespace modde {

/// Boundary constraint handling methods. All repairs are Lamarckian: the
/// repaired coordinates replace the donor.
enum class BchmKind {
    Resampling,
    Reinitialization,
    Projection,
    Reflection,
    Wrapping,
    Transformation,
    RandBase,
    MidpointBase,
    MidpointTarget,
    Conservatism,
    ProjectionMidpoint,
    ProjectionBase,
    DeathPenalty,
};

inline constexpr std::array<std::string_view, 13> kBchmTags{
    "resampling",    "reinitialization", "projection",      "reflection",
    "wrapping",      "transformation",   "rand-base",       "midpoint-base",
    "midpoint-target", "conservatism",   "projection-midpoint", "projection-base",
    "death-penalty",
};

inline constexpr std::array<BchmKind, 13> kAllBchms{
    BchmKind::Resampling,     BchmKind::Reinitialization, BchmKind::Projection,
    BchmKind::Reflection,     BchmKind::Wrapping,         BchmKind::Transformation,
    BchmKind::RandBase,       BchmKind::MidpointBase,     BchmKind::MidpointTarget,
    BchmKind::Conservatism,   BchmKind::ProjectionMidpoint, BchmKind::ProjectionBase,
    BchmKind::DeathPenalty,
};

inline std::string_view to_string(BchmKind k) { return kBchmTags[static_cast<std::size_t>(k)]; }

inline BchmKind parse_bchm(std::string_view tag) { return detail::parse_tag<BchmKind>(kBchmTags, tag, "bchm"); }

/// Maximum number of re-applications of the mutation before falling back to
/// projection.
inline constexpr std::size_t kMaxResamples = 100;

struct RepairContext {
    std::span<const double> donor;
    std::span<const double> base;
    std::span<const double> target;
    const SearchSpace& space;
    Rng& rng;
};

struct RepairReport {
    /// The vector was modified (or, for death penalty, penalized).
    bool repaired = false;
    /// Death penalty only: the trial must not be evaluated.
    bool penalized = false;
    Vector result;
};

// Componentwise maps. Each returns `v` itself when the map leaves it alone.

inline double project_component(double v, double lo, double hi) { return std::clamp(v, lo, hi); }

/// Repeated reflection off the violated bound, computed as a triangle wave
/// with period 2W so extreme inputs terminate in O(1).
inline double reflect_component(double v, double lo, double hi)
{
    if (lo <= v && v <= hi) {
        return v;
    }
    const double width = hi - lo;
    if (!(width > 0.0)) {
        return lo;
    }
    double out = 0.0;
    if (v < lo) {
        out = lo + std::fmod(lo - v, 2.0 * width);
        if (out > hi) {
            out = 2.0 * hi - out;
        }
    } else {
        out = hi - std::fmod(v - hi, 2.0 * width);
        if (out < lo) {
            out = 2.0 * lo - out;
        }
    }
    return std::clamp(out, lo, hi);
}

/// Toroidal re-entry on the opposite side.
inline double wrap_component(double v, double lo, double hi)
{
    if (lo <= v && v <= hi) {
        return v;
    }
    const double width = std::abs(hi - lo);
    if (!(width > 0.0)) {
        return lo;
    }
    const double out = v < lo ? hi - std::fmod(lo - v, width) : lo + std::fmod(v - hi, width);
    return std::clamp(out, lo, hi);
}

/// Offsets (a_l, a_u) of the boundary transformation:
/// a = min(W/2, 1 + |bound|/20).
inline std::pair<double, double> transformation_offsets(double lo, double hi)
{
    const double half = (hi - lo) / 2.0;
    return {std::min(half, 1.0 + std::abs(lo) / 20.0), std::min(half, 1.0 + std::abs(hi) / 20.0)};
}

/// Boundary transformation: values are folded into [lo - a_l, hi + a_u]
/// (reflection about the preimage edges, periodic with period twice the
/// preimage width), then the bands of width a next to each bound are bent
/// quadratically so the image is exactly [lo, hi]. Values inside
/// [lo + a_l, hi - a_u] are returned unchanged.
inline double transform_component(double v, double lo, double hi)
{
    if (!(hi > lo)) {
        return lo;
    }
    const auto [al, au] = transformation_offsets(lo, hi);
    if (lo + al <= v && v <= hi - au) {
        return v;
    }
    const double pre_lo = lo - al;
    const double pre_hi = hi + au;
    double y = v;
    if (y < pre_lo || y > pre_hi) {
        const double span = pre_hi - pre_lo;
        double offset = std::fmod(y - pre_lo, 2.0 * span);
        if (offset < 0.0) {
            offset += 2.0 * span;
        }
        y = offset <= span ? pre_lo + offset : pre_hi - (offset - span);
    }
    double out = y;
    if (y < lo + al) {
        out = lo + (y - pre_lo) * (y - pre_lo) / (4.0 * al);
    } else if (y > hi - au) {
        out = hi - (y - pre_hi) * (y - pre_hi) / (4.0 * au);
    }
    return std::clamp(out, lo, hi);
}

/// Largest alpha in [0, 1] such that anchor + alpha (donor - anchor) is
/// feasible, with the index of the dimension that binds it (n when the donor
/// is already feasible). The anchor must be feasible.
inline std::pair<double, std::size_t> projection_alpha(std::span<const double> anchor, std::span<const double> donor,
                                                       const SearchSpace& space)
{
    double alpha = 1.0;
    std::size_t binding = donor.size();
    for (std::size_t j = 0; j < donor.size(); ++j) {
        const double step = donor[j] - anchor[j];
        double bound_alpha = 1.0;
        if (donor[j] > space.upper(j) && step != 0.0) {
            bound_alpha = (space.upper(j) - anchor[j]) / step;
        } else if (donor[j] < space.lower(j) && step != 0.0) {
            bound_alpha = (space.lower(j) - anchor[j]) / step;
        } else {
            continue;
        }
        if (bound_alpha < alpha || binding == donor.size()) {
            alpha = std::min(alpha, bound_alpha);
            binding = j;
        }
    }
    return {std::clamp(alpha, 0.0, 1.0), binding};
}

namespace detail {

inline Vector project_towards(std::span<const double> anchor, std::span<const double> donor, const SearchSpace& space)
{
    const auto [alpha, binding] = projection_alpha(anchor, donor, space);
    Vector out(donor.begin(), donor.end());
    if (binding == donor.size()) {
        return out;
    }
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = std::clamp((1.0 - alpha) * anchor[j] + alpha * donor[j], space.lower(j), space.upper(j));
    }
    out[binding] = donor[binding] > space.upper(binding) ? space.upper(binding) : space.lower(binding);
    return out;
}

inline bool differs(std::span<const double> a, std::span<const double> b)
{
    return !std::equal(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace detail

/// Applies a repairing BCHM to the donor. Resampling and death penalty are
/// not repairs and are handled by resample_guard / death_penalty_check.
inline RepairReport repair(BchmKind kind, const RepairContext& ctx)
{
    const auto& space = ctx.space;
    const std::size_t n = ctx.donor.size();
    if (n != space.dim() || ctx.base.size() != n || ctx.target.size() != n) {
        throw std::logic_error("repair: vector length does not match the search space");
    }
    RepairReport report;
    report.result.assign(ctx.donor.begin(), ctx.donor.end());
    Vector& v = report.result;

    auto componentwise = [&](auto&& fix) {
        for (std::size_t j = 0; j < n; ++j) {
            const double lo = space.lower(j);
            const double hi = space.upper(j);
            if (v[j] < lo || v[j] > hi) {
                v[j] = fix(j, v[j], lo, hi);
            }
        }
    };

    switch (kind) {
    case BchmKind::Resampling:
    case BchmKind::DeathPenalty:
        throw std::invalid_argument("repair: " + std::string(to_string(kind)) + " is not a repair operator");
    case BchmKind::Reinitialization:
        componentwise([&](std::size_t, double, double lo, double hi) { return ctx.rng.uniform(lo, hi); });
        break;
    case BchmKind::Projection:
        componentwise([](std::size_t, double x, double lo, double hi) { return project_component(x, lo, hi); });
        break;
    case BchmKind::Reflection:
        componentwise([](std::size_t, double x, double lo, double hi) { return reflect_component(x, lo, hi); });
        break;
    case BchmKind::Wrapping:
        componentwise([](std::size_t, double x, double lo, double hi) { return wrap_component(x, lo, hi); });
        break;
    case BchmKind::Transformation:
        for (std::size_t j = 0; j < n; ++j) {
            v[j] = transform_component(v[j], space.lower(j), space.upper(j));
        }
        break;
    case BchmKind::RandBase:
        componentwise([&](std::size_t j, double x, double lo, double hi) {
            const double b = ctx.base[j];
            return x < lo ? ctx.rng.uniform(lo, b) : ctx.rng.uniform(b, hi);
        });
        break;
    case BchmKind::MidpointBase:
        componentwise([&](std::size_t j, double x, double lo, double hi) {
            return x < lo ? (lo + ctx.base[j]) / 2.0 : (ctx.base[j] + hi) / 2.0;
        });
        break;
    case BchmKind::MidpointTarget:
        componentwise([&](std::size_t j, double x, double lo, double hi) {
            return x < lo ? (lo + ctx.target[j]) / 2.0 : (ctx.target[j] + hi) / 2.0;
        });
        break;
    case BchmKind::Conservatism:
        if (!space.contains(v)) {
            v.assign(ctx.base.begin(), ctx.base.end());
        }
        break;
    case BchmKind::ProjectionMidpoint: {
        Vector center(n);
        for (std::size_t j = 0; j < n; ++j) {
            center[j] = (space.lower(j) + space.upper(j)) / 2.0;
        }
        v = detail::project_towards(center, ctx.donor, space);
        break;
    }
    case BchmKind::ProjectionBase:
        v = detail::project_towards(ctx.base, ctx.donor, space);
        break;
    }
    report.repaired = detail::differs(v, ctx.donor);
    return report;
}

struct ResampleResult {
    MutationOutcome outcome;
    /// Total calls to mutate, in [1, kMaxResamples + 1].
    std::size_t attempts = 0;
    bool projected = false;
    bool repaired = false;
};

/// Re-applies the mutation with fresh indices until the donor is feasible,
/// projecting the last donor if kMaxResamples resamples were not enough.
inline ResampleResult resample_guard(MutationStrategy strategy, const Population& pop, std::size_t target, double F,
                                     const SearchSpace& space, Rng& rng)
{
    ResampleResult res;
    res.outcome = mutate(strategy, pop, target, F, rng);
    res.attempts = 1;
    while (!space.contains(res.outcome.donor) && res.attempts <= kMaxResamples) {
        res.outcome = mutate(strategy, pop, target, F, rng);
        ++res.attempts;
    }
    if (!space.contains(res.outcome.donor)) {
        for (std::size_t j = 0; j < space.dim(); ++j) {
            res.outcome.donor[j] = project_component(res.outcome.donor[j], space.lower(j), space.upper(j));
        }
        res.projected = true;
    }
    res.repaired = res.attempts > 1 || res.projected;
    return res;
}

/// Death penalty, applied to trial vectors after crossover. An infeasible
/// trial is flagged so it receives kPenalty without being evaluated.
inline RepairReport death_penalty_check(std::span<const double> trial, const SearchSpace& space)
{
    RepairReport report;
    report.result.assign(trial.begin(), trial.end());
    report.penalized = !space.contains(trial);
    report.repaired = report.penalized;
    return report;
}

} // namespace modde
