#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "modde/core.hpp"
#include "modde/tags.hpp"

namespace modde {

enum class AdaptationMode { Shade, Fixed };

inline constexpr std::array<std::string_view, 2> kAdaptationTags{"shade", "fixed"};

inline std::string_view to_string(AdaptationMode m) { return kAdaptationTags[static_cast<std::size_t>(m)]; }

inline AdaptationMode parse_adaptation(std::string_view tag)
{
    return detail::parse_tag<AdaptationMode>(kAdaptationTags, tag, "adaptation");
}

/// Success-history memory of scale factor and crossover rate means.
struct ParamMemory {
    std::vector<double> mean_f;
    std::vector<double> mean_cr;
    std::size_t write_index = 0;

    explicit ParamMemory(std::size_t slots = 100, double initial = 0.5)
        : mean_f(slots, initial), mean_cr(slots, initial)
    {
        if (slots == 0) {
            throw ConfigError("parameter memory needs at least one slot");
        }
    }

    std::size_t slots() const noexcept { return mean_f.size(); }

    bool operator==(const ParamMemory&) const = default;
};

struct SuccessRecord {
    double f = 0.0;
    double cr = 0.0;
    /// f(parent) - f(trial); positive for a real success.
    double improvement = 0.0;
};

struct ControlParams {
    double f = 0.5;
    double cr = 0.9;
};

inline constexpr double kShadeSpread = 0.1;

/// F ~ Cauchy(M_F[r], 0.1) redrawn while non-positive and capped at 1;
/// Cr ~ N(M_Cr[r], 0.1) clamped to [0, 1].
inline ControlParams sample_parameters(const ParamMemory& mem, Rng& rng)
{
    const std::size_t slot = rng.index(mem.slots());
    double f = 0.0;
    do {
        f = rng.cauchy(mem.mean_f[slot], kShadeSpread);
    } while (!(f > 0.0));
    f = std::min(f, 1.0);
    const double cr = std::clamp(rng.normal(mem.mean_cr[slot], kShadeSpread), 0.0, 1.0);
    return {f, cr};
}

/// Writes the improvement-weighted Lehmer mean of F and the weighted
/// arithmetic mean of Cr into the current slot. Records with non-positive
/// improvement are ignored; no valid records leaves the memory unchanged.
inline ParamMemory update_memory(ParamMemory mem, std::span<const SuccessRecord> successes)
{
    double total = 0.0;
    for (const auto& s : successes) {
        if (s.improvement > 0.0) {
            total += s.improvement;
        }
    }
    if (!(total > 0.0)) {
        return mem;
    }
    double sum_wf = 0.0;
    double sum_wf2 = 0.0;
    double sum_wcr = 0.0;
    for (const auto& s : successes) {
        if (!(s.improvement > 0.0)) {
            continue;
        }
        const double w = s.improvement / total;
        sum_wf += w * s.f;
        sum_wf2 += w * s.f * s.f;
        sum_wcr += w * s.cr;
    }
    // Rounding can push either mean an ulp past its range.
    mem.mean_f[mem.write_index] = std::clamp(sum_wf2 / sum_wf, std::numeric_limits<double>::min(), 1.0);
    mem.mean_cr[mem.write_index] = std::clamp(sum_wcr, 0.0, 1.0);
    mem.write_index = (mem.write_index + 1) % mem.slots();
    return mem;
}

} // namespace modde
