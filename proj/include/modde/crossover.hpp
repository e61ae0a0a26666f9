#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string_view>

#include "modde/core.hpp"
#include "modde/tags.hpp"

namespace modde {

enum class CrossoverKind { Binomial, Exponential };

inline constexpr std::array<std::string_view, 2> kCrossoverTags{"bin", "exp"};
inline constexpr std::array<CrossoverKind, 2> kAllCrossovers{CrossoverKind::Binomial,
                                                             CrossoverKind::Exponential};

inline std::string_view to_string(CrossoverKind k) { return kCrossoverTags[static_cast<std::size_t>(k)]; }

inline CrossoverKind parse_crossover(std::string_view tag)
{
    return detail::parse_tag<CrossoverKind>(kCrossoverTags, tag, "crossover");
}

namespace detail {
inline void check_lengths(std::span<const double> target, std::span<const double> donor)
{
    if (target.size() != donor.size() || target.empty()) {
        throw std::logic_error("crossover: target and donor lengths differ");
    }
}
} // namespace detail

/// Draw order: j_rand, then one U(0,1) per component in ascending order.
inline Vector binomial_crossover(std::span<const double> target, std::span<const double> donor, double cr,
                                 Rng& rng)
{
    detail::check_lengths(target, donor);
    const std::size_t n = target.size();
    const std::size_t j_rand = rng.index(n);
    Vector trial(target.begin(), target.end());
    for (std::size_t j = 0; j < n; ++j) {
        if (rng.uniform() <= cr || j == j_rand) {
            trial[j] = donor[j];
        }
    }
    return trial;
}

/// Copies a wrapped run of donor components starting at a uniform index. The
/// first component is always copied; each further one needs U(0,1) < Cr.
inline Vector exponential_crossover(std::span<const double> target, std::span<const double> donor,
                                    double cr, Rng& rng)
{
    detail::check_lengths(target, donor);
    const std::size_t n = target.size();
    const std::size_t start = rng.index(n);
    Vector trial(target.begin(), target.end());
    trial[start] = donor[start];
    for (std::size_t length = 1; length < n && rng.uniform() < cr; ++length) {
        const std::size_t j = (start + length) % n;
        trial[j] = donor[j];
    }
    return trial;
}

inline Vector crossover(CrossoverKind kind, std::span<const double> target, std::span<const double> donor,
                        double cr, Rng& rng)
{
    return kind == CrossoverKind::Binomial ? binomial_crossover(target, donor, cr, rng)
                                           : exponential_crossover(target, donor, cr, rng);
}

} // namespace modde
