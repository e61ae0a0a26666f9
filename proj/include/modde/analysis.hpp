#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "modde/runner.hpp"

namespace modde {

/// Raised when a ranking cell lacks data for some (bchm, block) coordinate.
class DataGapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CellKey {
    MutationStrategy mutation = MutationStrategy::Rand1;
    CrossoverKind crossover = CrossoverKind::Binomial;
    int group = 0;

    auto operator<=>(const CellKey&) const = default;

    /// Column label, e.g. "rand/1/bin".
    std::string label() const { return std::string(to_string(mutation)) + "/" + std::string(to_string(crossover)); }
};

/// A block is one problem (function, instance) within a function group.
struct BlockKey {
    FunctionId function = FunctionId::Sphere;
    std::uint64_t instance = 1;

    auto operator<=>(const BlockKey&) const = default;
};

struct RankTable {
    CellKey cell;
    std::vector<BchmKind> treatments;
    /// ranks[b][t]: midrank of treatment t in block b (1 = best).
    std::vector<std::vector<double>> block_ranks;
    std::vector<double> mean_ranks;
    /// Mean PORS over all runs with a defined PORS; NaN if none.
    std::vector<double> mean_pors;
    double friedman_statistic = std::numeric_limits<double>::quiet_NaN();
    double friedman_p = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<BchmKind, BchmKind>> significant_pairs;
    std::vector<BchmKind> best_set;
    std::vector<BchmKind> worse_set;

    std::size_t blocks() const noexcept { return block_ranks.size(); }
    std::size_t k() const noexcept { return treatments.size(); }
};

/// Ranks (1 = smallest) with ties sharing the average of their positions.
inline std::vector<double> midranks(std::span<const double> values)
{
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t start = 0; start < order.size();) {
        std::size_t end = start + 1;
        while (end < order.size() && !(values[order[start]] < values[order[end]])) {
            ++end;
        }
        const double rank = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0;
        for (std::size_t i = start; i < end; ++i) {
            ranks[order[i]] = rank;
        }
        start = end;
    }
    return ranks;
}

inline double median(std::vector<double> values)
{
    if (values.empty()) {
        throw std::invalid_argument("median of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
}

/// Fills block ranks and mean ranks of `table` from per-block scores
/// (scores[b][t], lower is better).
inline void rank_blocks(RankTable& table, const std::vector<std::vector<double>>& scores)
{
    const std::size_t k = table.treatments.size();
    table.block_ranks.clear();
    table.mean_ranks.assign(k, 0.0);
    for (const auto& row : scores) {
        if (row.size() != k) {
            throw std::invalid_argument("rank_blocks: score row has wrong treatment count");
        }
        table.block_ranks.push_back(midranks(row));
    }
    if (table.block_ranks.empty()) {
        return;
    }
    for (std::size_t t = 0; t < k; ++t) {
        double sum = 0.0;
        for (const auto& ranks : table.block_ranks) {
            sum += ranks[t];
        }
        table.mean_ranks[t] = sum / static_cast<double>(table.block_ranks.size());
    }
}

/// Ranks the BCHMs of one (mutation, crossover, group) cell. Per block the
/// BCHMs are ordered by the median of their final best values over runs.
inline RankTable compute_ranks(const CellKey& cell, std::span<const RunLog> logs)
{
    std::map<BchmKind, std::map<BlockKey, std::vector<const RunLog*>>> grouped;
    std::map<BlockKey, bool> block_set;
    for (const auto& log : logs) {
        grouped[log.bchm][BlockKey{log.function, log.instance}].push_back(&log);
        block_set[BlockKey{log.function, log.instance}] = true;
    }
    if (grouped.size() < 2) {
        throw std::invalid_argument("compute_ranks: at least two BCHMs are required in cell " + cell.label());
    }
    RankTable table;
    table.cell = cell;
    for (const auto& [kind, _] : grouped) {
        table.treatments.push_back(kind);
    }

    std::optional<std::size_t> run_count;
    std::vector<std::vector<double>> scores;
    for (const auto& [block, present] : block_set) {
        std::vector<double> row;
        for (const auto kind : table.treatments) {
            const auto& per_block = grouped[kind];
            const auto it = per_block.find(block);
            if (it == per_block.end()) {
                throw DataGapError("no runs for cell " + cell.label() + ", bchm " + std::string(to_string(kind)) +
                                   ", function " + function_dir(block.function, block.instance));
            }
            if (run_count && *run_count != it->second.size()) {
                throw DataGapError("unequal run counts in cell " + cell.label() + " at bchm " +
                                   std::string(to_string(kind)) + ", function " +
                                   function_dir(block.function, block.instance));
            }
            run_count = it->second.size();
            std::vector<double> finals;
            for (const auto* log : it->second) {
                finals.push_back(log->final_best);
            }
            row.push_back(median(std::move(finals)));
        }
        scores.push_back(std::move(row));
    }
    rank_blocks(table, scores);

    for (const auto kind : table.treatments) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& [block, runs] : grouped[kind]) {
            for (const auto* log : runs) {
                if (const auto ratio = pors(*log)) {
                    sum += *ratio;
                    ++count;
                }
            }
        }
        table.mean_pors.push_back(count ? sum / static_cast<double>(count)
                                        : std::numeric_limits<double>::quiet_NaN());
    }

    // Best set is known without any test: the lowest mean rank(s).
    const double lowest = *std::min_element(table.mean_ranks.begin(), table.mean_ranks.end());
    for (std::size_t t = 0; t < table.k(); ++t) {
        if (table.mean_ranks[t] == lowest) {
            table.best_set.push_back(table.treatments[t]);
        }
    }
    return table;
}

struct FriedmanResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Friedman chi-square over mean ranks:
/// 12N / (k(k+1)) * (sum_j R_j^2 - k(k+1)^2 / 4), with k - 1 degrees of freedom.
inline FriedmanResult friedman_test(const RankTable& table)
{
    const std::size_t k = table.k();
    const std::size_t blocks = table.blocks();
    if (k < 2 || blocks < 2) {
        throw std::invalid_argument("friedman_test: needs at least 2 treatments and 2 blocks");
    }
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(blocks);
    double sum_sq = 0.0;
    for (const double r : table.mean_ranks) {
        sum_sq += r * r;
    }
    double statistic = 12.0 * nd / (kd * (kd + 1.0)) * (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
    // Cancellation noise around an exact zero.
    if (std::abs(statistic) < 1e-12) {
        statistic = 0.0;
    }
    const boost::math::chi_squared_distribution<double> dist(kd - 1.0);
    const double p = statistic <= 0.0 ? 1.0 : boost::math::cdf(boost::math::complement(dist, statistic));
    return {statistic, p};
}

/// Hochberg step-up: with p-values sorted ascending p_(1..m), reject
/// H_(1..i) for the largest i with p_(i) <= alpha / (m - i + 1).
inline std::vector<bool> hochberg_reject(std::span<const double> p_values, double alpha)
{
    const std::size_t m = p_values.size();
    std::vector<bool> reject(m, false);
    if (m == 0 || !(alpha > 0.0)) {
        return reject;
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
    for (std::size_t i = m; i >= 1; --i) {
        if (p_values[order[i - 1]] <= alpha / static_cast<double>(m - i + 1)) {
            for (std::size_t r = 0; r < i; ++r) {
                reject[order[r]] = true;
            }
            break;
        }
    }
    return reject;
}

/// Two-sided normal tail probability of |z|.
inline double two_sided_normal_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

struct Significance {
    std::vector<BchmKind> best_set;
    std::vector<BchmKind> worse_set;
    std::vector<std::pair<BchmKind, BchmKind>> pairs;
    /// Unadjusted p-value of each treatment against the reference best (1 for itself).
    std::vector<double> p_values;
};

/// Best-versus-rest post-hoc comparison on mean ranks,
/// z = (R_a - R_best) / sqrt(k(k+1) / (6N)), Hochberg-adjusted. Runs only when
/// the Friedman test rejects at `alpha`.
inline Significance hochberg_posthoc(const RankTable& table, double alpha)
{
    Significance sig;
    const std::size_t k = table.k();
    const double lowest = *std::min_element(table.mean_ranks.begin(), table.mean_ranks.end());
    std::size_t reference = k;
    for (std::size_t t = 0; t < k; ++t) {
        if (table.mean_ranks[t] == lowest) {
            sig.best_set.push_back(table.treatments[t]);
            if (reference == k) {
                reference = t;
            }
        }
    }
    sig.p_values.assign(k, 1.0);
    if (!(alpha > 0.0) || k < 2 || table.blocks() < 2) {
        return sig;
    }
    if (friedman_test(table).p_value > alpha) {
        return sig;
    }
    const double se = std::sqrt(static_cast<double>(k * (k + 1)) / (6.0 * static_cast<double>(table.blocks())));
    std::vector<double> others;
    std::vector<std::size_t> other_index;
    for (std::size_t t = 0; t < k; ++t) {
        if (t == reference) {
            continue;
        }
        const double z = (table.mean_ranks[t] - table.mean_ranks[reference]) / se;
        sig.p_values[t] = two_sided_normal_p(z);
        others.push_back(sig.p_values[t]);
        other_index.push_back(t);
    }
    const auto reject = hochberg_reject(others, alpha);
    for (std::size_t i = 0; i < reject.size(); ++i) {
        const std::size_t t = other_index[i];
        if (reject[i] && table.mean_ranks[t] > lowest) {
            sig.worse_set.push_back(table.treatments[t]);
            sig.pairs.emplace_back(table.treatments[reference], table.treatments[t]);
        }
    }
    return sig;
}

/// Runs Friedman (when at least two blocks exist) and the post-hoc test and
/// stores the outcome in the table.
inline void apply_significance(RankTable& table, double alpha)
{
    if (table.blocks() >= 2 && table.k() >= 2) {
        const auto fr = friedman_test(table);
        table.friedman_statistic = fr.statistic;
        table.friedman_p = fr.p_value;
    }
    auto sig = hochberg_posthoc(table, alpha);
    table.best_set = std::move(sig.best_set);
    table.worse_set = std::move(sig.worse_set);
    table.significant_pairs = std::move(sig.pairs);
}

/// counts[group][bchm]: number of cells of that group where the BCHM is in
/// the best set. Group 0 of the result holds the totals.
using BestCounts = std::map<int, std::array<std::size_t, kAllBchms.size()>>;

inline BestCounts best_bchm_counts(std::span<const RankTable> tables)
{
    BestCounts counts;
    auto& total = counts[0];
    total.fill(0);
    for (const auto& table : tables) {
        auto [it, inserted] = counts.try_emplace(table.cell.group);
        if (inserted) {
            it->second.fill(0);
        }
        for (const auto kind : table.best_set) {
            ++it->second[static_cast<std::size_t>(kind)];
            ++total[static_cast<std::size_t>(kind)];
        }
    }
    return counts;
}

/// Precision targets f_opt + {10^1, ..., 10^-8}.
inline constexpr std::array<double, 10> kEcdfTargets{1e1, 1e0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};

struct EcdfPoint {
    double evals_over_n = 0.0;
    double proportion = 0.0;
};

struct EcdfCurve {
    std::vector<EcdfPoint> points;
};

/// Fixed-target ECDF: at each budget (evaluations / n) the proportion of
/// (run, target) pairs with best_f <= f_opt + target. One point per distinct
/// hitting time plus a final point at the largest budget used.
inline EcdfCurve compute_ecdf(std::span<const RunLog> logs)
{
    if (logs.empty()) {
        throw std::invalid_argument("compute_ecdf: no runs");
    }
    std::vector<double> hits;
    double last_x = 0.0;
    for (const auto& log : logs) {
        if (!log.f_opt) {
            throw std::invalid_argument("compute_ecdf: run " + log.config_id + "/" +
                                        std::string(to_string(log.function)) + " has no f_opt");
        }
        if (log.n == 0) {
            throw std::invalid_argument("compute_ecdf: run without dimension");
        }
        const double n = static_cast<double>(log.n);
        for (const double target : kEcdfTargets) {
            const double threshold = *log.f_opt + target;
            for (const auto& point : log.trajectory) {
                if (point.best <= threshold) {
                    hits.push_back(static_cast<double>(point.evaluations) / n);
                    break;
                }
            }
        }
        if (!log.trajectory.empty()) {
            last_x = std::max(last_x, static_cast<double>(log.trajectory.back().evaluations) / n);
        }
    }
    std::sort(hits.begin(), hits.end());
    const double total = static_cast<double>(logs.size() * kEcdfTargets.size());
    EcdfCurve curve;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        if (i + 1 < hits.size() && hits[i + 1] == hits[i]) {
            continue;
        }
        curve.points.push_back({hits[i], static_cast<double>(i + 1) / total});
    }
    const double final_proportion = static_cast<double>(hits.size()) / total;
    if (curve.points.empty() || curve.points.back().evals_over_n < last_x) {
        curve.points.push_back({last_x, final_proportion});
    }
    return curve;
}

} // namespace modde
