#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "modde/analysis.hpp"
#include "modde/io.hpp"

namespace modde {

/// Ranks every (mutation, crossover, group) cell present in `logs`. Runs on
/// the noise landscape (group 0) carry no optimum and are skipped.
inline std::vector<RankTable> rank_all(std::span<const RunLog> logs, double alpha)
{
    std::map<CellKey, std::vector<RunLog>> cells;
    for (const auto& log : logs) {
        const int group = function_group(log.function);
        if (group == 0) {
            continue;
        }
        cells[CellKey{log.mutation, log.crossover, group}].push_back(log);
    }
    std::vector<RankTable> tables;
    for (const auto& [cell, cell_logs] : cells) {
        RankTable table = compute_ranks(cell, cell_logs);
        apply_significance(table, alpha);
        tables.push_back(std::move(table));
    }
    return tables;
}

namespace detail {

inline std::string csv_number(double value) { return std::isnan(value) ? std::string() : format_double(value); }

inline bool contains(const std::vector<BchmKind>& set, BchmKind kind)
{
    return std::find(set.begin(), set.end(), kind) != set.end();
}

} // namespace detail

/// Per group g: ranks_group<g>.csv and pors_group<g>.csv (rows = BCHM,
/// columns = "<mutation>/<crossover>" cells), marks_group<g>.csv
/// (cell,bchm,mark with mark in {best, worse}) and friedman_group<g>.csv.
inline void write_heatmaps(const fs::path& outdir, std::span<const RankTable> tables)
{
    std::map<int, std::vector<const RankTable*>> by_group;
    for (const auto& table : tables) {
        by_group[table.cell.group].push_back(&table);
    }
    for (const auto& [group, group_tables] : by_group) {
        std::set<BchmKind> rows;
        for (const auto* table : group_tables) {
            rows.insert(table->treatments.begin(), table->treatments.end());
        }
        std::string header = "bchm";
        for (const auto* table : group_tables) {
            header += "," + table->cell.label();
        }
        std::string ranks = header + "\n";
        std::string pors_text = header + "\n";
        for (const auto kind : rows) {
            ranks += std::string(to_string(kind));
            pors_text += std::string(to_string(kind));
            for (const auto* table : group_tables) {
                const auto it = std::find(table->treatments.begin(), table->treatments.end(), kind);
                ranks += ',';
                pors_text += ',';
                if (it != table->treatments.end()) {
                    const auto t = static_cast<std::size_t>(it - table->treatments.begin());
                    ranks += detail::csv_number(table->mean_ranks[t]);
                    pors_text += detail::csv_number(table->mean_pors[t]);
                }
            }
            ranks += '\n';
            pors_text += '\n';
        }

        std::string marks = "cell,bchm,mark\n";
        std::string friedman = "cell,blocks,statistic,p_value\n";
        for (const auto* table : group_tables) {
            for (const auto kind : table->treatments) {
                if (detail::contains(table->best_set, kind)) {
                    marks += table->cell.label() + "," + std::string(to_string(kind)) + ",best\n";
                } else if (detail::contains(table->worse_set, kind)) {
                    marks += table->cell.label() + "," + std::string(to_string(kind)) + ",worse\n";
                }
            }
            friedman += table->cell.label() + "," + std::to_string(table->blocks()) + "," +
                        detail::csv_number(table->friedman_statistic) + "," + detail::csv_number(table->friedman_p) +
                        "\n";
        }
        const std::string suffix = "_group" + std::to_string(group) + ".csv";
        write_text(outdir / ("ranks" + suffix), ranks);
        write_text(outdir / ("pors" + suffix), pors_text);
        write_text(outdir / ("marks" + suffix), marks);
        write_text(outdir / ("friedman" + suffix), friedman);
    }
}

/// counts.csv: bchm,group1,...,group5,total.
inline void write_counts(const fs::path& outdir, const BestCounts& counts)
{
    std::string text = "bchm,group1,group2,group3,group4,group5,total\n";
    for (const auto kind : kAllBchms) {
        const auto index = static_cast<std::size_t>(kind);
        text += std::string(to_string(kind));
        for (int group = 1; group <= 5; ++group) {
            const auto it = counts.find(group);
            text += "," + std::to_string(it == counts.end() ? 0 : it->second[index]);
        }
        const auto total = counts.find(0);
        text += "," + std::to_string(total == counts.end() ? 0 : total->second[index]) + "\n";
    }
    write_text(outdir / "counts.csv", text);
}

inline std::string ecdf_csv(const EcdfCurve& curve)
{
    std::string text = "evals_over_n,proportion\n";
    for (const auto& p : curve.points) {
        text += format_double(p.evals_over_n) + "," + format_double(p.proportion) + "\n";
    }
    return text;
}

struct BestInstanceCurve {
    CellKey cell;
    BchmKind bchm = BchmKind::Resampling;
    EcdfCurve curve;
};

/// For every (mutation, crossover) cell of `group`, the ECDF of the best
/// ranked BCHM; ties resolve to the first BCHM in catalog order.
inline std::vector<BestInstanceCurve> best_instance_curves(std::span<const RunLog> logs, int group, double alpha)
{
    std::vector<RunLog> group_logs;
    for (const auto& log : logs) {
        if (function_group(log.function) == group) {
            group_logs.push_back(log);
        }
    }
    std::vector<BestInstanceCurve> curves;
    for (const auto& table : rank_all(group_logs, alpha)) {
        const BchmKind best = *std::min_element(table.best_set.begin(), table.best_set.end());
        std::vector<RunLog> selected;
        for (const auto& log : group_logs) {
            if (log.mutation == table.cell.mutation && log.crossover == table.cell.crossover && log.bchm == best) {
                selected.push_back(log);
            }
        }
        curves.push_back({table.cell, best, compute_ecdf(selected)});
    }
    return curves;
}

/// Writes ecdf_group<g>/<mutation>_<crossover>.csv per curve and an
/// index.csv (mutation,crossover,bchm,file).
inline void write_ecdf(const fs::path& outdir, int group, const std::vector<BestInstanceCurve>& curves)
{
    const fs::path dir = outdir / ("ecdf_group" + std::to_string(group));
    std::string index = "mutation,crossover,bchm,file\n";
    for (const auto& c : curves) {
        const std::string file =
            detail::path_safe(to_string(c.cell.mutation)) + "_" + std::string(to_string(c.cell.crossover)) + ".csv";
        write_text(dir / file, ecdf_csv(c.curve));
        index += std::string(to_string(c.cell.mutation)) + "," + std::string(to_string(c.cell.crossover)) + "," +
                 std::string(to_string(c.bchm)) + "," + file + "\n";
    }
    write_text(dir / "index.csv", index);
}

} // namespace modde
