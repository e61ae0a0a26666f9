#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "modde/runner.hpp"

namespace modde {

namespace fs = std::filesystem;

/// Shortest round-trip decimal form of a double.
inline std::string format_double(double value)
{
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

inline double parse_double(std::string_view text)
{
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
        throw std::runtime_error("malformed number '" + std::string(text) + "'");
    }
    return value;
}

inline fs::path run_path(const fs::path& outdir, const RunLog& log, std::string_view extension)
{
    return outdir / log.config_id / function_dir(log.function, log.instance) /
           ("run" + std::to_string(log.run_index) + std::string(extension));
}

inline nlohmann::json run_summary(const RunLog& log)
{
    nlohmann::json j;
    j["config_id"] = log.config_id;
    j["mutation"] = std::string(to_string(log.mutation));
    j["crossover"] = std::string(to_string(log.crossover));
    j["bchm"] = std::string(to_string(log.bchm));
    j["adaptation"] = std::string(to_string(log.adaptation));
    j["function"] = std::string(to_string(log.function));
    j["instance"] = log.instance;
    j["n"] = log.n;
    j["run"] = log.run_index;
    j["seed"] = log.seed;
    j["final_best"] = log.final_best;
    j["f_opt"] = log.f_opt ? nlohmann::json(*log.f_opt) : nlohmann::json(nullptr);
    const auto ratio = pors(log);
    j["pors"] = ratio ? nlohmann::json(*ratio) : nlohmann::json(nullptr);
    j["pors_numerator"] = log.pors_numerator;
    j["pors_denominator"] = log.pors_denominator;
    j["evals_used"] = log.evaluations_used;
    j["budget"] = log.budget;
    j["generations"] = log.generations;
    return j;
}

inline RunLog log_from_summary(const nlohmann::json& j)
{
    RunLog log;
    log.config_id = j.at("config_id").get<std::string>();
    log.mutation = parse_mutation(j.at("mutation").get<std::string>());
    log.crossover = parse_crossover(j.at("crossover").get<std::string>());
    log.bchm = parse_bchm(j.at("bchm").get<std::string>());
    log.adaptation = parse_adaptation(j.value("adaptation", std::string("shade")));
    log.function = parse_function(j.at("function").get<std::string>());
    log.instance = j.value("instance", std::uint64_t{1});
    log.n = j.at("n").get<std::size_t>();
    log.run_index = j.at("run").get<std::size_t>();
    log.seed = j.at("seed").get<std::uint64_t>();
    log.final_best = j.at("final_best").get<double>();
    if (j.contains("f_opt") && !j["f_opt"].is_null()) {
        log.f_opt = j["f_opt"].get<double>();
    }
    log.pors_numerator = j.value("pors_numerator", std::uint64_t{0});
    log.pors_denominator = j.value("pors_denominator", std::uint64_t{0});
    log.evaluations_used = j.at("evals_used").get<std::uint64_t>();
    log.budget = j.value("budget", std::uint64_t{0});
    log.generations = j.value("generations", std::size_t{0});
    return log;
}

inline void write_text(const fs::path& path, const std::string& text)
{
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

inline std::string trajectory_csv(const RunLog& log)
{
    std::string text = "evals,best_f\n";
    for (const auto& point : log.trajectory) {
        text += std::to_string(point.evaluations);
        text += ',';
        text += format_double(point.best);
        text += '\n';
    }
    return text;
}

inline std::vector<TrajectoryPoint> parse_trajectory_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != "evals,best_f") {
        throw std::runtime_error("trajectory CSV: expected header 'evals,best_f'");
    }
    std::vector<TrajectoryPoint> points;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("trajectory CSV: malformed row '" + line + "'");
        }
        TrajectoryPoint p;
        p.evaluations = static_cast<std::uint64_t>(parse_double(std::string_view(line).substr(0, comma)));
        p.best = parse_double(std::string_view(line).substr(comma + 1));
        points.push_back(p);
    }
    return points;
}

/// Writes `<outdir>/<config_id>/<function>/run<k>.{csv,json}`.
inline void write_run_files(const fs::path& outdir, const RunLog& log)
{
    write_text(run_path(outdir, log, ".csv"), trajectory_csv(log));
    write_text(run_path(outdir, log, ".json"), run_summary(log).dump(2) + "\n");
}

/// Writes every run file plus `<outdir>/manifest.json` listing all summaries.
inline void write_sweep(const fs::path& outdir, const std::vector<RunLog>& logs)
{
    nlohmann::json manifest;
    manifest["runs"] = nlohmann::json::array();
    for (const auto& log : logs) {
        write_run_files(outdir, log);
        manifest["runs"].push_back(run_summary(log));
    }
    write_text(outdir / "manifest.json", manifest.dump(2) + "\n");
}

/// Reads a sweep directory back. Trajectories are loaded only on request.
inline std::vector<RunLog> load_sweep(const fs::path& indir, bool with_trajectories)
{
    std::ifstream in(indir / "manifest.json");
    if (!in) {
        throw std::runtime_error("cannot open " + (indir / "manifest.json").string());
    }
    const auto manifest = nlohmann::json::parse(in);
    std::vector<RunLog> logs;
    for (const auto& entry : manifest.at("runs")) {
        RunLog log = log_from_summary(entry);
        if (with_trajectories) {
            std::ifstream csv(run_path(indir, log, ".csv"));
            if (!csv) {
                throw std::runtime_error("missing trajectory " + run_path(indir, log, ".csv").string());
            }
            log.trajectory = parse_trajectory_csv(csv);
        }
        logs.push_back(std::move(log));
    }
    return logs;
}

} // namespace modde
