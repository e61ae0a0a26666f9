// modde: command-line front end for runs, sweeps and their analysis.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "modde/modde.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct Options {
    std::vector<std::string> mutations{"rand/1"};
    std::vector<std::string> crossovers{"bin"};
    std::vector<std::string> bchms{"projection"};
    std::vector<std::string> functions{"sphere"};
    std::string grid;
    std::string adaptation = "shade";
    double f = 0.5;
    double cr = 0.9;
    std::size_t memory_size = 100;
    std::size_t n = 30;
    std::size_t population = 100;
    std::uint64_t budget_mult = 10000;
    std::size_t max_generations = 0;
    std::size_t runs = 1;
    std::size_t instances = 1;
    std::uint64_t seed = 0;
    std::size_t workers = modde::default_workers();
    std::string outdir = "modde_out";
    std::string indir;
    std::string config;
    double alpha = 0.05;
    int group = 1;
    bool plan_only = false;
};

/// Splits comma-separated list entries.
std::vector<std::string> flatten(const std::vector<std::string>& values)
{
    std::vector<std::string> out;
    for (const auto& value : values) {
        std::size_t start = 0;
        while (start <= value.size()) {
            const auto comma = value.find(',', start);
            const auto piece = value.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (!piece.empty()) {
                out.push_back(piece);
            }
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
    }
    return out;
}

template <typename Enum, std::size_t N, typename Parse>
std::vector<Enum> parse_list(const std::vector<std::string>& raw, const std::array<Enum, N>& all, Parse parse)
{
    std::vector<Enum> out;
    for (const auto& tag : flatten(raw)) {
        if (tag == "all") {
            out.assign(all.begin(), all.end());
            return out;
        }
        out.push_back(parse(tag));
    }
    return out;
}

/// Turns the JSON config file into extra "--key value" arguments for every
/// key not already present on the command line.
std::vector<std::string> config_arguments(const std::string& path, const std::vector<std::string>& given)
{
    std::ifstream in(path);
    if (!in) {
        throw modde::ConfigError("cannot read config file " + path);
    }
    nlohmann::json config;
    try {
        config = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw modde::ConfigError("config file " + path + ": " + e.what());
    }
    if (!config.is_object()) {
        throw modde::ConfigError("config file " + path + " must hold a JSON object");
    }
    std::vector<std::string> extra;
    for (const auto& [raw_key, value] : config.items()) {
        std::string key = raw_key;
        std::replace(key.begin(), key.end(), '_', '-');
        const std::string flag = "--" + key;
        bool on_command_line = false;
        for (const auto& arg : given) {
            if (arg == flag || arg.rfind(flag + "=", 0) == 0) {
                on_command_line = true;
            }
        }
        if (on_command_line || key == "config") {
            continue;
        }
        if (value.is_boolean()) {
            if (value.get<bool>()) {
                extra.push_back(flag);
            }
            continue;
        }
        extra.push_back(flag);
        if (value.is_array()) {
            std::string joined;
            for (const auto& item : value) {
                joined += (joined.empty() ? "" : ",") + (item.is_string() ? item.get<std::string>() : item.dump());
            }
            extra.push_back(joined);
        } else {
            extra.push_back(value.is_string() ? value.get<std::string>() : value.dump());
        }
    }
    return extra;
}

void add_algorithm_options(CLI::App* cmd, Options& opt, bool multi)
{
    const char* many = multi ? " (comma list or 'all')" : "";
    cmd->add_option("--mutation,--mutations", opt.mutations, std::string("mutation tag") + many)->delimiter(',');
    cmd->add_option("--crossover,--crossovers", opt.crossovers, std::string("crossover tag: bin | exp") + many)
        ->delimiter(',');
    cmd->add_option("--bchm,--bchms", opt.bchms, std::string("boundary handling tag") + many)->delimiter(',');
    cmd->add_option("--function,--functions", opt.functions, std::string("function tag") + many)->delimiter(',');
    cmd->add_option("--adaptation", opt.adaptation, "shade | fixed");
    cmd->add_option("--F", opt.f, "scale factor in fixed mode");
    cmd->add_option("--Cr", opt.cr, "crossover rate in fixed mode");
    cmd->add_option("--H", opt.memory_size, "SHADE memory size");
    cmd->add_option("--n", opt.n, "problem dimension");
    cmd->add_option("--M", opt.population, "population size");
    cmd->add_option("--budget-mult", opt.budget_mult, "budget = n * budget-mult evaluations");
    cmd->add_option("--max-gen", opt.max_generations, "generation limit (0 = budget only)");
    cmd->add_option("--runs", opt.runs, "independent runs per function");
    cmd->add_option("--instances", opt.instances, "problem instances per function");
    cmd->add_option("--seed", opt.seed, "master seed");
    cmd->add_option("--outdir", opt.outdir, "output directory")->envname("MODDE_OUTDIR");
    cmd->add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--config", opt.config, "JSON file supplying any flag");
}

modde::DEConfig common_config(const Options& opt)
{
    modde::DEConfig cfg;
    cfg.adaptation.mode = modde::parse_adaptation(opt.adaptation);
    cfg.adaptation.f = opt.f;
    cfg.adaptation.cr = opt.cr;
    cfg.adaptation.memory_size = opt.memory_size;
    cfg.population_size = opt.population;
    cfg.budget_multiplier = opt.budget_mult;
    cfg.max_generations = opt.max_generations;
    cfg.runs = opt.runs;
    cfg.master_seed = opt.seed;
    return cfg;
}

modde::SweepGrid make_grid(const Options& opt, bool full)
{
    modde::SweepGrid grid;
    if (full) {
        grid.mutations.assign(modde::kAllMutations.begin(), modde::kAllMutations.end());
        grid.crossovers.assign(modde::kAllCrossovers.begin(), modde::kAllCrossovers.end());
        grid.bchms.assign(modde::kAllBchms.begin(), modde::kAllBchms.end());
    } else {
        grid.mutations = parse_list(opt.mutations, modde::kAllMutations, modde::parse_mutation);
        grid.crossovers = parse_list(opt.crossovers, modde::kAllCrossovers, modde::parse_crossover);
        grid.bchms = parse_list(opt.bchms, modde::kAllBchms, modde::parse_bchm);
    }
    grid.functions = parse_list(opt.functions, modde::kSurrogateFunctions, modde::parse_function);
    grid.dimension = opt.n;
    grid.instances = opt.instances;
    return grid;
}

void ensure_writable(const std::string& dir)
{
    std::error_code ec;
    modde::fs::create_directories(dir, ec);
    const auto probe = modde::fs::path(dir) / ".modde_write_probe";
    std::ofstream out(probe);
    if (ec || !out) {
        throw modde::ConfigError("output directory " + dir + " is not writable");
    }
    out.close();
    modde::fs::remove(probe, ec);
}

int execute_sweep(const Options& opt, bool single)
{
    if (!opt.grid.empty() && opt.grid != "full") {
        throw modde::ConfigError("unknown grid '" + opt.grid + "'; valid: full");
    }
    const auto grid = make_grid(opt, opt.grid == "full");
    if (single && (grid.mutations.size() != 1 || grid.crossovers.size() != 1 || grid.bchms.size() != 1 ||
                   grid.functions.size() != 1)) {
        throw modde::ConfigError("run takes exactly one mutation, crossover, bchm and function; use sweep");
    }
    const auto common = common_config(opt);
    const auto tasks = modde::plan_sweep(grid, common);
    const std::size_t configs = grid.mutations.size() * grid.crossovers.size() * grid.bchms.size();
    if (opt.plan_only) {
        std::cout << configs << " DE instances x " << grid.functions.size() << " functions x " << grid.instances
                  << " instances x " << common.runs << " runs = " << tasks.size() << " runs\n";
        return kExitOk;
    }
    ensure_writable(opt.outdir);
    const auto logs = modde::run_sweep(grid, common, opt.workers);
    modde::write_sweep(opt.outdir, logs);
    if (single) {
        for (const auto& log : logs) {
            const auto ratio = modde::pors(log);
            std::cout << "run " << log.run_index << ": final_best=" << modde::format_double(log.final_best)
                      << " pors=" << (ratio ? modde::format_double(*ratio) : "n/a") << " evals=" << log.evaluations_used
                      << "\n";
        }
    } else {
        std::cout << logs.size() << " runs over " << configs << " DE instances written to " << opt.outdir << "\n";
    }
    return kExitOk;
}

int execute_analyze(const Options& opt)
{
    if (opt.indir.empty()) {
        throw modde::ConfigError("--indir is required");
    }
    ensure_writable(opt.outdir);
    const auto logs = modde::load_sweep(opt.indir, false);
    const auto tables = modde::rank_all(logs, opt.alpha);
    modde::write_heatmaps(opt.outdir, tables);
    modde::write_counts(opt.outdir, modde::best_bchm_counts(tables));
    std::cout << tables.size() << " cells ranked; output in " << opt.outdir << "\n";
    return kExitOk;
}

int execute_ecdf(const Options& opt)
{
    if (opt.indir.empty()) {
        throw modde::ConfigError("--indir is required");
    }
    if (opt.group < 1 || opt.group > 5) {
        throw modde::ConfigError("--group must be in 1..5");
    }
    ensure_writable(opt.outdir);
    const auto logs = modde::load_sweep(opt.indir, true);
    const auto curves = modde::best_instance_curves(logs, opt.group, opt.alpha);
    modde::write_ecdf(opt.outdir, opt.group, curves);
    std::cout << curves.size() << " curves for group " << opt.group << " written to " << opt.outdir << "\n";
    return kExitOk;
}

void list_ops()
{
    auto section = [](std::string_view title, const auto& tags) {
        std::cout << title << " (" << tags.size() << "):\n";
        for (const auto tag : tags) {
            std::cout << "  " << tag << "\n";
        }
    };
    section("mutation", modde::kMutationTags);
    section("crossover", modde::kCrossoverTags);
    section("bchm", modde::kBchmTags);
    section("function", modde::kFunctionTags);
    section("adaptation", modde::kAdaptationTags);
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);

    // The config file is folded into argv so explicit flags take precedence.
    try {
        for (std::size_t i = 0; i + 1 < args.size(); ++i) {
            if (args[i] == "--config") {
                const auto extra = config_arguments(args[i + 1], args);
                args.insert(args.end(), extra.begin(), extra.end());
                break;
            }
        }
    } catch (const modde::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    Options opt;
    CLI::App app{"Modular differential evolution with boundary constraint handling"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run one DE configuration on one function");
    add_algorithm_options(run, opt, false);

    auto* sweep = app.add_subcommand("sweep", "run a grid of DE configurations");
    add_algorithm_options(sweep, opt, true);
    sweep->add_option("--grid", opt.grid, "'full' selects every mutation, crossover and bchm");
    sweep->add_flag("--plan-only", opt.plan_only, "print the run count without executing");

    auto* analyze = app.add_subcommand("analyze", "rank BCHMs per cell and write heatmap and count tables");
    analyze->add_option("--indir", opt.indir, "sweep output directory")->required();
    analyze->add_option("--outdir", opt.outdir, "output directory")->envname("MODDE_OUTDIR");
    analyze->add_option("--alpha", opt.alpha, "significance level");
    analyze->add_option("--config", opt.config, "JSON file supplying any flag");

    auto* ecdf = app.add_subcommand("ecdf", "fixed-target ECDFs of the best BCHM per cell");
    ecdf->add_option("--indir", opt.indir, "sweep output directory")->required();
    ecdf->add_option("--outdir", opt.outdir, "output directory")->envname("MODDE_OUTDIR");
    ecdf->add_option("--group", opt.group, "function group 1..5");
    ecdf->add_option("--alpha", opt.alpha, "significance level");
    ecdf->add_option("--config", opt.config, "JSON file supplying any flag");

    auto* list = app.add_subcommand("list-ops", "print every operator and function tag");

    std::vector<const char*> cargs{argv[0]};
    for (const auto& a : args) {
        cargs.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (list->parsed()) {
            list_ops();
            return kExitOk;
        }
        if (run->parsed()) {
            return execute_sweep(opt, true);
        }
        if (sweep->parsed()) {
            return execute_sweep(opt, false);
        }
        if (analyze->parsed()) {
            return execute_analyze(opt);
        }
        if (ecdf->parsed()) {
            return execute_ecdf(opt);
        }
    } catch (const modde::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
