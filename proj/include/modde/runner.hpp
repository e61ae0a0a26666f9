#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "modde/adaptation.hpp"
#include "modde/bchm.hpp"
#include "modde/core.hpp"
#include "modde/crossover.hpp"
#include "modde/mutation.hpp"
#include "modde/problems.hpp"

namespace modde {

struct AdaptationConfig {
    AdaptationMode mode = AdaptationMode::Shade;
    /// Constants used in fixed mode.
    double f = 0.5;
    double cr = 0.9;
    /// Success-history memory size in SHADE mode.
    std::size_t memory_size = 100;
};

struct DEConfig {
    MutationStrategy mutation = MutationStrategy::Rand1;
    CrossoverKind crossover = CrossoverKind::Binomial;
    BchmKind bchm = BchmKind::Projection;
    AdaptationConfig adaptation;
    std::size_t population_size = 100;
    /// Budget is n * budget_multiplier evaluations.
    std::uint64_t budget_multiplier = 10000;
    /// Hard generation limit; 0 derives 10 * ceil(budget / M), which only
    /// matters when penalized trials leave the budget untouched.
    std::size_t max_generations = 0;
    std::size_t runs = 1;
    std::uint64_t master_seed = 0;

    /// "<mutation>_<crossover>_<bchm>" with '/' replaced by '-'.
    std::string id() const
    {
        return detail::path_safe(to_string(mutation)) + "_" + std::string(to_string(crossover)) + "_" +
               std::string(to_string(bchm));
    }

    void validate() const
    {
        if (population_size < min_population(mutation)) {
            throw ConfigError("population size " + std::to_string(population_size) + " too small for mutation " +
                              std::string(to_string(mutation)) + " (needs " +
                              std::to_string(min_population(mutation)) + ")");
        }
        if (budget_multiplier < 1) {
            throw ConfigError("budget multiplier must be at least 1");
        }
        if (runs < 1) {
            throw ConfigError("runs must be at least 1");
        }
        if (adaptation.mode == AdaptationMode::Fixed) {
            if (!(adaptation.f > 0.0)) {
                throw ConfigError("fixed F must be positive");
            }
            if (!(adaptation.cr >= 0.0 && adaptation.cr <= 1.0)) {
                throw ConfigError("fixed Cr must lie in [0, 1]");
            }
        } else if (adaptation.memory_size < 1) {
            throw ConfigError("memory size H must be at least 1");
        }
    }
};

struct TrajectoryPoint {
    std::uint64_t evaluations = 0;
    double best = 0.0;

    bool operator==(const TrajectoryPoint&) const = default;
};

struct RunLog {
    std::string config_id;
    MutationStrategy mutation = MutationStrategy::Rand1;
    CrossoverKind crossover = CrossoverKind::Binomial;
    BchmKind bchm = BchmKind::Projection;
    AdaptationMode adaptation = AdaptationMode::Shade;
    FunctionId function = FunctionId::Sphere;
    std::uint64_t instance = 1;
    std::size_t n = 0;
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
    /// One point per improvement of the best-so-far value, plus the final point.
    std::vector<TrajectoryPoint> trajectory;
    double final_best = 0.0;
    std::optional<double> f_opt;
    std::uint64_t pors_numerator = 0;
    std::uint64_t pors_denominator = 0;
    std::uint64_t evaluations_used = 0;
    std::uint64_t budget = 0;
    std::size_t generations = 0;
    /// Objective evaluations performed on points outside the search space.
    std::uint64_t infeasible_evaluations = 0;
    double wall_time_seconds = 0.0;
};

/// Fraction of generated candidates that were repaired or penalized; empty
/// when no candidate was generated.
inline std::optional<double> pors(const RunLog& log)
{
    if (log.pors_denominator == 0) {
        return std::nullopt;
    }
    return static_cast<double>(log.pors_numerator) / static_cast<double>(log.pors_denominator);
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Per-run seed: splitmix64 chained over (master seed, FNV-1a(config id),
/// FNV-1a(function tag), instance, run index).
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view config_id, std::string_view function,
                                 std::uint64_t instance, std::uint64_t run_index)
{
    std::uint64_t h = detail::splitmix64(master_seed);
    h = detail::splitmix64(h ^ fnv1a(config_id));
    h = detail::splitmix64(h ^ fnv1a(function));
    h = detail::splitmix64(h ^ instance);
    h = detail::splitmix64(h ^ run_index);
    return h;
}

inline std::size_t generation_cap(const DEConfig& cfg, std::uint64_t budget)
{
    if (cfg.max_generations > 0) {
        return cfg.max_generations;
    }
    const std::uint64_t m = cfg.population_size;
    return static_cast<std::size_t>(10 * ((budget + m - 1) / m));
}

/// One DE run: evaluated initialization, then generations of
/// (parameters, mutation + bound handling, crossover, evaluation) for every
/// member followed by batch selection and memory update, until the budget or
/// the generation cap is reached.
inline RunLog run_single(const DEConfig& cfg, const ProblemInstance& inst, std::size_t run_index)
{
    cfg.validate();
    const std::uint64_t budget_size = static_cast<std::uint64_t>(inst.n) * cfg.budget_multiplier;
    if (budget_size < cfg.population_size) {
        throw ConfigError("budget of " + std::to_string(budget_size) +
                          " evaluations cannot cover the initial population");
    }
    const auto started = std::chrono::steady_clock::now();

    RunLog log;
    log.config_id = cfg.id();
    log.mutation = cfg.mutation;
    log.crossover = cfg.crossover;
    log.bchm = cfg.bchm;
    log.adaptation = cfg.adaptation.mode;
    log.function = inst.id;
    log.instance = inst.instance_seed;
    log.n = inst.n;
    log.run_index = run_index;
    log.seed = derive_seed(cfg.master_seed, log.config_id, to_string(inst.id), inst.instance_seed, run_index);
    log.budget = budget_size;
    if (inst.has_optimum()) {
        log.f_opt = inst.f_opt;
    }

    const SearchSpace& space = inst.space;
    const std::size_t m = cfg.population_size;
    const bool shade = cfg.adaptation.mode == AdaptationMode::Shade;
    Rng rng(log.seed);
    Budget budget(budget_size);
    double best = kPenalty;

    auto evaluate_point = [&](const Vector& x) {
        if (!space.contains(x)) {
            ++log.infeasible_evaluations;
        }
        const double value = evaluate(inst, x, budget, rng);
        if (value < best) {
            best = value;
            log.trajectory.push_back({budget.used(), best});
        }
        return value;
    };

    Population pop = initialize_population(space, m, rng);
    for (auto& member : pop.members) {
        member.fitness = evaluate_point(member.x);
    }

    ParamMemory memory(shade ? cfg.adaptation.memory_size : 1);
    const std::size_t cap = generation_cap(cfg, budget_size);
    std::vector<Individual> trials;
    std::vector<ControlParams> params;
    std::vector<SuccessRecord> successes;
    trials.reserve(m);
    params.reserve(m);

    while (!budget.exhausted() && pop.generation < cap) {
        trials.clear();
        params.clear();
        for (std::size_t i = 0; i < m && !budget.exhausted(); ++i) {
            const ControlParams p =
                shade ? sample_parameters(memory, rng) : ControlParams{cfg.adaptation.f, cfg.adaptation.cr};
            const Vector& target = pop[i].x;

            Vector donor;
            bool repaired = false;
            if (cfg.bchm == BchmKind::Resampling) {
                auto guarded = resample_guard(cfg.mutation, pop, i, p.f, space, rng);
                donor = std::move(guarded.outcome.donor);
                repaired = guarded.repaired;
            } else if (cfg.bchm == BchmKind::DeathPenalty) {
                donor = mutate(cfg.mutation, pop, i, p.f, rng).donor;
            } else {
                const auto outcome = mutate(cfg.mutation, pop, i, p.f, rng);
                auto report = repair(cfg.bchm, RepairContext{outcome.donor, outcome.base, target, space, rng});
                donor = std::move(report.result);
                repaired = report.repaired;
            }

            Individual trial;
            trial.x = crossover(cfg.crossover, target, donor, p.cr, rng);
            ++log.pors_denominator;
            if (cfg.bchm == BchmKind::DeathPenalty) {
                repaired = death_penalty_check(trial.x, space).penalized;
                trial.fitness = repaired ? kPenalty : evaluate_point(trial.x);
            } else {
                trial.fitness = evaluate_point(trial.x);
            }
            if (repaired) {
                ++log.pors_numerator;
            }
            trials.push_back(std::move(trial));
            params.push_back(p);
        }

        successes.clear();
        for (std::size_t i = 0; i < trials.size(); ++i) {
            if (trials[i].fitness < pop[i].fitness) {
                successes.push_back({params[i].f, params[i].cr, pop[i].fitness - trials[i].fitness});
                pop[i] = std::move(trials[i]);
            }
        }
        // A generation cut short by the budget does not update the memory.
        if (shade && trials.size() == m) {
            memory = update_memory(std::move(memory), successes);
        }
        ++pop.generation;
    }

    if (log.trajectory.empty() || log.trajectory.back().evaluations != budget.used()) {
        log.trajectory.push_back({budget.used(), best});
    }
    log.final_best = best;
    log.evaluations_used = budget.used();
    log.generations = pop.generation;
    log.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return log;
}

/// Directory name of a (function, instance) pair: the tag for instance 1,
/// "<tag>-i<k>" otherwise.
inline std::string function_dir(FunctionId function, std::uint64_t instance)
{
    std::string name(to_string(function));
    if (instance != 1) {
        name += "-i" + std::to_string(instance);
    }
    return name;
}

struct SweepGrid {
    std::vector<MutationStrategy> mutations;
    std::vector<CrossoverKind> crossovers;
    std::vector<BchmKind> bchms;
    std::vector<FunctionId> functions;
    std::size_t dimension = 30;
    /// Problem instances per function, numbered 1..instances.
    std::size_t instances = 1;
};

struct SweepTask {
    DEConfig config;
    FunctionId function = FunctionId::Sphere;
    std::uint64_t instance = 1;
    std::size_t run_index = 0;
};

/// Expands the grid into tasks, ordered by mutation, crossover, bchm,
/// function, instance, run. Every cell is validated before anything runs.
inline std::vector<SweepTask> plan_sweep(const SweepGrid& grid, const DEConfig& common)
{
    if (grid.mutations.empty() || grid.crossovers.empty() || grid.bchms.empty() || grid.functions.empty()) {
        throw ConfigError("sweep grid must contain at least one mutation, crossover, bchm and function");
    }
    if (grid.instances < 1) {
        throw ConfigError("instances must be at least 1");
    }
    if (grid.dimension < 2) {
        throw ConfigError("problem dimension must be at least 2");
    }
    std::vector<SweepTask> tasks;
    tasks.reserve(grid.mutations.size() * grid.crossovers.size() * grid.bchms.size() * grid.functions.size() *
                  grid.instances * common.runs);
    for (const auto mutation : grid.mutations) {
        for (const auto cx : grid.crossovers) {
            for (const auto bchm : grid.bchms) {
                DEConfig cfg = common;
                cfg.mutation = mutation;
                cfg.crossover = cx;
                cfg.bchm = bchm;
                try {
                    cfg.validate();
                    if (grid.dimension * cfg.budget_multiplier < cfg.population_size) {
                        throw ConfigError("budget cannot cover the initial population");
                    }
                } catch (const ConfigError& e) {
                    throw ConfigError("invalid sweep cell (" + std::string(to_string(mutation)) + ", " +
                                      std::string(to_string(cx)) + ", " + std::string(to_string(bchm)) +
                                      "): " + e.what());
                }
                for (const auto function : grid.functions) {
                    for (std::uint64_t inst = 1; inst <= grid.instances; ++inst) {
                        for (std::size_t run = 0; run < common.runs; ++run) {
                            tasks.push_back({cfg, function, inst, run});
                        }
                    }
                }
            }
        }
    }
    return tasks;
}

inline std::size_t default_workers()
{
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs every task of the grid on `workers` threads. The result is in plan
/// order and does not depend on the worker count.
inline std::vector<RunLog> run_sweep(const SweepGrid& grid, const DEConfig& common, std::size_t workers)
{
    const auto tasks = plan_sweep(grid, common);

    std::map<std::pair<FunctionId, std::uint64_t>, ProblemInstance> instances;
    for (const auto function : grid.functions) {
        for (std::uint64_t inst = 1; inst <= grid.instances; ++inst) {
            instances.emplace(std::pair{function, inst}, make_instance(function, grid.dimension, inst));
        }
    }

    std::vector<RunLog> logs(tasks.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t k = next.fetch_add(1); k < tasks.size(); k = next.fetch_add(1)) {
            try {
                const auto& task = tasks[k];
                logs[k] = run_single(task.config, instances.at({task.function, task.instance}), task.run_index);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(tasks.size());
            }
        }
    };

    const std::size_t count = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, tasks.size()));
    {
        std::vector<std::jthread> pool;
        pool.reserve(count);
        for (std::size_t w = 0; w < count; ++w) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return logs;
}

} // namespace modde
