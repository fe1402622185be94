#pragma once

/// Experiment orchestration behind the CLI subcommands: exhaustive search
/// sweeps, offline dataset collection, training runs and reward studies, the
/// learning-vs-regression benchmark, and the scenario weight sweep.

#include <atomic>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "vnfprof/agent.hpp"
#include "vnfprof/config.hpp"
#include "vnfprof/csv.hpp"
#include "vnfprof/envsim.hpp"
#include "vnfprof/metrics.hpp"
#include "vnfprof/offline.hpp"
#include "vnfprof/oracle.hpp"
#include "vnfprof/slbench.hpp"

namespace vnfprof {

namespace detail {

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers =
        std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n)
                    return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

inline std::string out_path(const ExperimentConfig& cfg, const std::string& file) {
    std::filesystem::create_directories(cfg.out_dir);
    return (std::filesystem::path(cfg.out_dir) / file).string();
}

} // namespace detail

struct CommandResult {
    std::vector<std::string> artifacts;
};

// ---------------------------------------------------------------------------
// oracle: exhaustive sweep, optimum and Pareto front

struct OracleSliceFilter {
    std::optional<double> vcpu;
    std::optional<double> mem;
    std::optional<double> lc;

    bool active() const { return vcpu || mem || lc; }

    bool matches(const ResourceVector& r) const {
        return (!vcpu || std::abs(r.vcpu - *vcpu) < 1e-9) &&
               (!mem || std::abs(r.mem - *mem) < 1e-9) &&
               (!lc || std::abs(r.lc - *lc) < 1e-9);
    }
};

inline OracleTable build_oracle_table(const ExperimentConfig& cfg, VnfKind kind,
                                      double input_rate, bool with_noise, int runs) {
    ExperimentConfig local = cfg;
    local.noise = with_noise;
    const std::uint64_t seed = substream_seed(cfg.seeds.front(), "oracle-env");
    Environment env(local.env_config_for(kind, seed, input_rate));
    const int effective_runs = with_noise ? std::max(30, runs) : runs;
    return exhaustive_search(env, input_rate, effective_runs,
                             substream_seed(cfg.seeds.front(), "oracle"));
}

inline CommandResult run_oracle(const ExperimentConfig& cfg,
                                const OracleSliceFilter& slice = {}) {
    CommandResult result;
    const VnfKind kind = cfg.vnf;
    const OracleTable table =
        build_oracle_table(cfg, kind, cfg.oracle_input, cfg.noise, cfg.oracle_runs);

    const std::string oracle_path =
        detail::out_path(cfg, std::string("oracle_") + vnf_name(kind) + ".csv");
    write_oracle_entries(oracle_path, table.entries);
    result.artifacts.push_back(oracle_path);

    const std::string pareto_path =
        detail::out_path(cfg, std::string("pareto_") + vnf_name(kind) + ".csv");
    write_oracle_entries(pareto_path, pareto_front(table));
    result.artifacts.push_back(pareto_path);

    if (slice.active()) {
        std::vector<OracleEntry> filtered;
        for (const OracleEntry& e : table.entries)
            if (slice.matches(e.resources))
                filtered.push_back(e);
        const std::string slice_path =
            detail::out_path(cfg, std::string("slice_") + vnf_name(kind) + ".csv");
        write_oracle_entries(slice_path, filtered);
        result.artifacts.push_back(slice_path);
    }

    const std::string manifest = detail::out_path(cfg, "oracle_manifest.txt");
    write_manifest(manifest, cfg, "oracle");
    result.artifacts.push_back(manifest);
    return result;
}

// ---------------------------------------------------------------------------
// offline: influence weighting and dataset collection

inline constexpr const char* kInfluenceHeader = "resource,weight";

inline CommandResult run_offline(const ExperimentConfig& cfg) {
    CommandResult result;
    const VnfKind kind = cfg.vnf;
    const double rate = cfg.input_rate_for(kind);
    Environment env(
        cfg.env_config_for(kind, substream_seed(cfg.seeds.front(), "offline-env"), rate));

    const InfluenceWeights weights = influence_weights(env, cfg.ir_params);
    const std::string weights_path =
        detail::out_path(cfg, std::string("influence_") + vnf_name(kind) + ".csv");
    {
        csv::Writer w(weights_path, kInfluenceHeader);
        for (Resource r : kResources)
            w.row({resource_name(r), csv::num(weights.get(r))});
    }
    result.artifacts.push_back(weights_path);

    Rng rng(cfg.seeds.front(), "offline");
    const auto dataset = collect_dataset(env, weights, cfg.offline_samples, rng,
                                         cfg.ir_params);
    const std::string dataset_path =
        detail::out_path(cfg, std::string("dataset_") + vnf_name(kind) + ".csv");
    write_dataset(dataset_path, dataset);
    result.artifacts.push_back(dataset_path);

    const std::string manifest = detail::out_path(cfg, "offline_manifest.txt");
    write_manifest(manifest, cfg, "offline");
    result.artifacts.push_back(manifest);
    return result;
}

// ---------------------------------------------------------------------------
// train: one weight vector, optionally a single-resource reward study

struct TrainOptions {
    /// When set, run the reward study for this resource: the other two are
    /// frozen at their standard study values and only this one may move.
    std::optional<Resource> study;
    /// Optional profiling dataset; its baseline prediction becomes the
    /// episode start allocation (the offline warm start).
    std::optional<std::string> warm_start_dataset;
};

/// Fixed complementary allocations of the single-resource reward studies.
inline ResourceVector study_frozen_allocation(Resource target) {
    switch (target) {
    case Resource::Vcpu: return {1.2, 1300.0, 600.0}; // vcpu varies
    case Resource::Mem: return {1.2, 1300.0, 600.0};  // mem varies
    case Resource::Lc: return {1.2, 1300.0, 600.0};   // lc varies
    }
    return {1.2, 1300.0, 600.0};
}

struct TrainSetup {
    AgentConfig agent;
    double input_rate = 0.0;
};

inline TrainSetup train_setup(const ExperimentConfig& cfg, VnfKind kind,
                              const TrainOptions& options) {
    TrainSetup setup;
    setup.agent = cfg.agent;
    setup.input_rate = cfg.input_rate_for(kind);

    if (options.study) {
        const Resource target = *options.study;
        setup.agent.active = {false, false, false};
        setup.agent.active[static_cast<int>(target)] = true;
        ResourceVector start = study_frozen_allocation(target);
        start.set(target, cfg.grid.bounds(target).median());
        setup.agent.initial_allocation = {start.vcpu, start.mem, start.lc};
        if (!cfg.input_rate)
            setup.input_rate = default_study_input_rate(kind);
    }
    return setup;
}

inline TrainResult run_training(const ExperimentConfig& cfg, VnfKind kind,
                                const TrainSetup& setup) {
    const EnvFactory factory = [&](std::uint64_t seed) {
        return Environment(cfg.env_config_for(kind, seed, setup.input_rate));
    };
    std::vector<std::uint64_t> run_seeds;
    run_seeds.reserve(cfg.seeds.size());
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
        run_seeds.push_back(substream_seed(cfg.seeds[i], "train", static_cast<int>(kind)));
    return train(factory, setup.agent, cfg.reward_config_for(kind), run_seeds);
}

inline CommandResult run_train(const ExperimentConfig& cfg, const TrainOptions& options = {}) {
    CommandResult result;
    const VnfKind kind = cfg.vnf;
    TrainSetup setup = train_setup(cfg, kind, options);

    if (options.warm_start_dataset) {
        const auto dataset = read_dataset(*options.warm_start_dataset);
        const BaselineModel baseline = fit_baseline(dataset, cfg.grid);
        const ResourceVector start =
            predict_baseline(baseline, setup.input_rate, cfg.targets);
        setup.agent.initial_allocation = {start.vcpu, start.mem, start.lc};
    }

    const TrainResult trained = run_training(cfg, kind, setup);

    const std::string trace_path =
        detail::out_path(cfg, std::string("trace_") + vnf_name(kind) + ".csv");
    write_trace(trace_path, trained.trace);
    result.artifacts.push_back(trace_path);

    const std::string q_path =
        detail::out_path(cfg, std::string("qtable_") + vnf_name(kind) + ".csv");
    write_qtables(q_path, trained.qtables, cfg.grid);
    result.artifacts.push_back(q_path);

    const std::string manifest = detail::out_path(cfg, "train_manifest.txt");
    write_manifest(manifest, cfg, "train");
    result.artifacts.push_back(manifest);
    return result;
}

// ---------------------------------------------------------------------------
// scenarios: the full weight sweep

struct ScenarioSweepResult {
    VnfKind kind;
    OracleEntry optimum;
    std::vector<ScenarioResult> rows;
};

inline ScenarioResult summarise_scenario(const TrainResult& trained,
                                         const WeightVector& weights,
                                         const OracleEntry& optimum,
                                         const ResourceGrid& grid, int episodes) {
    const std::size_t window = steady_window(static_cast<std::size_t>(episodes));
    std::vector<double> vcpu_pcts, mem_pcts, orlc_pcts, evc, emem, elc;
    std::vector<EpisodePoint> pooled;
    for (const auto& run : trained.trace) {
        const SteadyState s = steady_state_summary(run, window);
        vcpu_pcts.push_back(s.vcpu_pct());
        mem_pcts.push_back(s.mem_pct());
        orlc_pcts.push_back(s.or_lc_pct());
        evc.push_back(percentage_error(s.vcpu, optimum.resources.vcpu));
        emem.push_back(percentage_error(s.mem, optimum.resources.mem));
        elc.push_back(percentage_error(s.lc, optimum.resources.lc));
        pooled.insert(pooled.end(), run.end() - window, run.end());
    }
    auto mean_ci = [](const std::vector<double>& xs) -> std::pair<double, double> {
        if (xs.size() < 2)
            return {xs.front(), 0.0};
        return ci95(xs);
    };

    ScenarioResult row;
    row.weights = weights;
    row.vcpu_pct = mean_ci(vcpu_pcts).first;
    row.mem_pct = mean_ci(mem_pcts).first;
    row.or_lc_pct = mean_ci(orlc_pcts).first;
    std::tie(row.err_vcpu, row.err_vcpu_ci) = mean_ci(evc);
    std::tie(row.err_mem, row.err_mem_ci) = mean_ci(emem);
    std::tie(row.err_lc, row.err_lc_ci) = mean_ci(elc);
    row.steady_levels = steady_state_levels(pooled, pooled.size());
    return row;
}

inline std::vector<ScenarioSweepResult> sweep_scenarios(const ExperimentConfig& cfg) {
    struct Task {
        VnfKind kind;
        std::size_t weight_index;
    };
    std::vector<Task> tasks;
    std::vector<OracleEntry> optima(cfg.vnfs.size());
    for (std::size_t ki = 0; ki < cfg.vnfs.size(); ++ki) {
        const VnfKind kind = cfg.vnfs[ki];
        const double rate = cfg.input_rate_for(kind);
        const OracleTable table =
            build_oracle_table(cfg, kind, rate, cfg.noise, cfg.oracle_runs);
        optima[ki] = optimal_config(table);
        for (std::size_t wi = 0; wi < cfg.scenario_weight_list.size(); ++wi)
            tasks.push_back({kind, wi});
    }

    std::vector<ScenarioResult> rows(tasks.size());
    detail::parallel_for(tasks.size(), [&](std::size_t ti) {
        const Task& task = tasks[ti];
        const std::size_t ki = ti / cfg.scenario_weight_list.size();
        const double rate = cfg.input_rate_for(task.kind);

        AgentConfig agent = cfg.agent;
        agent.weights = cfg.scenario_weight_list[task.weight_index];

        const EnvFactory factory = [&](std::uint64_t seed) {
            return Environment(cfg.env_config_for(task.kind, seed, rate));
        };
        std::vector<std::uint64_t> run_seeds;
        for (std::uint64_t master : cfg.seeds)
            run_seeds.push_back(substream_seed(master, "scenario", ti));

        const TrainResult trained =
            train(factory, agent, cfg.reward_config_for(task.kind), run_seeds);
        rows[ti] = summarise_scenario(trained, agent.weights, optima[ki], cfg.grid,
                                      cfg.agent.episodes);
    });

    std::vector<ScenarioSweepResult> out;
    for (std::size_t ki = 0; ki < cfg.vnfs.size(); ++ki) {
        ScenarioSweepResult sweep;
        sweep.kind = cfg.vnfs[ki];
        sweep.optimum = optima[ki];
        for (std::size_t wi = 0; wi < cfg.scenario_weight_list.size(); ++wi)
            sweep.rows.push_back(rows[ki * cfg.scenario_weight_list.size() + wi]);
        out.push_back(std::move(sweep));
    }
    return out;
}

inline CommandResult run_scenarios(const ExperimentConfig& cfg) {
    CommandResult result;
    for (const ScenarioSweepResult& sweep : sweep_scenarios(cfg)) {
        const std::string path = detail::out_path(
            cfg, std::string("scenarios_") + vnf_name(sweep.kind) + ".csv");
        write_scenarios(path, sweep.rows);
        result.artifacts.push_back(path);
    }
    const std::string manifest = detail::out_path(cfg, "scenarios_manifest.txt");
    write_manifest(manifest, cfg, "scenarios");
    result.artifacts.push_back(manifest);
    return result;
}

// ---------------------------------------------------------------------------
// bench: online learning vs retrained regressors over a growing dataset

struct BenchSeries {
    VnfKind kind;
    std::vector<ErrorRow> rows;
    OracleEntry optimum;
};

namespace detail {

struct BenchSeedRun {
    // [landmark][resource]
    std::vector<std::array<double, 3>> rl_error;
    std::vector<std::array<double, 3>> mlp_error;
    std::vector<std::array<double, 3>> rf_error;
    std::vector<bool> skipped;
};

inline BenchSeedRun bench_one_seed(const ExperimentConfig& cfg, VnfKind kind,
                                   std::uint64_t master_seed,
                                   const OracleEntry& optimum,
                                   const InfluenceWeights& influence) {
    const double target_rate = cfg.input_rate_for(kind);
    const std::uint64_t run_seed = substream_seed(master_seed, "bench", static_cast<int>(kind));

    Environment env(cfg.env_config_for(kind, run_seed, target_rate));
    AgentConfig agent = cfg.agent;
    agent.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    agent.max_steps = cfg.bench_max_steps;

    QTableSet qset;
    TrainerState trainer;
    Rng rng(run_seed, "agent");

    // The profiling dataset grows by one weighted-random record per episode,
    // measured at its optimal input rate, while the agent learns online.
    Rng collect_rng(run_seed, "offline");
    const auto records =
        collect_dataset(env, influence, cfg.bench_episodes, collect_rng, cfg.ir_params);
    std::vector<LandmarkInput> stream;
    stream.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
        stream.push_back({static_cast<int>(i) + 1, records[i]});

    std::vector<EpisodePoint> trace;
    const double initial = cfg.input_initial;
    for (int e = 0; e < cfg.bench_episodes; ++e) {
        // Dynamic environment: the offered rate ramps toward the profiling
        // target over the first ramp_until episodes.
        const double frac =
            cfg.bench_ramp_until > 0
                ? std::min(1.0, static_cast<double>(e) / cfg.bench_ramp_until)
                : 1.0;
        const double rate = initial + (target_rate - initial) * frac;
        env.override_input_rate(rate);

        EpisodeStats ep = run_episode(env, qset, agent, cfg.reward_config_for(kind),
                                      trainer, rng);
        trace.push_back({ep.final_state.resources, ep.final_state.kpi.output_rate,
                         ep.steps, ep.converged});
    }

    const std::vector<double> query = {0.5 * (cfg.targets.cpu_util_lo + cfg.targets.cpu_util_hi),
                                       cfg.targets.mem_util_max, cfg.targets.latency_max,
                                       optimum.mean_kpi.output_rate};
    const auto predictions =
        landmark_retrain(stream, cfg.bench_landmarks, default_mlp_spec(kind),
                         default_rf_spec(kind), query, cfg.grid, run_seed);

    BenchSeedRun run;
    for (std::size_t li = 0; li < cfg.bench_landmarks.size(); ++li) {
        const int landmark = cfg.bench_landmarks[li];
        const LandmarkPrediction& pred = predictions[li];
        run.skipped.push_back(pred.skipped);
        if (pred.skipped) {
            run.rl_error.push_back({});
            run.mlp_error.push_back({});
            run.rf_error.push_back({});
            continue;
        }

        // Learner error: mean allocation over the trailing window.
        const int window = std::min(landmark, cfg.bench_window);
        ResourceVector mean_alloc;
        for (int e = landmark - window; e < landmark; ++e) {
            mean_alloc.vcpu += trace[e].resources.vcpu;
            mean_alloc.mem += trace[e].resources.mem;
            mean_alloc.lc += trace[e].resources.lc;
        }
        mean_alloc.vcpu /= window;
        mean_alloc.mem /= window;
        mean_alloc.lc /= window;

        auto errors = [&](const ResourceVector& alloc) -> std::array<double, 3> {
            return {percentage_error(alloc.vcpu, optimum.resources.vcpu),
                    percentage_error(alloc.mem, optimum.resources.mem),
                    percentage_error(alloc.lc, optimum.resources.lc)};
        };
        run.rl_error.push_back(errors(mean_alloc));
        run.mlp_error.push_back(errors(pred.mlp));
        run.rf_error.push_back(errors(pred.rf));
    }
    return run;
}

} // namespace detail

inline std::vector<BenchSeries> sweep_bench(const ExperimentConfig& cfg) {
    struct Task {
        std::size_t kind_index;
        std::size_t seed_index;
    };
    std::vector<Task> tasks;
    std::vector<OracleEntry> optima(cfg.vnfs.size());
    std::vector<InfluenceWeights> influences(cfg.vnfs.size());
    for (std::size_t ki = 0; ki < cfg.vnfs.size(); ++ki) {
        const VnfKind kind = cfg.vnfs[ki];
        const OracleTable table =
            build_oracle_table(cfg, kind, cfg.input_rate_for(kind), false, 1);
        optima[ki] = optimal_config(table);
        Environment probe_env(cfg.env_config_for(
            kind, substream_seed(cfg.seeds.front(), "bench-probe"), cfg.input_rate_for(kind)));
        influences[ki] = influence_weights(probe_env, cfg.ir_params);
        for (std::size_t si = 0; si < cfg.seeds.size(); ++si)
            tasks.push_back({ki, si});
    }

    std::vector<detail::BenchSeedRun> runs(tasks.size());
    detail::parallel_for(tasks.size(), [&](std::size_t ti) {
        const Task& t = tasks[ti];
        runs[ti] = detail::bench_one_seed(cfg, cfg.vnfs[t.kind_index],
                                          cfg.seeds[t.seed_index], optima[t.kind_index],
                                          influences[t.kind_index]);
    });

    std::vector<BenchSeries> out;
    const char* models[3] = {"rl", "mlp", "rf"};
    const char* resources[3] = {"vcpu", "mem", "lc"};
    for (std::size_t ki = 0; ki < cfg.vnfs.size(); ++ki) {
        BenchSeries series;
        series.kind = cfg.vnfs[ki];
        series.optimum = optima[ki];
        for (std::size_t li = 0; li < cfg.bench_landmarks.size(); ++li) {
            bool skipped = false;
            for (std::size_t si = 0; si < cfg.seeds.size(); ++si)
                skipped = skipped || runs[ki * cfg.seeds.size() + si].skipped[li];
            if (skipped)
                continue;
            for (int m = 0; m < 3; ++m) {
                for (int r = 0; r < 3; ++r) {
                    std::vector<double> xs;
                    for (std::size_t si = 0; si < cfg.seeds.size(); ++si) {
                        const auto& run = runs[ki * cfg.seeds.size() + si];
                        const auto& per_model = m == 0   ? run.rl_error
                                                : m == 1 ? run.mlp_error
                                                         : run.rf_error;
                        xs.push_back(per_model[li][r]);
                    }
                    ErrorRow row;
                    row.episode = cfg.bench_landmarks[li];
                    row.model = models[m];
                    row.resource = resources[r];
                    if (xs.size() < 2) {
                        row.error_pct = xs.front();
                        row.ci95 = 0.0;
                    } else {
                        std::tie(row.error_pct, row.ci95) = ci95(xs);
                    }
                    series.rows.push_back(row);
                }
            }
        }
        out.push_back(std::move(series));
    }
    return out;
}

inline CommandResult run_bench(const ExperimentConfig& cfg) {
    CommandResult result;
    for (const BenchSeries& series : sweep_bench(cfg)) {
        const std::string path = detail::out_path(
            cfg, std::string("errors_") + vnf_name(series.kind) + ".csv");
        write_errors(path, series.rows);
        result.artifacts.push_back(path);
    }
    const std::string manifest = detail::out_path(cfg, "bench_manifest.txt");
    write_manifest(manifest, cfg, "bench");
    result.artifacts.push_back(manifest);
    return result;
}

} // namespace vnfprof
