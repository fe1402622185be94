#pragma once

/// Declarative experiment configuration: a flat sectioned key-value file
/// with full defaults, plus the run manifest that makes every artifact
/// reproducible. A manifest is itself a loadable config file.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vnfprof/agent.hpp"
#include "vnfprof/domain.hpp"
#include "vnfprof/envsim.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/metrics.hpp"
#include "vnfprof/rng.hpp"
#include "vnfprof/slbench.hpp"
#include "vnfprof/version.hpp"

namespace vnfprof {

struct ExperimentConfig {
    // [experiment]
    VnfKind vnf = VnfKind::SnortInline;
    std::vector<VnfKind> vnfs = {VnfKind::SnortInline, VnfKind::SnortPassive, VnfKind::VFw};
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    std::string out_dir = "results";
    bool noise = true;

    // [resources] / [kpi]
    ResourceGrid grid;
    KpiTargets targets;

    // [rewards] — absent values fall back to the per-VNF tuned defaults
    std::optional<double> beta_cpu;
    std::optional<double> beta_mem;
    std::optional<double> beta_lc;

    // [agent] + [weights]
    AgentConfig agent;

    // [env]
    std::optional<double> input_rate; // per-VNF default when absent
    double input_initial = 50.0;
    double input_step_increase = 0.0;
    double input_max = 800.0;
    double noise_std = 0.03;

    // [oracle]
    int oracle_runs = 30;
    double oracle_input = 800.0;

    // [offline]
    std::size_t offline_samples = 300;
    IrSearchParams ir_params;

    // [bench]
    int bench_episodes = 300;
    std::vector<int> bench_landmarks = {25,  50,  75,  100, 125, 150,
                                        175, 200, 225, 250, 275, 300};
    int bench_ramp_until = 100;
    int bench_window = 25;
    int bench_max_steps = 1500;

    // [scenarios]
    std::vector<WeightVector> scenario_weight_list = scenario_weights();

    void validate() const {
        grid.validate();
        targets.validate();
        agent.validate();
        if (seeds.empty())
            throw ValidationError("experiment: seed list must be non-empty");
        for (auto b : {beta_cpu, beta_mem, beta_lc})
            if (b && !(*b > 0.0))
                throw ValidationError("rewards: beta must be positive");
        if (!(input_initial > 0.0))
            throw ValidationError("env: input_initial must be positive");
        if (input_rate && !(*input_rate > 0.0))
            throw ValidationError("env: input_rate must be positive");
        if (oracle_runs < 1)
            throw ValidationError("oracle: runs_per_point must be >= 1");
        if (bench_episodes <= 0 || bench_window <= 0 || bench_max_steps <= 0)
            throw ValidationError("bench: episode counts must be positive");
        for (const WeightVector& w : scenario_weight_list)
            w.validate();
    }

    double input_rate_for(VnfKind kind) const {
        return input_rate ? *input_rate : default_input_rate(kind);
    }

    RewardConfig reward_config_for(VnfKind kind) const {
        RewardConfig rc = default_reward_config(kind, targets);
        if (beta_cpu) rc.beta_cpu = *beta_cpu;
        if (beta_mem) rc.beta_mem = *beta_mem;
        if (beta_lc) rc.beta_lc = *beta_lc;
        return rc;
    }

    VnfModel model_for(VnfKind kind) const {
        VnfModel m = default_model(kind);
        m.noise_std = noise ? noise_std : 0.0;
        return m;
    }

    EnvConfig env_config_for(VnfKind kind, std::uint64_t seed, double rate) const {
        EnvConfig ec;
        ec.model = model_for(kind);
        ec.grid = grid;
        ec.targets = targets;
        ec.seed = seed;
        ec.schedule = InputSchedule::constant(rate);
        return ec;
    }
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ValidationError(where + ": expected a number, got '" + v + "'");
    }
}

inline long parse_long(const std::string& v, const std::string& where) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ValidationError(where + ": expected an integer, got '" + v + "'");
    }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

} // namespace detail

/// Parsed key-value view of a config file: section.key -> value.
struct ConfigMap {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) > 0; }

    const std::string& get(const std::string& key) const { return values.at(key); }
};

inline ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open config file " + path);
    ConfigMap map;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = path + ":" + std::to_string(lineno);
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ParseError(where + ": unterminated section header");
            section = detail::trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ParseError(where + ": empty section name");
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError(where + ": expected 'key = value'");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty())
            throw ParseError(where + ": empty key");
        if (section.empty())
            throw ParseError(where + ": key outside any [section]");
        map.values[section + "." + key] = value;
    }
    return map;
}

namespace detail {

inline void apply_config(ExperimentConfig& cfg, const ConfigMap& map) {
    auto num = [&](const std::string& key, double& target) {
        if (map.has(key))
            target = parse_double(map.get(key), key);
    };
    auto opt_num = [&](const std::string& key, std::optional<double>& target) {
        if (map.has(key))
            target = parse_double(map.get(key), key);
    };
    auto integer = [&](const std::string& key, int& target) {
        if (map.has(key))
            target = static_cast<int>(parse_long(map.get(key), key));
    };

    if (map.has("experiment.vnf"))
        cfg.vnf = vnf_from_name(map.get("experiment.vnf"));
    if (map.has("experiment.vnfs")) {
        cfg.vnfs.clear();
        for (const std::string& name : split(map.get("experiment.vnfs"), ','))
            cfg.vnfs.push_back(vnf_from_name(name));
    }
    if (map.has("experiment.seeds")) {
        cfg.seeds.clear();
        for (const std::string& s : split(map.get("experiment.seeds"), ','))
            cfg.seeds.push_back(
                static_cast<std::uint64_t>(parse_long(s, "experiment.seeds")));
    }
    if (map.has("experiment.out"))
        cfg.out_dir = map.get("experiment.out");
    if (map.has("experiment.noise")) {
        const std::string& v = map.get("experiment.noise");
        if (v != "on" && v != "off")
            throw ValidationError("experiment.noise: expected 'on' or 'off'");
        cfg.noise = v == "on";
    }

    num("resources.vcpu_min", cfg.grid.vcpu.min);
    num("resources.vcpu_max", cfg.grid.vcpu.max);
    num("resources.vcpu_step", cfg.grid.vcpu.step);
    num("resources.mem_min", cfg.grid.mem.min);
    num("resources.mem_max", cfg.grid.mem.max);
    num("resources.mem_step", cfg.grid.mem.step);
    num("resources.lc_min", cfg.grid.lc.min);
    num("resources.lc_max", cfg.grid.lc.max);
    num("resources.lc_step", cfg.grid.lc.step);

    num("kpi.cpu_util_lo", cfg.targets.cpu_util_lo);
    num("kpi.cpu_util_hi", cfg.targets.cpu_util_hi);
    num("kpi.mem_util_max", cfg.targets.mem_util_max);
    num("kpi.latency_max_ms", cfg.targets.latency_max);

    opt_num("rewards.beta_cpu", cfg.beta_cpu);
    opt_num("rewards.beta_mem", cfg.beta_mem);
    opt_num("rewards.beta_lc", cfg.beta_lc);

    num("agent.alpha", cfg.agent.alpha);
    num("agent.gamma", cfg.agent.gamma);
    num("agent.epsilon_decay", cfg.agent.epsilon_decay);
    num("agent.epsilon_min", cfg.agent.epsilon_min);
    integer("agent.max_steps", cfg.agent.max_steps);
    num("agent.convergence_eps", cfg.agent.convergence_eps);
    integer("agent.convergence_window", cfg.agent.convergence_window);
    integer("agent.episodes", cfg.agent.episodes);
    integer("agent.breach_reset_window", cfg.agent.breach_reset_window);

    num("weights.w_cpu", cfg.agent.weights.w_cpu);
    num("weights.w_mem", cfg.agent.weights.w_mem);
    num("weights.w_lc", cfg.agent.weights.w_lc);

    opt_num("env.input_rate", cfg.input_rate);
    num("env.input_initial", cfg.input_initial);
    num("env.input_step_increase", cfg.input_step_increase);
    num("env.input_max", cfg.input_max);
    num("env.noise_std", cfg.noise_std);

    integer("oracle.runs_per_point", cfg.oracle_runs);
    num("oracle.input_rate", cfg.oracle_input);

    if (map.has("offline.samples"))
        cfg.offline_samples =
            static_cast<std::size_t>(parse_long(map.get("offline.samples"), "offline.samples"));
    num("offline.ir_lo", cfg.ir_params.ir_lo);
    num("offline.ir_hi", cfg.ir_params.ir_hi);
    num("offline.resolution", cfg.ir_params.resolution);

    integer("bench.episodes", cfg.bench_episodes);
    integer("bench.ramp_until_episode", cfg.bench_ramp_until);
    integer("bench.window", cfg.bench_window);
    integer("bench.max_steps", cfg.bench_max_steps);
    if (map.has("bench.landmarks")) {
        cfg.bench_landmarks.clear();
        for (const std::string& s : split(map.get("bench.landmarks"), ','))
            cfg.bench_landmarks.push_back(
                static_cast<int>(parse_long(s, "bench.landmarks")));
    }

    if (map.has("scenarios.weights")) {
        cfg.scenario_weight_list.clear();
        for (const std::string& triple : split(map.get("scenarios.weights"), ';')) {
            const auto parts = split(triple, ',');
            if (parts.size() != 3)
                throw ValidationError("scenarios.weights: expected w_cpu,w_mem,w_lc triples");
            cfg.scenario_weight_list.push_back(
                {parse_double(parts[0], "scenarios.weights"),
                 parse_double(parts[1], "scenarios.weights"),
                 parse_double(parts[2], "scenarios.weights")});
        }
    }
}

inline const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys = {
        "experiment.vnf", "experiment.vnfs", "experiment.seeds", "experiment.out",
        "experiment.noise", "resources.vcpu_min", "resources.vcpu_max",
        "resources.vcpu_step", "resources.mem_min", "resources.mem_max",
        "resources.mem_step", "resources.lc_min", "resources.lc_max", "resources.lc_step",
        "kpi.cpu_util_lo", "kpi.cpu_util_hi", "kpi.mem_util_max", "kpi.latency_max_ms",
        "rewards.beta_cpu", "rewards.beta_mem", "rewards.beta_lc", "agent.alpha",
        "agent.gamma", "agent.epsilon_decay", "agent.epsilon_min", "agent.max_steps",
        "agent.convergence_eps", "agent.convergence_window", "agent.episodes",
        "agent.breach_reset_window", "weights.w_cpu", "weights.w_mem", "weights.w_lc",
        "env.input_rate", "env.input_initial", "env.input_step_increase", "env.input_max",
        "env.noise_std", "oracle.runs_per_point", "oracle.input_rate", "offline.samples",
        "offline.ir_lo", "offline.ir_hi", "offline.resolution", "bench.episodes",
        "bench.landmarks", "bench.ramp_until_episode", "bench.window", "bench.max_steps",
        "scenarios.weights",
    };
    return keys;
}

} // namespace detail

/// Load, default-fill and validate a config file. Keys from the [manifest]
/// section are informational and ignored here.
inline ExperimentConfig load_config(const std::string& path) {
    const ConfigMap map = parse_config_file(path);
    const auto& known = detail::known_config_keys();
    for (const auto& [key, _] : map.values) {
        if (key.rfind("manifest.", 0) == 0)
            continue;
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ValidationError(path + ": unknown config key '" + key + "'");
    }
    ExperimentConfig cfg;
    detail::apply_config(cfg, map);
    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------------------
// Canonical serialization, hashing, manifests

inline std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return std::string(buf);
    };

    out << "[experiment]\n";
    out << "vnf = " << vnf_name(cfg.vnf) << "\n";
    out << "vnfs = ";
    for (std::size_t i = 0; i < cfg.vnfs.size(); ++i)
        out << (i ? "," : "") << vnf_name(cfg.vnfs[i]);
    out << "\n";
    out << "seeds = ";
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
        out << (i ? "," : "") << cfg.seeds[i];
    out << "\n";
    out << "out = " << cfg.out_dir << "\n";
    out << "noise = " << (cfg.noise ? "on" : "off") << "\n";

    out << "[resources]\n";
    out << "vcpu_min = " << num(cfg.grid.vcpu.min) << "\n";
    out << "vcpu_max = " << num(cfg.grid.vcpu.max) << "\n";
    out << "vcpu_step = " << num(cfg.grid.vcpu.step) << "\n";
    out << "mem_min = " << num(cfg.grid.mem.min) << "\n";
    out << "mem_max = " << num(cfg.grid.mem.max) << "\n";
    out << "mem_step = " << num(cfg.grid.mem.step) << "\n";
    out << "lc_min = " << num(cfg.grid.lc.min) << "\n";
    out << "lc_max = " << num(cfg.grid.lc.max) << "\n";
    out << "lc_step = " << num(cfg.grid.lc.step) << "\n";

    out << "[kpi]\n";
    out << "cpu_util_lo = " << num(cfg.targets.cpu_util_lo) << "\n";
    out << "cpu_util_hi = " << num(cfg.targets.cpu_util_hi) << "\n";
    out << "mem_util_max = " << num(cfg.targets.mem_util_max) << "\n";
    out << "latency_max_ms = " << num(cfg.targets.latency_max) << "\n";

    out << "[rewards]\n";
    if (cfg.beta_cpu) out << "beta_cpu = " << num(*cfg.beta_cpu) << "\n";
    if (cfg.beta_mem) out << "beta_mem = " << num(*cfg.beta_mem) << "\n";
    if (cfg.beta_lc) out << "beta_lc = " << num(*cfg.beta_lc) << "\n";

    out << "[agent]\n";
    out << "alpha = " << num(cfg.agent.alpha) << "\n";
    out << "gamma = " << num(cfg.agent.gamma) << "\n";
    out << "epsilon_decay = " << num(cfg.agent.epsilon_decay) << "\n";
    out << "epsilon_min = " << num(cfg.agent.epsilon_min) << "\n";
    out << "max_steps = " << cfg.agent.max_steps << "\n";
    out << "convergence_eps = " << num(cfg.agent.convergence_eps) << "\n";
    out << "convergence_window = " << cfg.agent.convergence_window << "\n";
    out << "episodes = " << cfg.agent.episodes << "\n";
    out << "breach_reset_window = " << cfg.agent.breach_reset_window << "\n";

    out << "[weights]\n";
    out << "w_cpu = " << num(cfg.agent.weights.w_cpu) << "\n";
    out << "w_mem = " << num(cfg.agent.weights.w_mem) << "\n";
    out << "w_lc = " << num(cfg.agent.weights.w_lc) << "\n";

    out << "[env]\n";
    if (cfg.input_rate) out << "input_rate = " << num(*cfg.input_rate) << "\n";
    out << "input_initial = " << num(cfg.input_initial) << "\n";
    out << "input_step_increase = " << num(cfg.input_step_increase) << "\n";
    out << "input_max = " << num(cfg.input_max) << "\n";
    out << "noise_std = " << num(cfg.noise_std) << "\n";

    out << "[oracle]\n";
    out << "runs_per_point = " << cfg.oracle_runs << "\n";
    out << "input_rate = " << num(cfg.oracle_input) << "\n";

    out << "[offline]\n";
    out << "samples = " << cfg.offline_samples << "\n";
    out << "ir_lo = " << num(cfg.ir_params.ir_lo) << "\n";
    out << "ir_hi = " << num(cfg.ir_params.ir_hi) << "\n";
    out << "resolution = " << num(cfg.ir_params.resolution) << "\n";

    out << "[bench]\n";
    out << "episodes = " << cfg.bench_episodes << "\n";
    out << "landmarks = ";
    for (std::size_t i = 0; i < cfg.bench_landmarks.size(); ++i)
        out << (i ? "," : "") << cfg.bench_landmarks[i];
    out << "\n";
    out << "ramp_until_episode = " << cfg.bench_ramp_until << "\n";
    out << "window = " << cfg.bench_window << "\n";
    out << "max_steps = " << cfg.bench_max_steps << "\n";

    out << "[scenarios]\n";
    out << "weights = ";
    for (std::size_t i = 0; i < cfg.scenario_weight_list.size(); ++i) {
        const WeightVector& w = cfg.scenario_weight_list[i];
        out << (i ? ";" : "") << num(w.w_cpu) << "," << num(w.w_mem) << "," << num(w.w_lc);
    }
    out << "\n";
    return out.str();
}

inline std::uint64_t config_hash(const ExperimentConfig& cfg) {
    return detail::fnv1a(serialize_config(cfg));
}

/// Write the run manifest: the full resolved config plus run metadata. The
/// file parses as an ordinary config, so re-running any command with
/// `--config <manifest>` reproduces the artifacts bit-exactly.
inline void write_manifest(const std::string& path, const ExperimentConfig& cfg,
                           const std::string& command) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot open manifest " + path + " for writing");
    out << serialize_config(cfg);
    out << "[manifest]\n";
    out << "command = " << command << "\n";
    out << "version = " << kVersion << "\n";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    out << "config_hash = " << buf << "\n";
}

} // namespace vnfprof
