#pragma once

/// Deterministic-seeded surrogate environment standing in for the physical
/// VNF testbed. A small response-surface model maps (allocation, input rate)
/// to KPIs per VNF type; its constants are fitted against the exhaustive
/// search anchors and never presented as measured ground truth.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "vnfprof/domain.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/rewards.hpp"
#include "vnfprof/rng.hpp"

namespace vnfprof {

enum class VnfKind : int { SnortInline = 0, SnortPassive = 1, VFw = 2 };

inline constexpr std::array<VnfKind, 3> kAllVnfKinds = {VnfKind::SnortInline,
                                                        VnfKind::SnortPassive, VnfKind::VFw};

inline const char* vnf_name(VnfKind k) {
    switch (k) {
    case VnfKind::SnortInline: return "snort_inline";
    case VnfKind::SnortPassive: return "snort_passive";
    case VnfKind::VFw: return "vfw";
    }
    return "?";
}

inline VnfKind vnf_from_name(const std::string& name) {
    for (VnfKind k : kAllVnfKinds)
        if (name == vnf_name(k))
            return k;
    throw ValidationError("unknown VNF kind '" + name +
                          "' (expected snort_inline, snort_passive or vfw)");
}

/// Queueing floor: latency denominator never drops below this.
inline constexpr double kQueueEps = 0.02;

/// Memory working-set growth per offered Mbps, by VNF type.
inline double mem_slope(VnfKind kind) {
    switch (kind) {
    case VnfKind::SnortInline: return 0.1;
    case VnfKind::SnortPassive: return 0.2;
    case VnfKind::VFw: return 0.1;
    }
    return 0.1;
}

/// Surrogate response-surface constants for one VNF type.
struct VnfModel {
    VnfKind kind = VnfKind::SnortInline;
    double cpu_sat = 1.4;      // cores at which throughput saturates
    double or_cap = 550.0;     // Mbps ceiling of the processing path
    double mem_floor = 1500.0; // MB below which throughput degrades; 0 = no effect
    double link_eff = 0.93;    // usable fraction of the allocated link
    double base_latency = 0.25; // ms at idle
    double mem_base = 975.0;   // MB working set at zero load
    double noise_std = 0.03;   // relative std-dev of the output-rate noise

    void validate() const {
        if (!(or_cap > 0.0))
            throw ValidationError("model: or_cap must be positive");
        if (!(link_eff > 0.0 && link_eff <= 1.0))
            throw ValidationError("model: link_eff must be in (0, 1]");
        if (!(noise_std >= 0.0))
            throw ValidationError("model: noise_std must be non-negative");
        if (!(cpu_sat > 0.0))
            throw ValidationError("model: cpu_sat must be positive");
    }
};

/// Fitted defaults per VNF type.
inline VnfModel default_model(VnfKind kind) {
    VnfModel m;
    m.kind = kind;
    switch (kind) {
    case VnfKind::SnortInline:
        m.cpu_sat = 1.4;
        m.or_cap = 550.0;
        m.mem_floor = 1500.0;
        m.link_eff = 0.93;
        m.base_latency = 0.25;
        m.mem_base = 970.0;
        break;
    case VnfKind::SnortPassive:
        m.cpu_sat = 1.0;
        m.or_cap = 577.0;
        m.mem_floor = 0.0;
        m.link_eff = 0.925;
        m.base_latency = 0.24;
        m.mem_base = 869.0;
        break;
    case VnfKind::VFw:
        m.cpu_sat = 0.8;
        m.or_cap = 760.0;
        m.mem_floor = 0.0;
        m.link_eff = 0.945;
        m.base_latency = 0.23;
        m.mem_base = 923.0;
        break;
    }
    return m;
}

/// Tuned reward steepness per VNF type.
inline RewardConfig default_reward_config(VnfKind kind, const KpiTargets& targets = {}) {
    RewardConfig rc;
    rc.targets = targets;
    switch (kind) {
    case VnfKind::SnortInline:
        rc.beta_cpu = 8.0; rc.beta_mem = 7.0; rc.beta_lc = 7.0;
        break;
    case VnfKind::SnortPassive:
        rc.beta_cpu = 8.0; rc.beta_mem = 7.0; rc.beta_lc = 8.0;
        break;
    case VnfKind::VFw:
        rc.beta_cpu = 7.0; rc.beta_mem = 7.0; rc.beta_lc = 9.0;
        break;
    }
    return rc;
}

/// Default offered load while profiling a VNF (scenario sweeps).
inline double default_input_rate(VnfKind kind) {
    switch (kind) {
    case VnfKind::SnortInline: return 370.0;
    case VnfKind::SnortPassive: return 560.0;
    case VnfKind::VFw: return 600.0;
    }
    return 370.0;
}

/// Default offered load for the single-objective reward studies.
inline double default_study_input_rate(VnfKind kind) {
    switch (kind) {
    case VnfKind::SnortInline: return 320.0;
    case VnfKind::SnortPassive: return 500.0;
    case VnfKind::VFw: return 580.0;
    }
    return 320.0;
}

/// Piecewise-constant ramp of the offered input rate over episode steps.
struct InputSchedule {
    double initial = 50.0;
    double step_increase = 0.0;
    double max_rate = 800.0;

    double rate_at(long step) const {
        return std::min(max_rate, initial + step_increase * static_cast<double>(step));
    }

    static InputSchedule constant(double rate) { return {rate, 0.0, rate}; }
};

struct EnvConfig {
    VnfModel model;
    ResourceGrid grid;
    KpiTargets targets;
    std::uint64_t seed = 1;
    InputSchedule schedule = InputSchedule::constant(50.0);

    void validate() const {
        model.validate();
        grid.validate();
        targets.validate();
        if (!(schedule.initial > 0.0))
            throw ValidationError("env: initial input rate must be positive");
    }
};

/// Throughput ceiling of the processing path for an allocation:
/// or_cap * min(1, vcpu/cpu_sat) * mem_factor. Monotone non-decreasing in
/// every resource; memory only matters for kinds with a mem_floor.
inline double capacity(const VnfModel& model, const ResourceVector& r) {
    const double cpu_factor = std::min(1.0, r.vcpu / model.cpu_sat);
    const double mem_factor =
        model.mem_floor > 0.0 ? std::min(1.0, r.mem / model.mem_floor) : 1.0;
    return model.or_cap * cpu_factor * mem_factor;
}

/// One KPI observation. The only stochastic quantity is the output rate,
/// which carries multiplicative Gaussian noise; pass noise_std = 0 (or a
/// model with it) for the pure function.
///
/// served   = min(input, link_eff * lc, capacity)
/// output   = served * (1 + N(0, noise)), clamped to [0, min(input, lc)]
/// cpu_util = 100 * min(1, demand / vcpu), demand = (cpu_sat/or_cap) * served
/// mem_util = 100 * min(1, working_set(input) / mem)
/// latency  = base / max(eps_q, 1 - served/capacity)
inline KpiMeasurement measure(const EnvConfig& config, const ResourceVector& resources,
                              double input_rate, Rng& rng) {
    const VnfModel& m = config.model;
    const double cap = capacity(m, resources);
    const double served = std::min({input_rate, m.link_eff * resources.lc, cap});

    double output = served;
    const double noise = rng.gaussian(0.0, 1.0); // one draw per measurement
    if (m.noise_std > 0.0)
        output = served * (1.0 + m.noise_std * noise);
    output = std::clamp(output, 0.0, std::min(input_rate, resources.lc));

    const double demand = (m.cpu_sat / m.or_cap) * served;
    const double working_set = m.mem_base + mem_slope(m.kind) * input_rate;
    const double rho = cap > 0.0 ? served / cap : 1.0;

    KpiMeasurement k;
    k.output_rate = output;
    k.cpu_util = 100.0 * std::min(1.0, demand / resources.vcpu);
    k.mem_util = 100.0 * std::min(1.0, working_set / resources.mem);
    k.latency = m.base_latency / std::max(kQueueEps, 1.0 - rho);
    return k;
}

/// Stateful environment instance: owns the allocation, the step counter of
/// the input schedule, and one RNG stream. Single-threaded by construction;
/// run independent instances (with independent seeds) in parallel.
class Environment {
public:
    explicit Environment(EnvConfig config)
        : config_(std::move(config)), rng_(config_.seed, "env"),
          resources_(config_.grid.median()) {
        config_.validate();
    }

    const EnvConfig& config() const { return config_; }
    const ResourceGrid& grid() const { return config_.grid; }
    const KpiTargets& targets() const { return config_.targets; }
    const VnfModel& model() const { return config_.model; }
    const ResourceVector& resources() const { return resources_; }
    double current_input_rate() const {
        return input_override_ > 0.0 ? input_override_ : config_.schedule.rate_at(step_);
    }

    /// Start a new episode at the given allocation; the RNG stream carries on.
    ProfilerState reset(const ResourceVector& initial) {
        if (!config_.grid.on_grid(initial))
            throw GridError("environment reset: initial allocation is off-grid");
        resources_ = initial;
        step_ = 0;
        return observe();
    }

    /// Pin the offered rate for the current episode (overrides the schedule).
    void override_input_rate(double rate) { input_override_ = rate; }

    /// Apply one action, advance the schedule, and re-measure. Consumes
    /// exactly one RNG draw.
    std::pair<ProfilerState, KpiMeasurement> step(const Action& action) {
        resources_ = apply_action(resources_, action, config_.grid);
        ++step_;
        ProfilerState s = observe();
        return {s, s.kpi};
    }

    /// Noise-free side-channel measurement at an arbitrary operating point;
    /// does not advance the environment or its RNG.
    KpiMeasurement probe(const ResourceVector& resources, double input_rate) const {
        EnvConfig quiet = config_;
        quiet.model.noise_std = 0.0;
        Rng throwaway(0);
        return measure(quiet, resources, input_rate, throwaway);
    }

private:
    ProfilerState observe() {
        ProfilerState s;
        s.resources = resources_;
        s.input_rate = current_input_rate();
        s.kpi = measure(config_, resources_, s.input_rate, rng_);
        return s;
    }

    EnvConfig config_;
    Rng rng_;
    ResourceVector resources_;
    long step_ = 0;
    double input_override_ = -1.0;
};

/// One calibration target: the noise-free output rate at a given operating
/// point must match the expected value within the tolerance.
struct OracleAnchor {
    ResourceVector resources;
    double input_rate = 800.0;
    double expected_or = 0.0;
    std::string label;
};

inline std::vector<OracleAnchor> default_anchors(VnfKind kind) {
    switch (kind) {
    case VnfKind::SnortInline:
        return {
            {{1.4, 1500.0, 600.0}, 800.0, 550.0, "inline plateau at vcpu 1.4, mem 1500"},
            {{1.6, 1500.0, 600.0}, 800.0, 550.0, "inline plateau at vcpu 1.6"},
            {{1.8, 1600.0, 600.0}, 800.0, 550.0, "inline plateau at full resources"},
        };
    case VnfKind::SnortPassive:
        return {
            {{1.0, 1300.0, 600.0}, 800.0, 525.0, "passive plateau at vcpu 1.0"},
            {{1.4, 1300.0, 600.0}, 800.0, 525.0, "passive plateau at vcpu 1.4"},
            {{1.8, 1300.0, 600.0}, 800.0, 525.0, "passive plateau at vcpu 1.8"},
        };
    case VnfKind::VFw:
        return {
            {{1.8, 1600.0, 800.0}, 800.0, 755.6, "vfw link-bound output at full resources"},
            {{1.2, 1300.0, 800.0}, 800.0, 755.6, "vfw link-bound output at median compute"},
            {{1.2, 1300.0, 400.0}, 800.0, 378.0, "vfw link-bound output at minimum lc"},
        };
    }
    return {};
}

inline double noise_free_or(const VnfModel& model, const ResourceVector& r,
                            double input_rate) {
    return std::min({input_rate, model.link_eff * r.lc, capacity(model, r)});
}

/// Fit the surrogate against its anchors: one or_cap rescale pass, then a
/// strict verification at 10% relative tolerance. Throws CalibrationError
/// listing every violated anchor.
inline VnfModel calibrate(VnfModel model, const std::vector<OracleAnchor>& anchors,
                          double tolerance = 0.10) {
    if (anchors.empty())
        throw CalibrationError("calibrate: no anchors given");

    // Rescale the processing ceiling from the first capacity-bound anchor.
    for (const OracleAnchor& a : anchors) {
        const double measured = noise_free_or(model, a.resources, a.input_rate);
        const double cap = capacity(model, a.resources);
        if (measured == cap && measured > 0.0) {
            model.or_cap *= a.expected_or / measured;
            break;
        }
    }

    std::string violated;
    for (const OracleAnchor& a : anchors) {
        const double measured = noise_free_or(model, a.resources, a.input_rate);
        const double rel = std::abs(measured - a.expected_or) / a.expected_or;
        if (rel > tolerance) {
            if (!violated.empty())
                violated += "; ";
            violated += a.label + " (expected " + std::to_string(a.expected_or) +
                        ", measured " + std::to_string(measured) + ")";
        }
    }
    if (!violated.empty())
        throw CalibrationError("calibration anchors violated: " + violated);
    return model;
}

} // namespace vnfprof
