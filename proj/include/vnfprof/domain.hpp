#pragma once

/// Core value types shared by every other module: resource vectors and their
/// allocation grids, KPI measurements and targets, the discretized state key,
/// and the action algebra of the profiling agent.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "vnfprof/errors.hpp"

namespace vnfprof {

enum class Resource : int { Vcpu = 0, Mem = 1, Lc = 2 };

inline constexpr std::array<Resource, 3> kResources = {Resource::Vcpu, Resource::Mem,
                                                       Resource::Lc};

inline const char* resource_name(Resource r) {
    switch (r) {
    case Resource::Vcpu: return "vcpu";
    case Resource::Mem: return "mem";
    case Resource::Lc: return "lc";
    }
    return "?";
}

/// Inclusive allocation range with a fixed step; the grid levels are
/// min, min+step, ..., max.
struct ResourceBounds {
    double min = 0.0;
    double max = 0.0;
    double step = 0.0;

    void validate(const std::string& label) const {
        if (!(min < max))
            throw ValidationError(label + ": min must be < max");
        if (!(step > 0.0))
            throw ValidationError(label + ": step must be positive");
        const double levels = (max - min) / step;
        if (std::abs(levels - std::round(levels)) > 1e-6)
            throw ValidationError(label + ": (max - min) must be a multiple of step");
    }

    int level_count() const { return static_cast<int>(std::round((max - min) / step)) + 1; }

    /// Canonical level value; the top level is exactly `max` so repeated
    /// stepping cannot drift off the bounds.
    double value_at(int idx) const {
        return idx == level_count() - 1 ? max : min + idx * step;
    }

    /// Grid index of an on-grid value; throws GridError otherwise.
    int index_of(double value, const char* label = "resource") const {
        const double raw = (value - min) / step;
        const int idx = static_cast<int>(std::round(raw));
        if (idx < 0 || idx >= level_count() ||
            std::abs(value - value_at(idx)) > 1e-6 * std::max(1.0, std::abs(step)))
            throw GridError(std::string(label) + " value " + std::to_string(value) +
                            " is not on the allocation grid");
        return idx;
    }

    bool on_grid(double value) const {
        const double raw = (value - min) / step;
        const int idx = static_cast<int>(std::round(raw));
        return idx >= 0 && idx < level_count() &&
               std::abs(value - value_at(idx)) <= 1e-6 * std::max(1.0, std::abs(step));
    }

    double clamp(double value) const { return std::min(max, std::max(min, value)); }

    double median() const { return value_at(level_count() / 2); }
};

/// One VNF instance's allocation: vCPU cores, memory in MB, link capacity in Mbps.
struct ResourceVector {
    double vcpu = 0.0;
    double mem = 0.0;
    double lc = 0.0;

    double get(Resource r) const {
        switch (r) {
        case Resource::Vcpu: return vcpu;
        case Resource::Mem: return mem;
        case Resource::Lc: return lc;
        }
        return 0.0;
    }

    void set(Resource r, double v) {
        switch (r) {
        case Resource::Vcpu: vcpu = v; break;
        case Resource::Mem: mem = v; break;
        case Resource::Lc: lc = v; break;
        }
    }

    bool operator==(const ResourceVector& o) const = default;
};

/// The three per-resource grids of one experiment.
struct ResourceGrid {
    ResourceBounds vcpu{0.6, 1.8, 0.2};
    ResourceBounds mem{1000.0, 1600.0, 100.0};
    ResourceBounds lc{400.0, 800.0, 50.0};

    const ResourceBounds& bounds(Resource r) const {
        switch (r) {
        case Resource::Vcpu: return vcpu;
        case Resource::Mem: return mem;
        case Resource::Lc: return lc;
        }
        return vcpu;
    }

    void validate() const {
        vcpu.validate("vcpu bounds");
        mem.validate("mem bounds");
        lc.validate("lc bounds");
    }

    bool on_grid(const ResourceVector& r) const {
        return vcpu.on_grid(r.vcpu) && mem.on_grid(r.mem) && lc.on_grid(r.lc);
    }

    ResourceVector median() const { return {vcpu.median(), mem.median(), lc.median()}; }

    ResourceVector at(int vi, int mi, int li) const {
        return {vcpu.value_at(vi), mem.value_at(mi), lc.value_at(li)};
    }

    long total_points() const {
        return static_cast<long>(vcpu.level_count()) * mem.level_count() * lc.level_count();
    }
};

/// Measured KPIs of one observation: utilisations in percent of the
/// allocation, latency in ms, output rate in Mbps.
struct KpiMeasurement {
    double cpu_util = 0.0;
    double mem_util = 0.0;
    double latency = 0.0;
    double output_rate = 0.0;
};

/// KPI targets the profiled VNF must meet. The cpu band keeps both ends of
/// the configured "95 +/- 5" range, but only the upper end can bind: a VNF
/// idling below the band is under-loaded, not failing (and the ramp-up
/// search of the offline profiler requires low input rates to pass).
struct KpiTargets {
    double cpu_util_lo = 90.0;
    double cpu_util_hi = 100.0;
    double mem_util_max = 98.0;
    double latency_max = 7.5;

    void validate() const {
        if (!(0.0 <= cpu_util_lo && cpu_util_lo < cpu_util_hi && cpu_util_hi <= 100.0))
            throw ValidationError("kpi: cpu band must satisfy 0 <= lo < hi <= 100");
        if (!(mem_util_max > 0.0 && mem_util_max <= 100.0))
            throw ValidationError("kpi: mem_util_max must be in (0, 100]");
        if (!(latency_max > 0.0))
            throw ValidationError("kpi: latency_max must be positive");
    }
};

/// Output-rate saturation threshold for the state flags: the output-rate bit
/// is set while the VNF delivers at least this fraction of the offered load.
/// Sits several noise deviations below 1, so a healthy operating point does
/// not flicker between state keys.
inline constexpr double kOrSatFraction = 0.9;

inline bool cpu_ok(const KpiMeasurement& k, const KpiTargets& t) {
    return k.cpu_util <= t.cpu_util_hi;
}
inline bool mem_ok(const KpiMeasurement& k, const KpiTargets& t) {
    return k.mem_util <= t.mem_util_max;
}
inline bool latency_ok(const KpiMeasurement& k, const KpiTargets& t) {
    return k.latency <= t.latency_max;
}
inline bool output_keeping_up(const KpiMeasurement& k, double input_rate) {
    return k.output_rate >= kOrSatFraction * input_rate;
}

/// The constraint gate: all KPI targets satisfied.
inline bool kpi_ok(const KpiMeasurement& k, const KpiTargets& t) {
    return cpu_ok(k, t) && mem_ok(k, t) && latency_ok(k, t);
}

/// Convex scalarisation weights over the three resource objectives.
struct WeightVector {
    double w_cpu = 1.0 / 3.0;
    double w_mem = 1.0 / 3.0;
    double w_lc = 1.0 / 3.0;

    double get(Resource r) const {
        switch (r) {
        case Resource::Vcpu: return w_cpu;
        case Resource::Mem: return w_mem;
        case Resource::Lc: return w_lc;
        }
        return 0.0;
    }

    void validate() const {
        for (Resource r : kResources)
            if (get(r) < 0.0 || get(r) > 1.0)
                throw ValidationError("weights: each weight must be in [0, 1]");
        if (std::abs(w_cpu + w_mem + w_lc - 1.0) > 1e-9)
            throw ValidationError("weights: w_cpu + w_mem + w_lc must sum to 1");
    }

    std::string str() const {
        return "(" + std::to_string(w_cpu) + "," + std::to_string(w_mem) + "," +
               std::to_string(w_lc) + ")";
    }
};

/// The nine-element observation the agent sees: allocation (3), measured
/// KPIs (4), offered input rate, and the scalarised Q of the chosen action.
struct ProfilerState {
    ResourceVector resources;
    KpiMeasurement kpi;
    double input_rate = 0.0;
    double scalarised_q = 0.0;
};

/// Discretized state identity: grid indices plus four KPI flag bits.
/// Flag layout: bit0 cpu, bit1 mem, bit2 latency, bit3 output-rate.
struct StateKey {
    std::int8_t vcpu_idx = 0;
    std::int8_t mem_idx = 0;
    std::int8_t lc_idx = 0;
    std::uint8_t kpi_flags = 0;

    bool operator==(const StateKey& o) const = default;
};

inline constexpr std::uint8_t kFlagCpu = 1u << 0;
inline constexpr std::uint8_t kFlagMem = 1u << 1;
inline constexpr std::uint8_t kFlagLatency = 1u << 2;
inline constexpr std::uint8_t kFlagOutput = 1u << 3;

inline std::int32_t packed_key(const StateKey& k, const ResourceGrid& grid) {
    const int m = grid.mem.level_count();
    const int l = grid.lc.level_count();
    return ((k.vcpu_idx * m + k.mem_idx) * l + k.lc_idx) * 16 + k.kpi_flags;
}

/// Total number of distinct state keys for a grid (grid points x 16 flags).
inline long state_key_cardinality(const ResourceGrid& grid) {
    return grid.total_points() * 16;
}

enum class Direction : int { Increase = 0, Decrease = 1, Hold = 2 };

/// One agent action: move one resource a single grid step, or hold.
/// `hold` ignores its target; all holds compare equal.
struct Action {
    Resource target = Resource::Vcpu;
    Direction dir = Direction::Hold;

    bool is_hold() const { return dir == Direction::Hold; }

    bool operator==(const Action& o) const {
        if (is_hold() || o.is_hold())
            return dir == o.dir;
        return target == o.target && dir == o.dir;
    }
};

/// All seven actions in the fixed tie-break order:
/// increase < decrease < hold, and vcpu < mem < lc within a direction.
inline constexpr std::array<Action, 7> kAllActions = {{
    {Resource::Vcpu, Direction::Increase},
    {Resource::Mem, Direction::Increase},
    {Resource::Lc, Direction::Increase},
    {Resource::Vcpu, Direction::Decrease},
    {Resource::Mem, Direction::Decrease},
    {Resource::Lc, Direction::Decrease},
    {Resource::Vcpu, Direction::Hold},
}};

inline constexpr int kActionCount = 7;
inline constexpr int kHoldIndex = 6;

inline int action_index(const Action& a) {
    if (a.is_hold())
        return kHoldIndex;
    const int dir = a.dir == Direction::Increase ? 0 : 1;
    return dir * 3 + static_cast<int>(a.target);
}

inline std::string action_name(const Action& a) {
    if (a.is_hold())
        return "hold";
    return std::string(a.dir == Direction::Increase ? "inc_" : "dec_") +
           resource_name(a.target);
}

/// Maps a value in [min, max] onto [0, 1].
inline double normalize_resource(double value, const ResourceBounds& bounds) {
    if (value < bounds.min - 1e-9 || value > bounds.max + 1e-9)
        throw RangeError("normalize_resource: value " + std::to_string(value) +
                         " outside [" + std::to_string(bounds.min) + ", " +
                         std::to_string(bounds.max) + "]");
    return (value - bounds.min) / (bounds.max - bounds.min);
}

/// Normalized resource sub-vector, used for cost ranking and for the
/// convergence distance of the learning loop.
inline std::array<double, 3> normalized_resources(const ResourceVector& r,
                                                  const ResourceGrid& grid) {
    return {normalize_resource(r.vcpu, grid.vcpu), normalize_resource(r.mem, grid.mem),
            normalize_resource(r.lc, grid.lc)};
}

inline double normalized_resource_sum(const ResourceVector& r, const ResourceGrid& grid) {
    const auto n = normalized_resources(r, grid);
    return n[0] + n[1] + n[2];
}

/// Euclidean distance between the normalized resource parts of two states.
inline double resource_distance(const ResourceVector& a, const ResourceVector& b,
                                const ResourceGrid& grid) {
    const auto na = normalized_resources(a, grid);
    const auto nb = normalized_resources(b, grid);
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        s += (na[i] - nb[i]) * (na[i] - nb[i]);
    return std::sqrt(s);
}

inline std::uint8_t kpi_flag_bits(const KpiMeasurement& k, const KpiTargets& t,
                                  double input_rate) {
    std::uint8_t flags = 0;
    if (cpu_ok(k, t)) flags |= kFlagCpu;
    if (mem_ok(k, t)) flags |= kFlagMem;
    if (latency_ok(k, t)) flags |= kFlagLatency;
    if (output_keeping_up(k, input_rate)) flags |= kFlagOutput;
    return flags;
}

/// Deterministic state key of an observation. Throws GridError for
/// off-grid resource values.
inline StateKey discretize(const ProfilerState& s, const KpiTargets& targets,
                           const ResourceGrid& grid) {
    StateKey key;
    key.vcpu_idx = static_cast<std::int8_t>(grid.vcpu.index_of(s.resources.vcpu, "vcpu"));
    key.mem_idx = static_cast<std::int8_t>(grid.mem.index_of(s.resources.mem, "mem"));
    key.lc_idx = static_cast<std::int8_t>(grid.lc.index_of(s.resources.lc, "lc"));
    key.kpi_flags = kpi_flag_bits(s.kpi, targets, s.input_rate);
    return key;
}

/// Move one resource a single grid step, clamped at the bounds; `hold` is
/// the identity. Boundary moves clamp silently so the agent can explore
/// near the bounds without aborting an episode. Moves go through the grid
/// index, so results are always canonical level values.
inline ResourceVector apply_action(const ResourceVector& resources, const Action& action,
                                   const ResourceGrid& grid) {
    if (action.is_hold())
        return resources;
    ResourceVector out = resources;
    const ResourceBounds& b = grid.bounds(action.target);
    const int idx = b.index_of(out.get(action.target), resource_name(action.target));
    const int moved = action.dir == Direction::Increase
                          ? std::min(idx + 1, b.level_count() - 1)
                          : std::max(idx - 1, 0);
    out.set(action.target, b.value_at(moved));
    return out;
}

/// The feasible action set A(s): all seven actions minus moves that clamping
/// would turn into no-ops. Always contains `hold`; preserves the fixed
/// tie-break order.
inline std::vector<Action> feasible_actions(const ResourceVector& resources,
                                            const ResourceGrid& grid) {
    std::vector<Action> out;
    out.reserve(kActionCount);
    for (const Action& a : kAllActions) {
        if (a.is_hold() || !(apply_action(resources, a, grid) == resources))
            out.push_back(a);
    }
    return out;
}

} // namespace vnfprof
