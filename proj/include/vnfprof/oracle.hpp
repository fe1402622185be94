#pragma once

/// Exhaustive resource-grid search: the ground-truth performance surface a
/// learned allocation is scored against, plus the derived optimum and
/// Pareto front.

#include <algorithm>
#include <vector>

#include "vnfprof/domain.hpp"
#include "vnfprof/envsim.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/metrics.hpp"
#include "vnfprof/rng.hpp"

namespace vnfprof {

struct OracleEntry {
    ResourceVector resources;
    KpiMeasurement mean_kpi;
    KpiMeasurement ci95_kpi; // per-field 95% half-widths
    bool kpi_ok = false;
    int runs = 0;
};

struct OracleTable {
    VnfKind kind = VnfKind::SnortInline;
    double input_rate = 0.0;
    ResourceGrid grid;
    std::vector<OracleEntry> entries; // grid-ordered: vcpu-major, then mem, then lc
};

/// Measure every grid point `runs_per_point` times and summarise. Each grid
/// point draws from its own seeded sub-stream, so the table is deterministic
/// and independent of evaluation order. Noisy sweeps require at least 30
/// runs per point.
inline OracleTable exhaustive_search(const Environment& env, double input_rate,
                                     int runs_per_point, std::uint64_t seed = 1) {
    if (runs_per_point < 1)
        throw ValidationError("exhaustive_search: runs_per_point must be >= 1");
    if (env.model().noise_std > 0.0 && runs_per_point < 30)
        throw ValidationError("exhaustive_search: noisy sweeps need >= 30 runs per point");

    const ResourceGrid& grid = env.grid();
    OracleTable table;
    table.kind = env.model().kind;
    table.input_rate = input_rate;
    table.grid = grid;
    table.entries.reserve(grid.total_points());

    long point = 0;
    for (int vi = 0; vi < grid.vcpu.level_count(); ++vi) {
        for (int mi = 0; mi < grid.mem.level_count(); ++mi) {
            for (int li = 0; li < grid.lc.level_count(); ++li, ++point) {
                const ResourceVector r = grid.at(vi, mi, li);
                Rng rng(seed, "oracle", static_cast<std::uint64_t>(point));

                std::vector<double> cpu(runs_per_point), mem(runs_per_point),
                    lat(runs_per_point), oru(runs_per_point);
                for (int run = 0; run < runs_per_point; ++run) {
                    const KpiMeasurement k = measure(env.config(), r, input_rate, rng);
                    cpu[run] = k.cpu_util;
                    mem[run] = k.mem_util;
                    lat[run] = k.latency;
                    oru[run] = k.output_rate;
                }

                OracleEntry e;
                e.resources = r;
                e.runs = runs_per_point;
                auto summarise = [&](const std::vector<double>& xs, double& mean,
                                     double& half) {
                    if (xs.size() < 2) {
                        mean = xs.front();
                        half = 0.0;
                    } else {
                        auto [m, h] = ci95(xs);
                        mean = m;
                        half = h;
                    }
                };
                summarise(cpu, e.mean_kpi.cpu_util, e.ci95_kpi.cpu_util);
                summarise(mem, e.mean_kpi.mem_util, e.ci95_kpi.mem_util);
                summarise(lat, e.mean_kpi.latency, e.ci95_kpi.latency);
                summarise(oru, e.mean_kpi.output_rate, e.ci95_kpi.output_rate);
                e.kpi_ok = kpi_ok(e.mean_kpi, env.targets());
                table.entries.push_back(e);
            }
        }
    }
    return table;
}

/// The optimal trade-off: among feasible entries within `plateau_delta` of
/// the best mean output rate, the one with the least normalized resource
/// cost; ties fall to ascending (vcpu, mem, lc).
inline OracleEntry optimal_config(const OracleTable& table, double plateau_delta = 0.02) {
    const OracleEntry* best = nullptr;
    double max_or = -1.0;
    for (const OracleEntry& e : table.entries)
        if (e.kpi_ok)
            max_or = std::max(max_or, e.mean_kpi.output_rate);
    if (max_or < 0.0)
        throw InfeasibleError("optimal_config: no feasible entry in the oracle table");

    const double floor = (1.0 - plateau_delta) * max_or;
    double best_cost = 0.0;
    for (const OracleEntry& e : table.entries) {
        if (!e.kpi_ok || e.mean_kpi.output_rate < floor)
            continue;
        const double cost = normalized_resource_sum(e.resources, table.grid);
        if (best == nullptr || cost < best_cost ||
            (cost == best_cost &&
             std::tie(e.resources.vcpu, e.resources.mem, e.resources.lc) <
                 std::tie(best->resources.vcpu, best->resources.mem, best->resources.lc))) {
            best = &e;
            best_cost = cost;
        }
    }
    return *best;
}

namespace detail {

/// a dominates b in (-OR, vcpu, mem, lc): no worse everywhere, better somewhere.
inline bool dominates(const OracleEntry& a, const OracleEntry& b) {
    const bool no_worse = a.resources.vcpu <= b.resources.vcpu &&
                          a.resources.mem <= b.resources.mem &&
                          a.resources.lc <= b.resources.lc &&
                          a.mean_kpi.output_rate >= b.mean_kpi.output_rate;
    const bool better = a.resources.vcpu < b.resources.vcpu ||
                        a.resources.mem < b.resources.mem ||
                        a.resources.lc < b.resources.lc ||
                        a.mean_kpi.output_rate > b.mean_kpi.output_rate;
    return no_worse && better;
}

} // namespace detail

/// Non-dominated feasible entries of the table, in grid order. Only
/// KPI-meeting configurations are candidate solutions; without the filter a
/// memory-flat VNF would have its whole feasible set dominated by
/// infeasible low-memory neighbours. Incremental front construction; the
/// test suite cross-checks it against a full pairwise domination scan.
inline std::vector<OracleEntry> pareto_front(const OracleTable& table) {
    std::vector<const OracleEntry*> front;
    for (const OracleEntry& e : table.entries) {
        if (!e.kpi_ok)
            continue;
        bool dominated = false;
        for (const OracleEntry* f : front) {
            if (detail::dominates(*f, e)) {
                dominated = true;
                break;
            }
        }
        if (dominated)
            continue;
        std::erase_if(front,
                      [&](const OracleEntry* f) { return detail::dominates(e, *f); });
        front.push_back(&e);
    }

    std::vector<OracleEntry> out;
    out.reserve(front.size());
    for (const OracleEntry& e : table.entries)
        for (const OracleEntry* f : front)
            if (f == &e) {
                out.push_back(e);
                break;
            }
    return out;
}

} // namespace vnfprof
