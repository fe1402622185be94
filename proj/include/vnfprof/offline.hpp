#pragma once

/// Offline profiling stages: optimal-input-rate discovery (exponential
/// ramp-up plus binary search), per-resource influence weighting, weighted
/// random dataset collection, and the nearest-feasible-neighbour baseline
/// used to warm-start the learning agent.

#include <algorithm>
#include <array>
#include <functional>
#include <vector>

#include "vnfprof/domain.hpp"
#include "vnfprof/envsim.hpp"
#include "vnfprof/errors.hpp"
#include "vnfprof/rng.hpp"

namespace vnfprof {

struct ProfilingRecord {
    ResourceVector resources;
    double input_rate = 0.0; // the configuration's measured optimal IR
    KpiMeasurement kpi;
    bool kpi_ok = false;
};

struct InfluenceWeights {
    std::array<double, 3> w = {0.0, 0.0, 0.0};

    double get(Resource r) const { return w[static_cast<int>(r)]; }
};

namespace detail {

/// Largest rate in [lo, hi] accepted by `pass`, to within `resolution`.
/// `pass` must be a monotone threshold predicate. Throws InfeasibleError
/// when even `lo` is rejected.
template <class PassFn>
double ir_search(const PassFn& pass, double ir_lo, double ir_hi, double resolution) {
    if (!(ir_lo < ir_hi))
        throw ValidationError("ir_search: ir_lo must be < ir_hi");
    if (!(resolution > 0.0))
        throw ValidationError("ir_search: resolution must be positive");
    if (!pass(ir_lo))
        throw InfeasibleError("ir_search: KPI targets fail at the lowest input rate");

    // Exponential ramp-up to the first failure (or the upper limit).
    double lo = ir_lo;
    double hi = ir_lo;
    while (true) {
        hi = std::min(hi * 2.0, ir_hi);
        if (!pass(hi))
            break;
        lo = hi;
        if (hi >= ir_hi)
            return ir_hi;
    }

    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        if (pass(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

} // namespace detail

/// A configuration handles a rate when every KPI target holds and the
/// offered load is delivered without loss (measured noise-free).
inline bool handles_rate(const Environment& env, const ResourceVector& resources,
                         double input_rate) {
    const KpiMeasurement k = env.probe(resources, input_rate);
    return kpi_ok(k, env.targets()) && k.output_rate + 1e-9 >= input_rate;
}

/// The largest input rate (within `resolution`) a configuration can carry
/// while meeting every KPI target.
inline double optimal_ir(const Environment& env, const ResourceVector& resources,
                         double ir_lo, double ir_hi, double resolution) {
    return detail::ir_search(
        [&](double ir) { return handles_rate(env, resources, ir); }, ir_lo, ir_hi,
        resolution);
}

struct IrSearchParams {
    double ir_lo = 50.0;
    double ir_hi = 1000.0;
    double resolution = 5.0;
};

/// Per-resource influence on performance: the optimal-IR spread between a
/// resource's lower and upper bound while the other two sit at their median.
/// Weights are non-negative and normalised to sum 1.
inline InfluenceWeights influence_weights(const Environment& env,
                                          const IrSearchParams& params = {}) {
    const ResourceGrid& grid = env.grid();
    const ResourceVector median = grid.median();

    InfluenceWeights weights;
    double total = 0.0;
    for (Resource r : kResources) {
        ResourceVector at_min = median;
        ResourceVector at_max = median;
        at_min.set(r, grid.bounds(r).min);
        at_max.set(r, grid.bounds(r).max);
        const double ir_min =
            optimal_ir(env, at_min, params.ir_lo, params.ir_hi, params.resolution);
        const double ir_max =
            optimal_ir(env, at_max, params.ir_lo, params.ir_hi, params.resolution);
        const double spread = std::max(0.0, ir_max - ir_min);
        weights.w[static_cast<int>(r)] = spread;
        total += spread;
    }
    if (total <= 0.0) {
        weights.w = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        return weights;
    }
    for (double& w : weights.w)
        w /= total;
    return weights;
}

namespace detail {

/// Per-level sampling distribution for one resource: uniform for weight 0,
/// shifting toward the scarce (low) levels — where the KPI transitions
/// live — as the influence weight grows.
inline std::vector<double> level_distribution(int levels, double weight) {
    std::vector<double> p(levels);
    const double denom = static_cast<double>(levels) * (levels + 1) / 2.0;
    for (int i = 0; i < levels; ++i)
        p[i] = (1.0 - weight) / levels + weight * static_cast<double>(levels - i) / denom;
    return p;
}

inline int sample_level(const std::vector<double>& p, Rng& rng) {
    double u = rng.uniform();
    for (std::size_t i = 0; i < p.size(); ++i) {
        u -= p[i];
        if (u <= 0.0)
            return static_cast<int>(i);
    }
    return static_cast<int>(p.size()) - 1;
}

} // namespace detail

/// Weighted random configuration sampling with a per-sample optimal-IR
/// measurement. Configurations that fail the targets even at the lowest
/// rate are recorded with kpi_ok = false.
inline std::vector<ProfilingRecord> collect_dataset(const Environment& env,
                                                    const InfluenceWeights& weights,
                                                    std::size_t samples, Rng& rng,
                                                    const IrSearchParams& params = {}) {
    const ResourceGrid& grid = env.grid();
    std::array<std::vector<double>, 3> dist;
    for (Resource r : kResources)
        dist[static_cast<int>(r)] = detail::level_distribution(
            grid.bounds(r).level_count(), weights.get(r));

    std::vector<ProfilingRecord> out;
    out.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const int vi = detail::sample_level(dist[0], rng);
        const int mi = detail::sample_level(dist[1], rng);
        const int li = detail::sample_level(dist[2], rng);
        const ResourceVector config = grid.at(vi, mi, li);

        ProfilingRecord rec;
        rec.resources = config;
        try {
            rec.input_rate =
                optimal_ir(env, config, params.ir_lo, params.ir_hi, params.resolution);
            rec.kpi = env.probe(config, rec.input_rate);
            rec.kpi_ok = true;
        } catch (const InfeasibleError&) {
            rec.input_rate = params.ir_lo;
            rec.kpi = env.probe(config, params.ir_lo);
            rec.kpi_ok = false;
        }
        out.push_back(rec);
    }
    return out;
}

/// Nearest-feasible-neighbour baseline: feasible records ordered by
/// normalized resource cost.
struct BaselineModel {
    ResourceGrid grid;
    std::vector<ProfilingRecord> feasible; // sorted by cost ascending
};

inline BaselineModel fit_baseline(const std::vector<ProfilingRecord>& dataset,
                                  const ResourceGrid& grid) {
    BaselineModel model;
    model.grid = grid;
    for (const ProfilingRecord& r : dataset)
        if (r.kpi_ok)
            model.feasible.push_back(r);
    if (model.feasible.empty())
        throw InfeasibleError("fit_baseline: dataset has no feasible record");
    std::sort(model.feasible.begin(), model.feasible.end(),
              [&](const ProfilingRecord& a, const ProfilingRecord& b) {
                  const double ca = normalized_resource_sum(a.resources, grid);
                  const double cb = normalized_resource_sum(b.resources, grid);
                  if (ca != cb)
                      return ca < cb;
                  if (a.resources.vcpu != b.resources.vcpu)
                      return a.resources.vcpu < b.resources.vcpu;
                  if (a.resources.mem != b.resources.mem)
                      return a.resources.mem < b.resources.mem;
                  return a.resources.lc < b.resources.lc;
              });
    return model;
}

/// Cheapest recorded configuration whose measured optimal IR covers the
/// requested rate; the learning agent's warm start.
inline ResourceVector predict_baseline(const BaselineModel& model, double ir,
                                       const KpiTargets& targets) {
    for (const ProfilingRecord& r : model.feasible)
        if (r.input_rate >= ir && kpi_ok(r.kpi, targets))
            return r.resources;
    throw InfeasibleError("predict_baseline: no recorded configuration sustains " +
                          std::to_string(ir) + " Mbps");
}

} // namespace vnfprof
