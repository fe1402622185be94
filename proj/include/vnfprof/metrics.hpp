#pragma once

/// Scoring against the exhaustive-search optimum: percentage errors,
/// confidence intervals, and steady-state scenario summaries.

#include <cmath>
#include <numeric>
#include <vector>

#include "vnfprof/agent.hpp"
#include "vnfprof/domain.hpp"
#include "vnfprof/errors.hpp"

namespace vnfprof {

/// Steady-state percentages are reported against these host capacities.
inline constexpr double kHostVcpuCores = 2.0;
inline constexpr double kHostMemMb = 1600.0;

/// Signed allocation error in percent; negative means under-provisioning.
inline double percentage_error(double allocated, double optimal) {
    if (optimal == 0.0)
        throw ValidationError("percentage_error: optimal baseline is zero");
    return 100.0 * (allocated - optimal) / optimal;
}

/// Mean and 95% half-width (normal approximation, z = 1.96).
inline std::pair<double, double> ci95(const std::vector<double>& samples) {
    if (samples.size() < 2)
        throw SizeError("ci95: need at least 2 samples");
    const double n = static_cast<double>(samples.size());
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : samples)
        ss += (x - mean) * (x - mean);
    const double stddev = std::sqrt(ss / (n - 1.0));
    return {mean, 1.96 * stddev / std::sqrt(n)};
}

/// Row shape of the scenario summary tables.
struct ScenarioResult {
    WeightVector weights;
    double vcpu_pct = 0.0;  // steady vcpu as percent of the 2-core host
    double mem_pct = 0.0;   // steady mem as percent of 1.6 GB
    double or_lc_pct = 0.0; // delivered output over allocated link, percent
    double err_vcpu = 0.0;
    double err_vcpu_ci = 0.0;
    double err_mem = 0.0;
    double err_mem_ci = 0.0;
    double err_lc = 0.0;
    double err_lc_ci = 0.0;
    /// Converged allocation level (pooled window median); not serialized.
    ResourceVector steady_levels;
};

/// Mean allocation and output over the final `window` episodes of one run.
struct SteadyState {
    double vcpu = 0.0;
    double mem = 0.0;
    double lc = 0.0;
    double output_rate = 0.0;

    double vcpu_pct() const { return 100.0 * vcpu / kHostVcpuCores; }
    double mem_pct() const { return 100.0 * mem / kHostMemMb; }
    double or_lc_pct() const { return lc > 0.0 ? 100.0 * output_rate / lc : 0.0; }
};

inline SteadyState steady_state_summary(const std::vector<EpisodePoint>& trace,
                                        std::size_t window) {
    if (window == 0 || trace.size() < window)
        throw SizeError("steady_state_summary: trace shorter than the averaging window");
    SteadyState s;
    for (std::size_t i = trace.size() - window; i < trace.size(); ++i) {
        s.vcpu += trace[i].resources.vcpu;
        s.mem += trace[i].resources.mem;
        s.lc += trace[i].resources.lc;
        s.output_rate += trace[i].output_rate;
    }
    const double n = static_cast<double>(window);
    s.vcpu /= n;
    s.mem /= n;
    s.lc /= n;
    s.output_rate /= n;
    return s;
}

/// Default steady-state window: the final 10% of episodes (at least one).
inline std::size_t steady_window(std::size_t episodes) {
    return std::max<std::size_t>(1, episodes / 10);
}

/// The allocation level a run settled on: per-resource median of the
/// episode-final allocations inside the window. Robust to the residual
/// exploration dither, unlike the mean.
inline ResourceVector steady_state_levels(const std::vector<EpisodePoint>& trace,
                                          std::size_t window) {
    if (window == 0 || trace.size() < window)
        throw SizeError("steady_state_levels: trace shorter than the averaging window");
    std::vector<double> vcpu, mem, lc;
    for (std::size_t i = trace.size() - window; i < trace.size(); ++i) {
        vcpu.push_back(trace[i].resources.vcpu);
        mem.push_back(trace[i].resources.mem);
        lc.push_back(trace[i].resources.lc);
    }
    auto median = [](std::vector<double>& xs) {
        std::sort(xs.begin(), xs.end());
        return xs[xs.size() / 2];
    };
    return {median(vcpu), median(mem), median(lc)};
}

/// The 13 scalarisation weight vectors of the scenario studies.
inline std::vector<WeightVector> scenario_weights() {
    return {
        {1.0, 0.0, 0.0},
        {0.0, 1.0, 0.0},
        {0.0, 0.0, 1.0},
        {0.5, 0.5, 0.0},
        {0.0, 0.5, 0.5},
        {0.5, 0.0, 0.5},
        {0.75, 0.125, 0.125},
        {0.5, 0.25, 0.25},
        {0.125, 0.75, 0.125},
        {0.25, 0.5, 0.25},
        {0.125, 0.125, 0.75},
        {0.25, 0.25, 0.5},
        {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
    };
}

} // namespace vnfprof
