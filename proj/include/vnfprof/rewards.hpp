#pragma once

/// Per-objective resource rewards: a reverse sigmoid over the normalized
/// allocation, gated to zero whenever any KPI target is violated. Smaller
/// allocations earn larger rewards, which drives the agent toward the
/// cheapest configuration that still satisfies the targets.

#include <array>
#include <cmath>

#include "vnfprof/domain.hpp"

namespace vnfprof {

struct RewardConfig {
    double beta_cpu = 8.0;
    double beta_mem = 7.0;
    double beta_lc = 7.0;
    KpiTargets targets;

    double beta(Resource r) const {
        switch (r) {
        case Resource::Vcpu: return beta_cpu;
        case Resource::Mem: return beta_mem;
        case Resource::Lc: return beta_lc;
        }
        return 0.0;
    }

    void validate() const {
        for (Resource r : kResources)
            if (!(beta(r) > 0.0))
                throw ValidationError("rewards: beta must be positive");
        targets.validate();
    }
};

/// Reverse sigmoid shifted to the unit interval: 1 / (1 + e^{beta (x - 0.5)}).
/// Strictly decreasing in x; value 0.5 at the midpoint.
inline double zedoid(double beta, double x_hat) {
    return 1.0 / (1.0 + std::exp(beta * (x_hat - 0.5)));
}

/// Reward of one resource objective: zedoid of the normalized allocation
/// when every KPI target holds, exactly 0 otherwise.
inline double resource_reward(Resource resource, double allocation,
                              const ResourceBounds& bounds, const RewardConfig& config,
                              const KpiMeasurement& kpi) {
    const double x_hat = normalize_resource(allocation, bounds);
    if (!kpi_ok(kpi, config.targets))
        return 0.0;
    return zedoid(config.beta(resource), x_hat);
}

/// Component-wise rewards (R_cpu, R_mem, R_lc). All three share one
/// constraint gate: the vector is either all-zero or all-positive.
inline std::array<double, 3> reward_vector(const ResourceVector& resources,
                                           const ResourceGrid& grid,
                                           const RewardConfig& config,
                                           const KpiMeasurement& kpi) {
    return {resource_reward(Resource::Vcpu, resources.vcpu, grid.vcpu, config, kpi),
            resource_reward(Resource::Mem, resources.mem, grid.mem, config, kpi),
            resource_reward(Resource::Lc, resources.lc, grid.lc, config, kpi)};
}

} // namespace vnfprof
