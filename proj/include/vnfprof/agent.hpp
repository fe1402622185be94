#pragma once

/// Multi-objective tabular Q-learning with scalarised greedy selection.
/// One action-value table per resource objective; action choice collapses
/// the per-objective values through a convex weight vector.

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <unordered_map>
#include <vector>

#include "vnfprof/domain.hpp"
#include "vnfprof/envsim.hpp"
#include "vnfprof/rewards.hpp"
#include "vnfprof/rng.hpp"

namespace vnfprof {

/// One lazily grown action-value table per objective; absent entries read 0.
class QTableSet {
public:
    double q(Resource objective, std::int32_t key, int action) const {
        const auto& table = tables_[static_cast<int>(objective)];
        auto it = table.find(key);
        return it == table.end() ? 0.0 : it->second[action];
    }

    void update(Resource objective, std::int32_t key, int action, double value) {
        tables_[static_cast<int>(objective)][key][action] = value;
    }

    std::size_t visited_states() const {
        std::size_t n = 0;
        for (const auto& t : tables_)
            n = std::max(n, t.size());
        return n;
    }

    bool empty() const {
        for (const auto& t : tables_)
            if (!t.empty())
                return false;
        return true;
    }

    const std::unordered_map<std::int32_t, std::array<double, kActionCount>>&
    table(Resource objective) const {
        return tables_[static_cast<int>(objective)];
    }

private:
    std::array<std::unordered_map<std::int32_t, std::array<double, kActionCount>>, 3>
        tables_{};
};

struct AgentConfig {
    double alpha = 0.1;
    double gamma = 0.99;
    double epsilon_decay = 0.9999;
    double epsilon_min = 0.1;
    int max_steps = 1500;          // N
    double convergence_eps = 1e-3; // epsilon of the convergence check
    int convergence_window = 50;   // N_epsilon
    int episodes = 2000;
    WeightVector weights;
    /// Exploration-rate reset: after this many consecutive KPI-violating
    /// steps at the exploration floor, epsilon snaps back to 1. 0 disables.
    int breach_reset_window = 20;
    /// Resources the agent may move; frozen resources keep their initial
    /// value (used by the single-objective reward studies).
    std::array<bool, 3> active = {true, true, true};
    /// Episode start allocation; empty means the grid median.
    std::vector<double> initial_allocation;
    bool record_deltas = false;

    void validate() const {
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw ValidationError("agent: alpha must be in (0, 1]");
        if (!(gamma >= 0.0 && gamma < 1.0))
            throw ValidationError("agent: gamma must be in [0, 1)");
        if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0))
            throw ValidationError("agent: epsilon_decay must be in (0, 1]");
        if (!(epsilon_min > 0.0 && epsilon_min <= 1.0))
            throw ValidationError("agent: epsilon_min must be in (0, 1]");
        if (max_steps <= 0 || convergence_window <= 0)
            throw ValidationError("agent: step counts must be positive");
        if (episodes < 0)
            throw ValidationError("agent: episodes must be non-negative");
        weights.validate();
    }

    ResourceVector start_allocation(const ResourceGrid& grid) const {
        if (initial_allocation.size() == 3)
            return {initial_allocation[0], initial_allocation[1], initial_allocation[2]};
        return grid.median();
    }
};

struct EpisodeStats {
    int steps = 0;
    bool converged = false;
    ProfilerState final_state;
    double cumulative_scalarised_reward = 0.0;
    std::vector<double> state_deltas; // only kept when record_deltas is set
};

/// Scalarised action value: sum over objectives of w_o * Q_o(key, action).
inline double scalarised_q(const QTableSet& qset, const StateKey& key, const Action& action,
                           const WeightVector& weights, const ResourceGrid& grid) {
    const std::int32_t k = packed_key(key, grid);
    const int a = action_index(action);
    double sq = 0.0;
    for (Resource o : kResources)
        sq += weights.get(o) * qset.q(o, k, a);
    return sq;
}

/// Argmax of the scalarised Q over the feasible set; ties fall to the first
/// action in the fixed ordering. Throws on an empty feasible set.
inline Action greedy_action(const QTableSet& qset, const StateKey& key,
                            const WeightVector& weights,
                            const std::vector<Action>& feasible, const ResourceGrid& grid) {
    if (feasible.empty())
        throw std::logic_error("greedy_action: empty feasible action set");
    Action best = feasible.front();
    double best_sq = scalarised_q(qset, key, best, weights, grid);
    for (std::size_t i = 1; i < feasible.size(); ++i) {
        const double sq = scalarised_q(qset, key, feasible[i], weights, grid);
        if (sq > best_sq) {
            best_sq = sq;
            best = feasible[i];
        }
    }
    return best;
}

/// Epsilon-greedy selection over the feasible set.
inline Action select_action(const QTableSet& qset, const StateKey& key,
                            const WeightVector& weights,
                            const std::vector<Action>& feasible, double epsilon, Rng& rng,
                            const ResourceGrid& grid) {
    if (feasible.empty())
        throw std::logic_error("select_action: empty feasible action set");
    if (rng.uniform() < epsilon)
        return feasible[rng.index(feasible.size())];
    return greedy_action(qset, key, weights, feasible, grid);
}

/// One update per objective with its own reward and the shared (s', a').
inline void bellman_update(QTableSet& qset, const StateKey& s_key, const Action& a,
                           const std::array<double, 3>& rewards, const StateKey& next_key,
                           const Action& next_action, double alpha, double gamma,
                           const ResourceGrid& grid) {
    const std::int32_t sk = packed_key(s_key, grid);
    const std::int32_t nk = packed_key(next_key, grid);
    const int ai = action_index(a);
    const int ni = action_index(next_action);
    for (Resource o : kResources) {
        const double cur = qset.q(o, sk, ai);
        const double target = rewards[static_cast<int>(o)] + gamma * qset.q(o, nk, ni);
        qset.update(o, sk, ai, cur + alpha * (target - cur));
    }
}

/// Mutable learning-loop state that persists across episodes.
struct TrainerState {
    double epsilon = 1.0;
    int breach_run = 0;
};

namespace detail {

inline std::vector<Action> active_actions(const ResourceVector& resources,
                                          const ResourceGrid& grid,
                                          const std::array<bool, 3>& active) {
    std::vector<Action> feasible = feasible_actions(resources, grid);
    std::vector<Action> out;
    out.reserve(feasible.size());
    for (const Action& a : feasible)
        if (a.is_hold() || active[static_cast<int>(a.target)])
            out.push_back(a);
    return out;
}

} // namespace detail

/// One training episode: select / step / reward / greedy-next / update, with
/// the circular convergence buffer over the last N_epsilon state distances.
inline EpisodeStats run_episode(Environment& env, QTableSet& qset, const AgentConfig& cfg,
                                const RewardConfig& rewards_cfg, TrainerState& trainer,
                                Rng& rng) {
    const ResourceGrid& grid = env.grid();
    const KpiTargets& targets = env.targets();

    ProfilerState s = env.reset(cfg.start_allocation(grid));
    StateKey s_key = discretize(s, targets, grid);

    std::deque<double> window;
    EpisodeStats stats;
    if (cfg.record_deltas)
        stats.state_deltas.reserve(cfg.max_steps);

    for (int n = 0; n < cfg.max_steps; ++n) {
        const auto feasible = detail::active_actions(s.resources, grid, cfg.active);
        const Action a =
            select_action(qset, s_key, cfg.weights, feasible, trainer.epsilon, rng, grid);

        auto [next, kpi] = env.step(a);
        auto rewards = reward_vector(next.resources, grid, rewards_cfg, kpi);

        StateKey next_key = discretize(next, targets, grid);
        // The full constraint gate reads the state flags: the three KPI
        // targets plus the output-rate bit. A saturated output zeroes the
        // reward vector even when the per-target checks pass.
        if (next_key.kpi_flags != (kFlagCpu | kFlagMem | kFlagLatency | kFlagOutput))
            rewards = {0.0, 0.0, 0.0};
        const auto next_feasible = detail::active_actions(next.resources, grid, cfg.active);
        const Action next_greedy =
            greedy_action(qset, next_key, cfg.weights, next_feasible, grid);

        bellman_update(qset, s_key, a, rewards, next_key, next_greedy, cfg.alpha, cfg.gamma,
                       grid);
        next.scalarised_q = scalarised_q(qset, next_key, next_greedy, cfg.weights, grid);

        const double delta = resource_distance(s.resources, next.resources, grid);
        window.push_back(delta);
        if (static_cast<int>(window.size()) > cfg.convergence_window)
            window.pop_front();
        if (cfg.record_deltas)
            stats.state_deltas.push_back(delta);

        double scalarised_reward = 0.0;
        for (Resource o : kResources)
            scalarised_reward += cfg.weights.get(o) * rewards[static_cast<int>(o)];
        stats.cumulative_scalarised_reward += scalarised_reward;

        s = next;
        s_key = next_key;
        stats.steps = n + 1;

        trainer.epsilon = std::max(trainer.epsilon * cfg.epsilon_decay, cfg.epsilon_min);

        if (cfg.breach_reset_window > 0) {
            if (!kpi_ok(kpi, targets)) {
                if (++trainer.breach_run >= cfg.breach_reset_window &&
                    trainer.epsilon <= cfg.epsilon_min + 1e-12) {
                    trainer.epsilon = 1.0;
                    trainer.breach_run = 0;
                }
            } else {
                trainer.breach_run = 0;
            }
        }

        if (n + 1 > cfg.convergence_window &&
            static_cast<int>(window.size()) == cfg.convergence_window) {
            double max_delta = 0.0;
            for (double d : window)
                max_delta = std::max(max_delta, d);
            if (max_delta < cfg.convergence_eps) {
                stats.converged = true;
                stats.final_state = s;
                return stats;
            }
        }
    }
    stats.final_state = s;
    return stats;
}

/// Per-episode trace entry: the allocation and output rate the episode
/// ended on.
struct EpisodePoint {
    ResourceVector resources;
    double output_rate = 0.0;
    int steps = 0;
    bool converged = false;
};

struct TrainResult {
    QTableSet qtables;                               // tables of the first seeded run
    std::vector<std::vector<EpisodeStats>> stats;    // [seed][episode]
    std::vector<std::vector<EpisodePoint>> trace;    // [seed][episode]
};

using EnvFactory = std::function<Environment(std::uint64_t seed)>;

/// Full training run: `episodes` episodes per seed, independent tables per
/// seed, epsilon decaying across the whole run with the configured floor.
inline TrainResult train(const EnvFactory& make_env, const AgentConfig& cfg,
                         const RewardConfig& rewards_cfg,
                         const std::vector<std::uint64_t>& seeds) {
    cfg.validate();
    rewards_cfg.validate();
    TrainResult result;
    result.stats.resize(seeds.size());
    result.trace.resize(seeds.size());

    for (std::size_t si = 0; si < seeds.size(); ++si) {
        Environment env = make_env(seeds[si]);
        QTableSet qset;
        TrainerState trainer;
        Rng rng(seeds[si], "agent");
        auto& stats = result.stats[si];
        auto& trace = result.trace[si];
        stats.reserve(cfg.episodes);
        trace.reserve(cfg.episodes);

        for (int e = 0; e < cfg.episodes; ++e) {
            EpisodeStats ep = run_episode(env, qset, cfg, rewards_cfg, trainer, rng);
            trace.push_back({ep.final_state.resources, ep.final_state.kpi.output_rate,
                             ep.steps, ep.converged});
            stats.push_back(std::move(ep));
        }
        if (si == 0)
            result.qtables = std::move(qset);
    }
    return result;
}

} // namespace vnfprof
