#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "vnfprof/oracle.hpp"

using namespace vnfprof;

namespace {

Environment make_env(VnfKind kind, double noise_std, std::uint64_t seed = 1) {
    EnvConfig cfg;
    cfg.model = default_model(kind);
    cfg.model.noise_std = noise_std;
    cfg.seed = seed;
    cfg.schedule = InputSchedule::constant(800.0);
    return Environment(cfg);
}

/// Quadratic reference: the non-dominated feasible set by full pairwise
/// comparison.
std::vector<OracleEntry> brute_force_front(const OracleTable& table) {
    std::vector<OracleEntry> front;
    for (std::size_t i = 0; i < table.entries.size(); ++i) {
        if (!table.entries[i].kpi_ok)
            continue;
        bool dominated = false;
        for (std::size_t j = 0; j < table.entries.size() && !dominated; ++j)
            if (i != j && table.entries[j].kpi_ok &&
                detail::dominates(table.entries[j], table.entries[i]))
                dominated = true;
        if (!dominated)
            front.push_back(table.entries[i]);
    }
    return front;
}

bool same_point(const OracleEntry& a, const OracleEntry& b) {
    return a.resources == b.resources;
}

} // namespace

TEST_CASE("exhaustive_search covers the grid exactly once") {
    Environment env = make_env(VnfKind::SnortPassive, 0.0);
    const OracleTable table = exhaustive_search(env, 800.0, 1);
    CHECK(table.entries.size() == 441);

    // all grid points distinct and in grid order
    for (std::size_t i = 1; i < table.entries.size(); ++i) {
        const auto& a = table.entries[i - 1].resources;
        const auto& b = table.entries[i].resources;
        CHECK(std::tie(a.vcpu, a.mem, a.lc) < std::tie(b.vcpu, b.mem, b.lc));
    }
}

TEST_CASE("noise-free sweeps have zero confidence half-widths") {
    Environment env = make_env(VnfKind::VFw, 0.0);
    const OracleTable table = exhaustive_search(env, 800.0, 5);
    for (const OracleEntry& e : table.entries) {
        CHECK(e.ci95_kpi.output_rate == 0.0);
        CHECK(e.ci95_kpi.latency == Catch::Approx(0.0).margin(1e-12));
        CHECK(e.runs == 5);
    }
}

TEST_CASE("noisy sweeps demand at least 30 runs per point") {
    Environment env = make_env(VnfKind::SnortInline, 0.03);
    CHECK_THROWS_AS(exhaustive_search(env, 800.0, 10), ValidationError);
    CHECK_THROWS_AS(exhaustive_search(env, 800.0, 0), ValidationError);
}

TEST_CASE("sweeps are deterministic under a fixed seed schedule") {
    Environment env = make_env(VnfKind::SnortInline, 0.03);
    const OracleTable a = exhaustive_search(env, 800.0, 30, 77);
    const OracleTable b = exhaustive_search(env, 800.0, 30, 77);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        CHECK(a.entries[i].mean_kpi.output_rate == b.entries[i].mean_kpi.output_rate);
}

TEST_CASE("inline output plateaus at the calibrated ceiling") {
    Environment env = make_env(VnfKind::SnortInline, 0.0);
    const OracleTable table = exhaustive_search(env, 800.0, 1);
    const ResourceGrid& grid = table.grid;
    for (const OracleEntry& e : table.entries) {
        if (e.resources.vcpu >= 1.4 && e.resources.mem >= 1500.0 &&
            e.resources.lc == 600.0)
            CHECK(e.mean_kpi.output_rate == Catch::Approx(550.0).epsilon(0.015));
    }
    (void)grid;
}

TEST_CASE("optimal_config finds the documented slice optima") {
    SECTION("single feasible point is returned") {
        Environment env = make_env(VnfKind::SnortPassive, 0.0);
        OracleTable table = exhaustive_search(env, 390.0, 1);
        OracleEntry only{};
        bool found = false;
        for (OracleEntry& e : table.entries) {
            if (e.kpi_ok && !found) {
                only = e;
                found = true;
            } else {
                e.kpi_ok = false;
            }
        }
        REQUIRE(found);
        const OracleEntry best = optimal_config(table);
        CHECK(same_point(best, only));
    }

    SECTION("no feasible entry raises an infeasibility error") {
        Environment env = make_env(VnfKind::SnortPassive, 0.0);
        OracleTable table = exhaustive_search(env, 390.0, 1);
        for (OracleEntry& e : table.entries)
            e.kpi_ok = false;
        CHECK_THROWS_AS(optimal_config(table), InfeasibleError);
    }

    SECTION("inline lc=600 slice optimum sits at vcpu 1.4, mem 1500") {
        // Offered load just under the slice ceiling makes (1.4, 1500) the
        // cheapest configuration with headroom for the full plateau rate.
        Environment env = make_env(VnfKind::SnortInline, 0.0);
        OracleTable table = exhaustive_search(env, 510.0, 1);
        // keep only the lc = 600 slice
        OracleTable slice;
        slice.kind = table.kind;
        slice.input_rate = table.input_rate;
        slice.grid = table.grid;
        for (const OracleEntry& e : table.entries)
            if (e.resources.lc == 600.0)
                slice.entries.push_back(e);
        const OracleEntry best = optimal_config(slice);
        CHECK(best.resources.vcpu == Catch::Approx(1.4));
        CHECK(best.resources.mem == Catch::Approx(1500.0));
    }

    SECTION("passive memory-flat surface picks the smallest memory") {
        Environment env = make_env(VnfKind::SnortPassive, 0.0);
        const OracleTable table = exhaustive_search(env, 390.0, 1);
        const OracleEntry best = optimal_config(table);
        CHECK(best.resources.mem == Catch::Approx(1000.0));
    }
}

TEST_CASE("pareto front equals the quadratic reference on full tables") {
    for (VnfKind kind : kAllVnfKinds) {
        Environment env = make_env(kind, 0.0);
        const OracleTable table = exhaustive_search(env, 800.0, 1);
        const auto fast = pareto_front(table);
        const auto brute = brute_force_front(table);
        REQUIRE(fast.size() == brute.size());
        for (std::size_t i = 0; i < fast.size(); ++i)
            CHECK(same_point(fast[i], brute[i]));
    }
}

TEST_CASE("pareto front basics") {
    Environment env = make_env(VnfKind::SnortPassive, 0.0);
    OracleTable table;
    table.grid = env.grid();

    SECTION("single entry is its own front") {
        OracleEntry e;
        e.resources = {1.2, 1300.0, 600.0};
        e.mean_kpi.output_rate = 400.0;
        e.kpi_ok = true;
        table.entries = {e};
        CHECK(pareto_front(table).size() == 1);
    }

    SECTION("equal output with strictly more resources is dominated") {
        OracleEntry cheap;
        cheap.resources = {0.8, 1100.0, 500.0};
        cheap.mean_kpi.output_rate = 400.0;
        cheap.kpi_ok = true;
        OracleEntry rich;
        rich.resources = {1.2, 1300.0, 600.0};
        rich.mean_kpi.output_rate = 400.0;
        rich.kpi_ok = true;
        table.entries = {cheap, rich};
        const auto front = pareto_front(table);
        REQUIRE(front.size() == 1);
        CHECK(same_point(front.front(), cheap));
    }

    SECTION("front members never dominate each other") {
        Environment noisy = make_env(VnfKind::SnortInline, 0.0);
        const OracleTable full = exhaustive_search(noisy, 800.0, 1);
        const auto front = pareto_front(full);
        for (std::size_t i = 0; i < front.size(); ++i)
            for (std::size_t j = 0; j < front.size(); ++j)
                if (i != j)
                    CHECK_FALSE(detail::dominates(front[i], front[j]));
    }
}

TEST_CASE("optimal_config is a member of the pareto front") {
    for (VnfKind kind : kAllVnfKinds) {
        Environment env = make_env(kind, 0.0);
        const OracleTable table = exhaustive_search(env, default_input_rate(kind), 1);
        const OracleEntry best = optimal_config(table);
        const auto front = pareto_front(table);
        bool member = false;
        for (const OracleEntry& e : front)
            member = member || same_point(e, best);
        CHECK(member);
    }
}

TEST_CASE("monotone surface: the maximum output sits at the all-max corner") {
    for (VnfKind kind : kAllVnfKinds) {
        Environment env = make_env(kind, 0.0);
        const OracleTable table = exhaustive_search(env, 800.0, 1);
        double max_or = 0.0;
        for (const OracleEntry& e : table.entries)
            max_or = std::max(max_or, e.mean_kpi.output_rate);
        const OracleEntry& corner = table.entries.back();
        CHECK(corner.resources == ResourceVector{1.8, 1600.0, 800.0});
        CHECK(corner.mean_kpi.output_rate == Catch::Approx(max_or));
    }
}
