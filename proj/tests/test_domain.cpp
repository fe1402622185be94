#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "vnfprof/domain.hpp"

using namespace vnfprof;

namespace {

ProfilerState make_state(const ResourceVector& r, const KpiMeasurement& k,
                         double input_rate) {
    ProfilerState s;
    s.resources = r;
    s.kpi = k;
    s.input_rate = input_rate;
    return s;
}

KpiMeasurement all_good_kpi(double input_rate) {
    return {95.0, 70.0, 2.0, input_rate};
}

} // namespace

TEST_CASE("grid defaults have the documented cardinalities") {
    ResourceGrid grid;
    grid.validate();
    CHECK(grid.vcpu.level_count() == 7);
    CHECK(grid.mem.level_count() == 7);
    CHECK(grid.lc.level_count() == 9);
    CHECK(grid.total_points() == 441);
    CHECK(state_key_cardinality(grid) == 7056);
}

TEST_CASE("normalize_resource maps bounds to the unit interval") {
    ResourceGrid grid;
    CHECK(normalize_resource(0.6, grid.vcpu) == Catch::Approx(0.0));
    CHECK(normalize_resource(1.2, grid.vcpu) == Catch::Approx(0.5));
    CHECK(normalize_resource(0.8, grid.vcpu) == Catch::Approx(0.1667).margin(1e-4));
    CHECK_THROWS_AS(normalize_resource(0.5, grid.vcpu), RangeError);
    CHECK_THROWS_AS(normalize_resource(1.9, grid.vcpu), RangeError);
}

TEST_CASE("normalize_resource is strictly monotone on the grid") {
    ResourceGrid grid;
    for (Resource r : kResources) {
        const ResourceBounds& b = grid.bounds(r);
        double prev = -1.0;
        for (int i = 0; i < b.level_count(); ++i) {
            const double x = normalize_resource(b.value_at(i), b);
            CHECK(x > prev);
            prev = x;
        }
    }
}

TEST_CASE("discretize produces indices and flags deterministically") {
    ResourceGrid grid;
    KpiTargets targets;

    SECTION("all satisfied at the grid origin") {
        const auto s = make_state({0.6, 1000.0, 400.0}, all_good_kpi(100.0), 100.0);
        const StateKey key = discretize(s, targets, grid);
        CHECK(key.vcpu_idx == 0);
        CHECK(key.mem_idx == 0);
        CHECK(key.lc_idx == 0);
        CHECK(key.kpi_flags == (kFlagCpu | kFlagMem | kFlagLatency | kFlagOutput));
    }

    SECTION("cpu above the band clears only the cpu flag") {
        KpiTargets tight = targets;
        tight.cpu_util_hi = 90.0;
        auto kpi = all_good_kpi(100.0);
        kpi.cpu_util = 95.0;
        const auto s = make_state({0.6, 1000.0, 400.0}, kpi, 100.0);
        const StateKey key = discretize(s, tight, grid);
        CHECK((key.kpi_flags & kFlagCpu) == 0);
        CHECK((key.kpi_flags & kFlagMem) != 0);
        CHECK((key.kpi_flags & kFlagLatency) != 0);
    }

    SECTION("off-grid value raises a grid error") {
        const auto s = make_state({0.7, 1000.0, 400.0}, all_good_kpi(100.0), 100.0);
        CHECK_THROWS_AS(discretize(s, targets, grid), GridError);
    }

    SECTION("equal states yield equal keys, distinct grid points distinct keys") {
        std::set<std::int32_t> seen;
        for (int vi = 0; vi < grid.vcpu.level_count(); ++vi)
            for (int mi = 0; mi < grid.mem.level_count(); ++mi)
                for (int li = 0; li < grid.lc.level_count(); ++li)
                    for (int flags = 0; flags < 16; ++flags) {
                        StateKey key;
                        key.vcpu_idx = static_cast<std::int8_t>(vi);
                        key.mem_idx = static_cast<std::int8_t>(mi);
                        key.lc_idx = static_cast<std::int8_t>(li);
                        key.kpi_flags = static_cast<std::uint8_t>(flags);
                        seen.insert(packed_key(key, grid));
                    }
        CHECK(seen.size() == 7056);
    }
}

TEST_CASE("apply_action moves one step and clamps at the bounds") {
    ResourceGrid grid;
    const ResourceVector mid{1.2, 1300.0, 600.0};

    CHECK(apply_action(mid, {Resource::Vcpu, Direction::Increase}, grid) ==
          ResourceVector{1.4, 1300.0, 600.0});
    CHECK(apply_action({0.6, 1300.0, 600.0}, {Resource::Vcpu, Direction::Decrease}, grid) ==
          ResourceVector{0.6, 1300.0, 600.0});
    CHECK(apply_action(mid, {Resource::Vcpu, Direction::Hold}, grid) == mid);
    CHECK(apply_action(mid, {Resource::Mem, Direction::Decrease}, grid) ==
          ResourceVector{1.2, 1200.0, 600.0});
    CHECK(apply_action(mid, {Resource::Lc, Direction::Increase}, grid) ==
          ResourceVector{1.2, 1300.0, 650.0});
}

TEST_CASE("apply_action followed by the reverse action is the identity inside the grid") {
    ResourceGrid grid;
    for (int vi = 1; vi + 1 < grid.vcpu.level_count(); ++vi)
        for (int mi = 1; mi + 1 < grid.mem.level_count(); ++mi)
            for (int li = 1; li + 1 < grid.lc.level_count(); ++li) {
                const ResourceVector r = grid.at(vi, mi, li);
                for (Resource res : kResources) {
                    const auto forward = apply_action(r, {res, Direction::Increase}, grid);
                    const auto back =
                        apply_action(forward, {res, Direction::Decrease}, grid);
                    CHECK(back == r);
                }
            }
}

TEST_CASE("feasible_actions excludes clamped no-ops and keeps hold") {
    ResourceGrid grid;

    SECTION("interior point offers all seven actions") {
        const auto actions = feasible_actions({1.2, 1300.0, 600.0}, grid);
        CHECK(actions.size() == 7);
    }

    SECTION("all-min corner offers the three increases plus hold") {
        const auto actions = feasible_actions({0.6, 1000.0, 400.0}, grid);
        REQUIRE(actions.size() == 4);
        for (const Action& a : actions)
            CHECK((a.is_hold() || a.dir == Direction::Increase));
    }

    SECTION("all-max corner offers the three decreases plus hold") {
        const auto actions = feasible_actions({1.8, 1600.0, 800.0}, grid);
        REQUIRE(actions.size() == 4);
        for (const Action& a : actions)
            CHECK((a.is_hold() || a.dir == Direction::Decrease));
    }

    SECTION("no returned action is a silent no-op") {
        for (int vi = 0; vi < grid.vcpu.level_count(); ++vi)
            for (int mi = 0; mi < grid.mem.level_count(); ++mi)
                for (int li = 0; li < grid.lc.level_count(); ++li) {
                    const ResourceVector r = grid.at(vi, mi, li);
                    for (const Action& a : feasible_actions(r, grid)) {
                        if (a.is_hold())
                            continue;
                        CHECK_FALSE(apply_action(r, a, grid) == r);
                    }
                }
    }
}

TEST_CASE("action ordering matches the tie-break contract") {
    CHECK(action_index({Resource::Vcpu, Direction::Increase}) == 0);
    CHECK(action_index({Resource::Mem, Direction::Increase}) == 1);
    CHECK(action_index({Resource::Lc, Direction::Increase}) == 2);
    CHECK(action_index({Resource::Vcpu, Direction::Decrease}) == 3);
    CHECK(action_index({Resource::Mem, Direction::Decrease}) == 4);
    CHECK(action_index({Resource::Lc, Direction::Decrease}) == 5);
    CHECK(action_index({Resource::Lc, Direction::Hold}) == kHoldIndex);
    CHECK(Action{Resource::Lc, Direction::Hold} == Action{Resource::Vcpu, Direction::Hold});
}

TEST_CASE("bounds validation catches bad configurations") {
    CHECK_THROWS_AS((ResourceBounds{1.0, 0.5, 0.1}).validate("x"), ValidationError);
    CHECK_THROWS_AS((ResourceBounds{0.0, 1.0, 0.0}).validate("x"), ValidationError);
    CHECK_THROWS_AS((ResourceBounds{0.0, 1.0, 0.3}).validate("x"), ValidationError);
    CHECK_NOTHROW((ResourceBounds{0.0, 1.0, 0.25}).validate("x"));
}

TEST_CASE("weight vector invariants") {
    CHECK_NOTHROW((WeightVector{0.5, 0.25, 0.25}).validate());
    CHECK_THROWS_AS((WeightVector{0.5, 0.25, 0.15}).validate(), ValidationError);
    CHECK_THROWS_AS((WeightVector{1.2, -0.1, -0.1}).validate(), ValidationError);
}
