#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "vnfprof/config.hpp"
#include "vnfprof/csv.hpp"

using namespace vnfprof;

namespace {

namespace fs = std::filesystem;

fs::path tmp_dir() {
    const fs::path dir = fs::temp_directory_path() / "vnfprof_config_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
    const fs::path path = tmp_dir() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("an empty config file yields the full defaults") {
    const auto path = write_file("empty.cfg", "");
    const ExperimentConfig cfg = load_config(path.string());

    CHECK(cfg.vnf == VnfKind::SnortInline);
    CHECK(cfg.vnfs.size() == 3);
    CHECK(cfg.grid.vcpu.min == 0.6);
    CHECK(cfg.grid.vcpu.max == 1.8);
    CHECK(cfg.grid.mem.min == 1000.0);
    CHECK(cfg.grid.mem.max == 1600.0);
    CHECK(cfg.grid.lc.min == 400.0);
    CHECK(cfg.grid.lc.max == 800.0);
    CHECK(cfg.targets.cpu_util_lo == 90.0);
    CHECK(cfg.targets.cpu_util_hi == 100.0);
    CHECK(cfg.targets.mem_util_max == 98.0);
    CHECK(cfg.targets.latency_max == 7.5);
    CHECK(cfg.agent.alpha == 0.1);
    CHECK(cfg.agent.gamma == 0.99);
    CHECK(cfg.agent.epsilon_decay == 0.9999);
    CHECK(cfg.agent.epsilon_min == 0.1);
    CHECK(cfg.agent.episodes == 2000);
    CHECK(cfg.scenario_weight_list.size() == 13);

    // per-vnf defaults resolve through the config
    CHECK(cfg.reward_config_for(VnfKind::VFw).beta_lc == 9.0);
    CHECK(cfg.reward_config_for(VnfKind::SnortInline).beta_cpu == 8.0);
}

TEST_CASE("config values parse and validate") {
    SECTION("overrides land in the right fields") {
        const auto path = write_file("full.cfg", R"(
# overrides
[experiment]
vnf = vfw
seeds = 4,5
noise = off
[agent]
alpha = 0.2
episodes = 100
[rewards]
beta_mem = 6.5
[weights]
w_cpu = 0.5
w_mem = 0.25
w_lc = 0.25
)");
        const ExperimentConfig cfg = load_config(path.string());
        CHECK(cfg.vnf == VnfKind::VFw);
        CHECK(cfg.seeds == std::vector<std::uint64_t>{4, 5});
        CHECK_FALSE(cfg.noise);
        CHECK(cfg.agent.alpha == 0.2);
        CHECK(cfg.agent.episodes == 100);
        CHECK(cfg.reward_config_for(VnfKind::VFw).beta_mem == 6.5);
        CHECK(cfg.agent.weights.w_cpu == 0.5);
        CHECK(cfg.model_for(VnfKind::VFw).noise_std == 0.0);
    }

    SECTION("weights that do not sum to one are rejected") {
        const auto path = write_file("badweights.cfg", "[weights]\nw_cpu = 0.5\nw_mem = 0.3\nw_lc = 0.1\n");
        CHECK_THROWS_AS(load_config(path.string()), ValidationError);
    }

    SECTION("unknown vnf kinds are rejected with the enumerated error") {
        const auto path = write_file("badvnf.cfg", "[experiment]\nvnf = load_balancer\n");
        CHECK_THROWS_MATCHES(load_config(path.string()), ValidationError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("unknown VNF kind")));
    }

    SECTION("unknown keys are rejected") {
        const auto path = write_file("badkey.cfg", "[agent]\nalfa = 0.3\n");
        CHECK_THROWS_AS(load_config(path.string()), ValidationError);
    }

    SECTION("parse errors carry the line number") {
        const auto path = write_file("syntax.cfg", "[agent]\nalpha 0.3\n");
        CHECK_THROWS_MATCHES(
            load_config(path.string()), ParseError,
            Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring(":2")));
    }

    SECTION("empty seed list is rejected") {
        const auto path = write_file("noseeds.cfg", "[experiment]\nseeds =\n");
        CHECK_THROWS_AS(load_config(path.string()), ValidationError);
    }
}

TEST_CASE("a manifest is itself a loadable config reproducing the run") {
    ExperimentConfig cfg;
    cfg.vnf = VnfKind::SnortPassive;
    cfg.seeds = {11, 12};
    cfg.agent.episodes = 42;
    cfg.beta_lc = 8.5;
    cfg.scenario_weight_list = {{1.0, 0.0, 0.0}, {0.0, 0.5, 0.5}};

    const fs::path path = tmp_dir() / "manifest.txt";
    write_manifest(path.string(), cfg, "scenarios");

    const ExperimentConfig reloaded = load_config(path.string());
    CHECK(serialize_config(reloaded) == serialize_config(cfg));
    CHECK(config_hash(reloaded) == config_hash(cfg));
}

TEST_CASE("config hash tracks semantic changes") {
    ExperimentConfig a, b;
    CHECK(config_hash(a) == config_hash(b));
    b.agent.alpha = 0.2;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("csv readers enforce their schema header") {
    const fs::path path = tmp_dir() / "dataset.csv";

    std::vector<ProfilingRecord> records(2);
    records[0].resources = {0.8, 1100.0, 450.0};
    records[0].input_rate = 240.0;
    records[0].kpi = {88.0, 81.0, 1.2, 236.5};
    records[0].kpi_ok = true;
    records[1].resources = {1.4, 1500.0, 600.0};
    records[1].input_rate = 410.0;
    records[1].kpi = {97.0, 66.0, 2.1, 402.0};
    records[1].kpi_ok = false;
    write_dataset(path.string(), records);

    SECTION("round trip preserves every field") {
        const auto back = read_dataset(path.string());
        REQUIRE(back.size() == 2);
        CHECK(back[0].resources == records[0].resources);
        CHECK(back[0].input_rate == records[0].input_rate);
        CHECK(back[0].kpi.latency == records[0].kpi.latency);
        CHECK(back[0].kpi_ok);
        CHECK_FALSE(back[1].kpi_ok);
    }

    SECTION("schema mismatch is rejected") {
        const fs::path wrong = tmp_dir() / "wrong.csv";
        std::ofstream out(wrong);
        out << "a,b,c\n1,2,3\n";
        out.close();
        CHECK_THROWS_AS(read_dataset(wrong.string()), ParseError);
    }
}

TEST_CASE("q-table snapshots round-trip through csv") {
    ResourceGrid grid;
    QTableSet qset;
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        StateKey key;
        key.vcpu_idx = static_cast<std::int8_t>(rng.index(7));
        key.mem_idx = static_cast<std::int8_t>(rng.index(7));
        key.lc_idx = static_cast<std::int8_t>(rng.index(9));
        key.kpi_flags = static_cast<std::uint8_t>(rng.index(16));
        const std::int32_t packed = packed_key(key, grid);
        for (int a = 0; a < kActionCount; ++a)
            for (Resource o : kResources)
                qset.update(o, packed, a, rng.uniform());
    }

    const fs::path path = tmp_dir() / "qtables.csv";
    write_qtables(path.string(), qset, grid);
    const QTableSet back = read_qtables(path.string(), grid);

    for (Resource o : kResources)
        for (const auto& [key, values] : qset.table(o))
            for (int a = 0; a < kActionCount; ++a)
                CHECK(back.q(o, key, a) == Catch::Approx(values[a]).margin(1e-9));
}

TEST_CASE("error and scenario csv round-trips") {
    SECTION("error rows") {
        const fs::path path = tmp_dir() / "errors.csv";
        std::vector<ErrorRow> rows = {{25, "rl", "vcpu", 12.5, 1.25},
                                      {25, "mlp", "mem", -7.0, 2.0}};
        write_errors(path.string(), rows);
        const auto back = read_errors(path.string());
        REQUIRE(back.size() == 2);
        CHECK(back[0].model == "rl");
        CHECK(back[1].error_pct == -7.0);
    }

    SECTION("scenario rows") {
        const fs::path path = tmp_dir() / "scen.csv";
        ScenarioResult row;
        row.weights = {0.5, 0.25, 0.25};
        row.vcpu_pct = 40.0;
        row.mem_pct = 68.75;
        row.or_lc_pct = 92.5;
        row.err_vcpu = 3.0;
        write_scenarios(path.string(), {row});
        const auto back = read_scenarios(path.string());
        REQUIRE(back.size() == 1);
        CHECK(back[0].weights.w_cpu == 0.5);
        CHECK(back[0].or_lc_pct == 92.5);
    }
}
