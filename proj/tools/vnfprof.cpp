// Command-line front end: oracle / offline / train / bench / scenarios.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vnfprof/config.hpp"
#include "vnfprof/experiments.hpp"
#include "vnfprof/version.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string vnf;
    std::string weights;
    std::string seed;
    std::string out;
    std::string noise;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "experiment config file");
    cmd->add_option("--vnf", args.vnf, "VNF kind: snort_inline, snort_passive or vfw");
    cmd->add_option("--weights", args.weights, "scalarisation weights w_cpu,w_mem,w_lc");
    cmd->add_option("--seed", args.seed, "comma-separated master seed list");
    cmd->add_option("--out", args.out, "output directory");
    cmd->add_option("--noise", args.noise, "measurement noise: on or off")
        ->check(CLI::IsMember({"on", "off"}));
}

vnfprof::ExperimentConfig resolve_config(const CommonArgs& args) {
    vnfprof::ExperimentConfig cfg;
    if (!args.config_path.empty())
        cfg = vnfprof::load_config(args.config_path);
    if (!args.vnf.empty()) {
        cfg.vnf = vnfprof::vnf_from_name(args.vnf);
        cfg.vnfs = {cfg.vnf};
    }
    if (!args.weights.empty()) {
        const auto parts = vnfprof::detail::split(args.weights, ',');
        if (parts.size() != 3)
            throw vnfprof::ValidationError("--weights expects w_cpu,w_mem,w_lc");
        cfg.agent.weights = {vnfprof::detail::parse_double(parts[0], "--weights"),
                             vnfprof::detail::parse_double(parts[1], "--weights"),
                             vnfprof::detail::parse_double(parts[2], "--weights")};
    }
    if (!args.seed.empty()) {
        cfg.seeds.clear();
        for (const auto& s : vnfprof::detail::split(args.seed, ','))
            cfg.seeds.push_back(
                static_cast<std::uint64_t>(vnfprof::detail::parse_long(s, "--seed")));
    }
    if (!args.out.empty())
        cfg.out_dir = args.out;
    if (!args.noise.empty())
        cfg.noise = args.noise == "on";
    cfg.validate();
    return cfg;
}

void report(const vnfprof::CommandResult& result) {
    for (const std::string& path : result.artifacts)
        std::printf("wrote %s\n", path.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"VNF profiler experiment runner"};
    app.set_version_flag("--version", vnfprof::kVersion);
    app.require_subcommand(1);

    CommonArgs oracle_args;
    double fix_vcpu = -1.0, fix_mem = -1.0, fix_lc = -1.0;
    CLI::App* oracle = app.add_subcommand("oracle", "exhaustive grid search");
    add_common(oracle, oracle_args);
    oracle->add_option("--fix-vcpu", fix_vcpu, "also write the slice at this vcpu value");
    oracle->add_option("--fix-mem", fix_mem, "also write the slice at this memory value");
    oracle->add_option("--fix-lc", fix_lc, "also write the slice at this link capacity");

    CommonArgs offline_args;
    CLI::App* offline = app.add_subcommand("offline", "offline profiling dataset");
    add_common(offline, offline_args);

    CommonArgs train_args;
    std::string study;
    std::string warm_start;
    CLI::App* train = app.add_subcommand("train", "train the learning agent");
    add_common(train, train_args);
    train->add_option("--study", study,
                      "single-resource reward study: vcpu, mem or lc")
        ->check(CLI::IsMember({"vcpu", "mem", "lc"}));
    train->add_option("--warm-start", warm_start,
                      "profiling dataset CSV for the baseline start allocation");

    CommonArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "learning vs regression benchmark");
    add_common(bench, bench_args);

    CommonArgs scen_args;
    CLI::App* scenarios = app.add_subcommand("scenarios", "full scenario weight sweep");
    add_common(scenarios, scen_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (oracle->parsed()) {
            vnfprof::OracleSliceFilter slice;
            if (fix_vcpu >= 0.0) slice.vcpu = fix_vcpu;
            if (fix_mem >= 0.0) slice.mem = fix_mem;
            if (fix_lc >= 0.0) slice.lc = fix_lc;
            report(vnfprof::run_oracle(resolve_config(oracle_args), slice));
        } else if (offline->parsed()) {
            report(vnfprof::run_offline(resolve_config(offline_args)));
        } else if (train->parsed()) {
            vnfprof::TrainOptions options;
            if (!study.empty()) {
                if (study == "vcpu") options.study = vnfprof::Resource::Vcpu;
                if (study == "mem") options.study = vnfprof::Resource::Mem;
                if (study == "lc") options.study = vnfprof::Resource::Lc;
            }
            if (!warm_start.empty())
                options.warm_start_dataset = warm_start;
            report(vnfprof::run_train(resolve_config(train_args), options));
        } else if (bench->parsed()) {
            report(vnfprof::run_bench(resolve_config(bench_args)));
        } else if (scenarios->parsed()) {
            report(vnfprof::run_scenarios(resolve_config(scen_args)));
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
