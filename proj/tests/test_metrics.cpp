#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "vnfprof/metrics.hpp"

using namespace vnfprof;

namespace {

std::vector<EpisodePoint> constant_trace(std::size_t n, const ResourceVector& r,
                                         double output) {
    std::vector<EpisodePoint> t(n);
    for (auto& p : t) {
        p.resources = r;
        p.output_rate = output;
    }
    return t;
}

} // namespace

TEST_CASE("percentage_error sign convention") {
    CHECK(percentage_error(1.0, 0.8) == Catch::Approx(25.0));
    CHECK(percentage_error(0.8, 0.8) == 0.0);
    CHECK(percentage_error(0.76, 0.8) == Catch::Approx(-5.0));
    CHECK_THROWS_AS(percentage_error(1.0, 0.0), ValidationError);
}

TEST_CASE("percentage_error is antisymmetric about the optimum") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const double optimal = rng.uniform(0.5, 2.0);
        const double allocated = rng.uniform(0.1, 4.0);
        CHECK(percentage_error(allocated, optimal) ==
              Catch::Approx(-percentage_error(2.0 * optimal - allocated, optimal)));
    }
}

TEST_CASE("ci95 mean and half-width") {
    SECTION("constant samples have zero half-width") {
        const auto [mean, half] = ci95({4.0, 4.0, 4.0, 4.0});
        CHECK(mean == 4.0);
        CHECK(half == 0.0);
    }

    SECTION("frozen value for the alternating sample") {
        std::vector<double> xs;
        for (int i = 0; i < 50; ++i) {
            xs.push_back(0.0);
            xs.push_back(1.0);
        }
        const auto [mean, half] = ci95(xs);
        CHECK(mean == Catch::Approx(0.5));
        CHECK(half == Catch::Approx(0.0985).margin(5e-4));
    }

    SECTION("half-width shrinks as one over sqrt(n)") {
        Rng rng(17);
        std::vector<double> xs;
        for (int i = 0; i < 250; ++i)
            xs.push_back(rng.gaussian(10.0, 2.0));
        std::vector<double> xs4 = xs;
        for (int rep = 0; rep < 3; ++rep)
            xs4.insert(xs4.end(), xs.begin(), xs.end());
        const auto [m1, h1] = ci95(xs);
        const auto [m4, h4] = ci95(xs4);
        CHECK(h4 == Catch::Approx(h1 / 2.0).epsilon(0.01));
    }

    SECTION("fewer than two samples is a size error") {
        CHECK_THROWS_AS(ci95({1.0}), SizeError);
        CHECK_THROWS_AS(ci95({}), SizeError);
    }
}

TEST_CASE("steady_state_summary averages the final window") {
    SECTION("constant trace reproduces the documented row shape") {
        const auto trace = constant_trace(100, {0.8, 1600.0, 800.0}, 0.3438 * 800.0);
        const SteadyState s = steady_state_summary(trace, 10);
        CHECK(s.vcpu_pct() == Catch::Approx(40.0));
        CHECK(s.mem_pct() == Catch::Approx(100.0));
        CHECK(s.or_lc_pct() == Catch::Approx(34.38));
    }

    SECTION("window equal to the trace is the plain mean") {
        std::vector<EpisodePoint> trace;
        for (int i = 0; i < 10; ++i) {
            EpisodePoint p;
            p.resources = {0.6 + 0.02 * i, 1000.0, 400.0};
            p.output_rate = 100.0 + i;
            trace.push_back(p);
        }
        const SteadyState s = steady_state_summary(trace, trace.size());
        CHECK(s.vcpu == Catch::Approx(0.69));
        CHECK(s.output_rate == Catch::Approx(104.5));
    }

    SECTION("summary ignores everything before the window") {
        auto trace = constant_trace(50, {1.8, 1600.0, 800.0}, 700.0);
        const auto tail = constant_trace(10, {0.8, 1100.0, 450.0}, 400.0);
        trace.insert(trace.end(), tail.begin(), tail.end());
        const SteadyState s = steady_state_summary(trace, 10);
        CHECK(s.vcpu == Catch::Approx(0.8));
        CHECK(s.lc == Catch::Approx(450.0));
    }

    SECTION("window permutation invariance") {
        std::vector<EpisodePoint> trace;
        Rng rng(9);
        for (int i = 0; i < 40; ++i) {
            EpisodePoint p;
            p.resources = {0.6 + 0.2 * static_cast<double>(rng.index(7)), 1300.0, 600.0};
            p.output_rate = rng.uniform(100.0, 500.0);
            trace.push_back(p);
        }
        const SteadyState a = steady_state_summary(trace, 40);
        std::shuffle(trace.begin(), trace.end(), rng.engine());
        const SteadyState b = steady_state_summary(trace, 40);
        CHECK(a.vcpu == Catch::Approx(b.vcpu));
        CHECK(a.output_rate == Catch::Approx(b.output_rate));
    }

    SECTION("short trace is a size error") {
        const auto trace = constant_trace(5, {0.8, 1100.0, 450.0}, 400.0);
        CHECK_THROWS_AS(steady_state_summary(trace, 10), SizeError);
        CHECK_THROWS_AS(steady_state_summary(trace, 0), SizeError);
    }
}

TEST_CASE("steady percentages invert back to raw values") {
    const auto trace = constant_trace(20, {0.8, 1100.0, 450.0}, 400.0);
    const SteadyState s = steady_state_summary(trace, 5);
    CHECK(s.vcpu_pct() / 100.0 * kHostVcpuCores == Catch::Approx(0.8));
    CHECK(s.mem_pct() / 100.0 * kHostMemMb == Catch::Approx(1100.0));
}

TEST_CASE("the scenario matrix is the documented 13-vector set") {
    const auto weights = scenario_weights();
    REQUIRE(weights.size() == 13);
    for (const WeightVector& w : weights)
        CHECK_NOTHROW(w.validate());
    CHECK(weights.front().w_cpu == 1.0);
    CHECK(weights[2].w_lc == 1.0);
    CHECK(weights.back().w_cpu == Catch::Approx(1.0 / 3.0));

    // all distinct
    for (std::size_t i = 0; i < weights.size(); ++i)
        for (std::size_t j = i + 1; j < weights.size(); ++j) {
            const bool same = weights[i].w_cpu == weights[j].w_cpu &&
                              weights[i].w_mem == weights[j].w_mem &&
                              weights[i].w_lc == weights[j].w_lc;
            CHECK_FALSE(same);
        }
}

TEST_CASE("steady window default is the final tenth") {
    CHECK(steady_window(2000) == 200);
    CHECK(steady_window(9) == 1);
    CHECK(steady_window(10) == 1);
}
