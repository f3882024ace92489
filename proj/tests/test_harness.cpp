// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ccpush/harness.hpp"
#include "test_util.hpp"

using namespace ccpush;
using test::make_cfg;

namespace {

TrialSpec homogeneous_spec(int num_contents, int num_users, std::int64_t content_bits,
                           double cache_contents) {
    TrialSpec spec;
    spec.system = make_cfg(num_contents, num_users, content_bits, cache_contents);
    spec.fading.rice_factor = 1e9;      // no fading
    spec.fading.pathloss_exponent = 0;  // every user at noise n
    return spec;
}

TrialSpec faded_spec(int num_contents, int num_users, std::int64_t content_bits,
                     double cache_contents) {
    TrialSpec spec;
    spec.system = make_cfg(num_contents, num_users, content_bits, cache_contents);
    return spec;
}

}  // namespace

TEST_CASE("two-user homogeneous cell reproduces the example sizes") {
    TrialSpec spec = homogeneous_spec(2, 2, 1000, 1.0);
    const ChannelScenario scenario =
        sample_scenario(2, spec.fading, spec.base_psd, 1);
    const RequestVector requests{{1, 0}};

    const OptInstance coded =
        coded_instance(spec.system, scenario, requests, SizesSource::Analytic, 1);
    REQUIRE(coded.count() == 3);
    CHECK(coded.size_bits[0] == doctest::Approx(250.0));  // pair XOR
    CHECK(coded.size_bits[1] == doctest::Approx(250.0));  // two unicasts
    CHECK(coded.size_bits[2] == doctest::Approx(250.0));
    CHECK(coded.worst_noise[0] == doctest::Approx(2.0));

    const OptInstance baseline =
        baseline_instance(spec.system, scenario, requests, SizesSource::Analytic, 1);
    REQUIRE(baseline.count() == 2);
    CHECK(baseline.size_bits[0] == doctest::Approx(500.0));
    CHECK(baseline.size_bits[1] == doctest::Approx(500.0));

    CHECK(coded.size_bits.sum() < baseline.size_bits.sum());

    const TrialObservation obs = run_single_trial(spec, 1);
    CHECK(obs.traffic_bits == doctest::Approx(750.0));
    CHECK(obs.throughput_bps * obs.total_time_s ==
          doctest::Approx(useful_bits(spec.system)).epsilon(1e-9));
}

TEST_CASE("with nothing cached the coded and baseline schemes coincide") {
    for (Mode mode : {Mode::TimeDivision, Mode::FrequencyDivision}) {
        TrialSpec spec = faded_spec(3, 3, 1000, 0.0);
        spec.mode = mode;
        spec.scheme = Scheme::Coded;
        const TrialResult coded = run_trial(spec);
        spec.scheme = Scheme::Baseline;
        const TrialResult baseline = run_trial(spec);
        CHECK(coded.mean_throughput_bps ==
              doctest::Approx(baseline.mean_throughput_bps).epsilon(1e-6));
    }
}

TEST_CASE("analytic and bit-level sizes agree at large F") {
    for (Mode mode : {Mode::TimeDivision, Mode::FrequencyDivision}) {
        TrialSpec spec = faded_spec(3, 4, 100000, 1.2);
        spec.mode = mode;
        spec.sizes_source = SizesSource::Analytic;
        const TrialResult analytic = run_trial(spec);
        spec.sizes_source = SizesSource::BitLevel;
        const TrialResult bitlevel = run_trial(spec);
        CHECK(std::abs(analytic.mean_total_time_s - bitlevel.mean_total_time_s) <=
              0.02 * analytic.mean_total_time_s);
    }
}

TEST_CASE("per-trial observations satisfy the goodput identity") {
    TrialSpec spec = faded_spec(4, 5, 2000, 2.0);
    spec.trials = 4;
    for (Scheme scheme : {Scheme::Coded, Scheme::Baseline}) {
        for (Mode mode : {Mode::TimeDivision, Mode::FrequencyDivision}) {
            spec.scheme = scheme;
            spec.mode = mode;
            for (int t = 0; t < spec.trials; ++t) {
                const TrialObservation obs = run_single_trial(spec, spec.seed + t);
                CHECK(obs.throughput_bps * obs.total_time_s ==
                      doctest::Approx(useful_bits(spec.system)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("paired seeds: fd is never slower than td") {
    TrialSpec spec = faded_spec(3, 5, 5000, 1.0);
    for (Scheme scheme : {Scheme::Coded, Scheme::Baseline}) {
        spec.scheme = scheme;
        for (int t = 0; t < 6; ++t) {
            spec.mode = Mode::TimeDivision;
            const TrialObservation td = run_single_trial(spec, 100 + t);
            spec.mode = Mode::FrequencyDivision;
            const TrialObservation fd = run_single_trial(spec, 100 + t);
            CHECK(fd.total_time_s <= td.total_time_s * (1 + 1e-6));
        }
    }
}

TEST_CASE("throughput is monotone in power and bandwidth per fixed seed") {
    TrialSpec spec = faded_spec(4, 4, 2000, 1.2);
    spec.fd_tol = 1e-9;
    for (Scheme scheme : {Scheme::Coded, Scheme::Baseline}) {
        for (Mode mode : {Mode::TimeDivision, Mode::FrequencyDivision}) {
            spec.scheme = scheme;
            spec.mode = mode;
            double previous = 0.0;
            for (double power : {1.0, 2.0, 4.0, 8.0}) {
                spec.system.power_w = power;
                const double throughput = run_single_trial(spec, 5).throughput_bps;
                CHECK(throughput >= previous * (1 - 1e-9));
                previous = throughput;
            }
            spec.system.power_w = 10.0;
            previous = 0.0;
            for (double bandwidth : {2.5e5, 5e5, 1e6, 2e6}) {
                spec.system.bandwidth_hz = bandwidth;
                spec.system.subcarrier_bw_hz = bandwidth / spec.system.subcarriers;
                const double throughput = run_single_trial(spec, 5).throughput_bps;
                CHECK(throughput >= previous * (1 - 1e-9));
                previous = throughput;
            }
            spec.system = make_cfg(4, 4, 2000, 1.2);
        }
    }
}

TEST_CASE("sweep emits one row per value, scheme and mode, values sorted") {
    TrialSpec spec = faded_spec(2, 2, 1000, 1.0);
    const std::vector<SweepRow> rows = sweep(spec, SweepParameter::Power, {8.0, 2.0, 4.0});
    REQUIRE(rows.size() == 12);  // 3 values x 2 schemes x 2 modes
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].parameter == "power");
        CHECK_FALSE(rows[i].failed);
        if (i > 0) CHECK(rows[i - 1].value <= rows[i].value);
    }
    CHECK(rows.front().value == 2.0);
    CHECK(rows.back().value == 8.0);
}

TEST_CASE("single-point sweep equals a direct trial") {
    TrialSpec spec = faded_spec(2, 3, 1000, 0.8);
    spec.trials = 3;
    const std::vector<SweepRow> rows = sweep(spec, SweepParameter::Power, {6.0});
    REQUIRE(rows.size() == 4);
    TrialSpec direct = spec;
    direct.system.power_w = 6.0;
    direct.scheme = Scheme::Coded;
    direct.mode = Mode::TimeDivision;
    const TrialResult expected = run_trial(direct);
    CHECK(rows[0].mean_throughput_bps == doctest::Approx(expected.mean_throughput_bps));
    CHECK(rows[0].mean_total_time_s == doctest::Approx(expected.mean_total_time_s));
}

TEST_CASE("a failing grid point is recorded in-row and the sweep continues") {
    TrialSpec spec = faded_spec(2, 2, 1000, 1.0);
    const std::vector<SweepRow> rows =
        sweep(spec, SweepParameter::CacheFraction, {0.5, 1.5});  // alpha = 1.5 is invalid
    REQUIRE(rows.size() == 8);
    int failed = 0;
    for (const SweepRow& row : rows) {
        if (row.value == 1.5) {
            CHECK(row.failed);
            CHECK(std::isnan(row.mean_throughput_bps));
            ++failed;
        } else {
            CHECK_FALSE(row.failed);
        }
    }
    CHECK(failed == 4);
}

TEST_CASE("coded beats baseline at a large cache under FD (paired seeds)") {
    TrialSpec spec = faded_spec(4, 4, 10000, 0.0);
    spec.mode = Mode::FrequencyDivision;
    spec.trials = 10;
    const std::vector<SweepRow> rows =
        sweep(spec, SweepParameter::CacheFraction, {0.8});
    REQUIRE(rows.size() == 4);
    double coded_fd = 0.0, baseline_fd = 0.0;
    for (const SweepRow& row : rows) {
        if (row.mode != Mode::FrequencyDivision) continue;
        (row.scheme == Scheme::Coded ? coded_fd : baseline_fd) = row.mean_throughput_bps;
    }
    CHECK(coded_fd >= baseline_fd);
}

TEST_CASE("sweep csv has the documented columns") {
    TrialSpec spec = faded_spec(2, 2, 1000, 1.0);
    const std::vector<SweepRow> rows = sweep(spec, SweepParameter::Users, {2.0});
    std::ostringstream out;
    write_sweep_csv(rows, out);
    const std::string text = out.str();
    CHECK(text.rfind("parameter,value,scheme,mode,sizes_source,trials,mean_throughput_bps,"
                     "stderr_bps,mean_total_time_s,traffic_bits,seed0\n",
                     0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}

TEST_CASE("bit-level mode rejects large user counts") {
    TrialSpec spec = faded_spec(2, 13, 1000, 1.0);
    spec.sizes_source = SizesSource::BitLevel;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("distinct-request mode needs enough contents") {
    TrialSpec spec = faded_spec(2, 3, 1000, 1.0);
    spec.distinct_requests = true;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = faded_spec(4, 3, 1000, 1.0);
    spec.distinct_requests = true;
    spec.sizes_source = SizesSource::BitLevel;
    CHECK_NOTHROW(run_trial(spec));
}

TEST_CASE("throughput gain equals the inverse completion-time ratio") {
    TrialSpec spec = faded_spec(4, 4, 5000, 1.6);
    for (Mode mode : {Mode::TimeDivision, Mode::FrequencyDivision}) {
        spec.mode = mode;
        spec.scheme = Scheme::Coded;
        const TrialObservation coded = run_single_trial(spec, 21);
        spec.scheme = Scheme::Baseline;
        const TrialObservation baseline = run_single_trial(spec, 21);
        // both schemes deliver the same useful bits, so the gain is a pure
        // time ratio
        CHECK(coded.throughput_bps / baseline.throughput_bps ==
              doctest::Approx(baseline.total_time_s / coded.total_time_s).epsilon(1e-12));
    }
}

TEST_CASE("coded throughput falls from K=2 to K=8 (saturation onset)") {
    TrialSpec spec = faded_spec(10, 2, 100000, 3.0);
    spec.system.power_w = 1e12;
    spec.trials = 10;
    spec.scheme = Scheme::Coded;
    double previous = 0.0;
    for (int num_users : {2, 4, 8}) {
        spec.system.num_users = num_users;
        const double throughput = run_trial(spec).mean_throughput_bps;
        if (previous > 0.0) CHECK(throughput < previous);
        previous = throughput;
    }
}

TEST_CASE("identical sweeps serialize to byte-identical csv") {
    TrialSpec spec = faded_spec(3, 3, 1000, 1.0);
    spec.trials = 2;
    std::ostringstream first, second;
    write_sweep_csv(sweep(spec, SweepParameter::Power, {2.0, 8.0}), first);
    write_sweep_csv(sweep(spec, SweepParameter::Power, {2.0, 8.0}), second);
    CHECK(first.str() == second.str());
    CHECK(first.str().find("nan") == std::string::npos);
}
