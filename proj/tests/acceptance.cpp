// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line with
// the measured quantities; the exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ccpush/analytic_model.hpp"
#include "ccpush/cache_codec.hpp"
#include "ccpush/channel.hpp"
#include "ccpush/harness.hpp"
#include "ccpush/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ccpush;
using test::binomial;
using test::make_cfg;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += why;
        }
    }
    void note(const std::string& text) {
        if (!detail.empty()) detail += "; ";
        detail += text;
    }
};

std::string fmt(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

// --- criterion 1: Example-1 exactness --------------------------------------

Outcome example1_exactness() {
    Outcome outcome;
    const auto cfg = make_cfg(2, 2, 10000, 1.0);
    const double f = static_cast<double>(cfg.content_bits);

    const double coded = coded_total_traffic(cfg).bits;
    const double baseline = baseline_total_traffic(cfg);
    outcome.require(std::abs(coded - 0.75 * f) <= 1e-12 * 0.75 * f,
                    "coded analytic " + fmt(coded) + " != 0.75 F");
    outcome.require(std::abs(baseline - 1.0 * f) <= 1e-12 * f,
                    "baseline analytic " + fmt(baseline) + " != 1.0 F");

    const int seeds = 200;
    const RequestVector requests{{1, 0}};
    double sum = 0.0, sum_sq = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const ContentLibrary library = make_library(cfg, 1 + s);
        const PlacementState placement = make_placement(cfg, 1 + s);
        const double traffic =
            static_cast<double>(build_delivery_plan(library, placement, requests).total_bits());
        sum += traffic;
        sum_sq += traffic * traffic;
    }
    const double mean = sum / seeds;
    const double sample_std =
        std::sqrt(std::max(0.0, (sum_sq - sum * sum / seeds) / (seeds - 1)));
    // The XOR payload is the max of the two constituent segments, so the
    // realized mean sits a sqrt(F)-scale hair above Eq-1; at F = 1e4 that gap
    // lies well inside three per-seed deviations.
    outcome.require(std::abs(mean - coded) <= 3.0 * sample_std,
                    "realized mean " + fmt(mean) + " outside " + fmt(coded) + " +- 3*" +
                        fmt(sample_std));
    outcome.note("realized mean " + fmt(mean) + " vs Eq-1 " + fmt(coded) + " (sd " +
                 fmt(sample_std) + ", " + std::to_string(seeds) + " seeds)");
    return outcome;
}

// --- criterion 2: decode soundness ------------------------------------------

Outcome decode_soundness() {
    Outcome outcome;
    long universes = 0, decodes = 0, failures = 0;
    for (int num_users = 2; num_users <= 6; ++num_users) {
        for (int num_contents = 2; num_contents <= 4; ++num_contents) {
            for (double cache : {0.5, 1.0, num_contents - 0.5}) {
                const auto cfg = make_cfg(num_contents, num_users, 512, cache);
                for (int s = 0; s < 50; ++s) {
                    const std::uint64_t seed =
                        derive_seed(1000 + s, (num_users << 8) | num_contents) ^
                        static_cast<std::uint64_t>(cache * 16);
                    const ContentLibrary library = make_library(cfg, seed);
                    const PlacementState placement = make_placement(cfg, seed);
                    const RequestVector requests = draw_requests(cfg, seed + 1);
                    const DeliveryPlan plan =
                        build_delivery_plan(library, placement, requests);
                    ++universes;
                    for (int user = 0; user < num_users; ++user) {
                        ++decodes;
                        try {
                            if (!(decode_user(plan, placement, library, requests, user) ==
                                  library.contents[requests.d[user]].bits))
                                ++failures;
                        } catch (const DecodeError&) {
                            ++failures;
                        }
                    }
                }
            }
        }
    }
    outcome.require(failures == 0, std::to_string(failures) + " decode failures");
    outcome.note(std::to_string(decodes) + " decodes across " + std::to_string(universes) +
                 " universes, " + std::to_string(failures) + " failures");
    return outcome;
}

// --- criterion 3: traffic identity ------------------------------------------

Outcome traffic_identity() {
    Outcome outcome;
    int checked = 0;
    double worst = 0.0;
    for (int num_users = 1; num_users <= 16; ++num_users) {
        for (double alpha = 0.05; alpha < 0.96; alpha += 0.05) {
            const auto cfg = make_cfg(20, num_users, 1000, alpha * 20.0);
            double sum = 0.0;
            for (int s = 1; s <= num_users; ++s)
                sum += binomial(num_users, s) * expected_payload_size(cfg, s);
            const double closed_form = coded_total_traffic(cfg).bits;
            worst = std::max(worst, std::abs(sum - closed_form) / closed_form);
            ++checked;
        }
    }
    outcome.require(worst <= 1e-12, "worst relative mismatch " + fmt(worst));
    outcome.note(std::to_string(checked) + " lattice points, worst relative gap " + fmt(worst));
    return outcome;
}

// --- criterion 4: TD oracle --------------------------------------------------

OptInstance random_td_instance(Rng& rng) {
    OptInstance inst;
    inst.size_bits.resize(3);
    inst.worst_noise.resize(3);
    for (int i = 0; i < 3; ++i) {
        inst.size_bits[i] = 50.0 + 450.0 * rng.uniform();
        inst.worst_noise[i] = 0.5 + 7.5 * rng.uniform();
    }
    inst.power_w = 10.0;
    inst.bandwidth_hz = 1.0;
    return inst;
}

Outcome td_oracle() {
    Outcome outcome;
    Rng rng(20240401);
    double worst_gap = 0.0;
    long perturbation_wins = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const OptInstance inst = random_td_instance(rng);
        const TdAllocation alloc = td_allocate(inst);
        const double grid_best = test::td_grid_oracle(inst, 1e-3);
        outcome.require(alloc.total_time_s <= grid_best * (1 + 1e-12),
                        "closed form above the grid oracle on trial " + std::to_string(trial));
        worst_gap = std::max(worst_gap,
                             std::abs(grid_best - alloc.total_time_s) / alloc.total_time_s);
        for (int p = 0; p < 1000; ++p) {
            const std::vector<double> tau = test::random_simplex(3, rng);
            if (test::td_objective(inst, tau) < alloc.total_time_s * (1 - 1e-12))
                ++perturbation_wins;
        }
    }
    outcome.require(worst_gap <= 1e-4, "grid gap " + fmt(worst_gap) + " exceeds 1e-4");
    outcome.require(perturbation_wins == 0,
                    std::to_string(perturbation_wins) + " perturbations beat tau*");
    outcome.note("20 instances, worst grid gap " + fmt(worst_gap) +
                 ", 20000 perturbations, none beat tau*");
    return outcome;
}

// --- criterion 5: FD oracle --------------------------------------------------

Outcome fd_oracle() {
    Outcome outcome;
    Rng rng(20240402);
    double worst_gap = 0.0, worst_spread = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const OptInstance inst = test::random_l3_instance(rng);
        const FdAllocation alloc = fd_allocate(inst, 1e-9);
        const double grid_best = test::fd_grid_oracle(inst, 200);
        outcome.require(alloc.total_time_s <= grid_best * (1 + 1e-9),
                        "bisection above the lattice oracle on trial " + std::to_string(trial));
        worst_gap = std::max(worst_gap,
                             std::abs(grid_best - alloc.total_time_s) / grid_best);
        for (Eigen::Index i = 0; i < inst.count(); ++i) {
            const double time = inst.size_bits[i] /
                                shannon_rate(alloc.bandwidth_hz[i], alloc.power_w[i],
                                             inst.worst_noise[i]);
            worst_spread =
                std::max(worst_spread,
                         std::abs(time - alloc.total_time_s) / alloc.total_time_s);
        }
    }
    outcome.require(worst_gap <= 0.01, "lattice gap " + fmt(worst_gap) + " exceeds 1%");
    outcome.require(worst_spread <= 1e-9,
                    "per-transmission times spread " + fmt(worst_spread) + " beyond tol");
    outcome.note("10 instances, worst lattice gap " + fmt(100 * worst_gap) +
                 "%, equal-time spread " + fmt(worst_spread));
    return outcome;
}

// --- criterion 6: FD dominance -----------------------------------------------

Outcome fd_dominance() {
    Outcome outcome;
    Rng rng(20240403);
    int violations = 0;
    double worst_excess = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const int count = 2 + static_cast<int>(rng.below(30));  // L <= 31
        OptInstance inst;
        inst.size_bits.resize(count);
        inst.worst_noise.resize(count);
        bool any = false;
        for (int i = 0; i < count; ++i) {
            const bool zero = rng.uniform() < 0.15 && i > 0;
            inst.size_bits[i] = zero ? 0.0 : 10.0 + 990.0 * rng.uniform();
            any = any || !zero;
            inst.worst_noise[i] = 0.5 + 9.5 * rng.uniform();
        }
        if (!any) inst.size_bits[0] = 100.0;
        inst.power_w = 1.0 + 99.0 * rng.uniform();
        inst.bandwidth_hz = 0.1 + 9.9 * rng.uniform();

        const double td_time = td_allocate(inst).total_time_s;
        const double fd_time = fd_allocate(inst, 1e-8).total_time_s;
        if (fd_time > td_time * (1 + 1e-6)) ++violations;
        worst_excess = std::max(worst_excess, fd_time / td_time - 1.0);
    }
    outcome.require(violations == 0, std::to_string(violations) + " dominance violations");
    outcome.note("500 instances, worst fd/td - 1 = " + fmt(worst_excess));
    return outcome;
}

// --- criterion 7: saturation trend -------------------------------------------

TrialSpec saturation_spec(int num_users) {
    TrialSpec spec;
    spec.system = make_cfg(10, num_users, 1000000, 3.0, 1e12, 1e6, 64);
    spec.seed = 1;
    spec.trials = 50;
    return spec;  // alpha = 0.3; radius 5 km, exponent 2, kappa 2, n = 2 W/Hz
}

Outcome saturation_trend() {
    Outcome outcome;
    auto mean_throughput = [](int num_users, Scheme scheme, Mode mode) {
        TrialSpec spec = saturation_spec(num_users);
        spec.scheme = scheme;
        spec.mode = mode;
        return run_trial(spec).mean_throughput_bps;
    };

    const double coded_td_2 = mean_throughput(2, Scheme::Coded, Mode::TimeDivision);
    const double coded_td_10 = mean_throughput(10, Scheme::Coded, Mode::TimeDivision);
    const double coded_fd_2 = mean_throughput(2, Scheme::Coded, Mode::FrequencyDivision);
    const double coded_fd_10 = mean_throughput(10, Scheme::Coded, Mode::FrequencyDivision);
    const double base_td_2 = mean_throughput(2, Scheme::Baseline, Mode::TimeDivision);
    const double base_td_10 = mean_throughput(10, Scheme::Baseline, Mode::TimeDivision);

    outcome.require(coded_td_10 < coded_td_2,
                    "coded td throughput did not fall from K=2 to K=10");
    outcome.require(coded_fd_10 < coded_fd_2,
                    "coded fd throughput did not fall from K=2 to K=10");
    const double coded_ratio = coded_td_10 / coded_td_2;
    const double baseline_ratio = base_td_10 / base_td_2;
    outcome.require(baseline_ratio > coded_ratio,
                    "baseline did not degrade more gracefully (td ratios " +
                        fmt(baseline_ratio) + " vs " + fmt(coded_ratio) + ")");
    outcome.note("td ratios K10/K2: baseline " + fmt(baseline_ratio) + " > coded " +
                 fmt(coded_ratio) + "; fd coded falls " + fmt(coded_fd_2) + " -> " +
                 fmt(coded_fd_10));
    return outcome;
}

// --- criterion 8: resource monotonicity --------------------------------------

Outcome resource_monotonicity() {
    Outcome outcome;
    int cells = 0;
    for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
        for (Scheme scheme : {Scheme::Coded, Scheme::Baseline}) {
            for (Mode mode : {Mode::TimeDivision, Mode::FrequencyDivision}) {
                TrialSpec spec;
                spec.system = make_cfg(4, 4, 2000, 1.2);
                spec.scheme = scheme;
                spec.mode = mode;
                spec.fd_tol = 1e-9;
                ++cells;

                double previous = 0.0;
                for (double power : {1.0, 2.0, 4.0, 8.0, 16.0}) {
                    spec.system.power_w = power;
                    const double thr = run_single_trial(spec, seed).throughput_bps;
                    outcome.require(thr >= previous * (1 - 1e-9),
                                    "P sweep dip at " + fmt(power) + " W (" +
                                        to_string(scheme) + "/" + to_string(mode) + ")");
                    previous = thr;
                }
                spec.system.power_w = 10.0;
                previous = 0.0;
                for (double bandwidth : {0.25e6, 0.5e6, 1e6, 2e6, 4e6}) {
                    spec.system.bandwidth_hz = bandwidth;
                    spec.system.subcarrier_bw_hz = bandwidth / spec.system.subcarriers;
                    const double thr = run_single_trial(spec, seed).throughput_bps;
                    outcome.require(thr >= previous * (1 - 1e-9),
                                    "B sweep dip at " + fmt(bandwidth) + " Hz (" +
                                        to_string(scheme) + "/" + to_string(mode) + ")");
                    previous = thr;
                }
            }
        }
    }
    outcome.note(std::to_string(cells) + " scheme x mode cells x 3 seeds, 5-point P and B grids");
    return outcome;
}

// --- criterion 9: quantization feasibility ------------------------------------

bool check_assignment(const GridAssignment& assignment, Outcome& outcome,
                      const std::string& label) {
    const int rows = assignment.num_slots;
    const int cols = assignment.num_subcarriers;
    long total_cells = 0;
    for (int cells : assignment.cells) total_cells += cells;
    const long expected =
        assignment.mode == GridMode::TimeDivision ? rows : cols;
    outcome.require(total_cells == expected, label + ": cells do not tile the grid");

    for (int slot = 0; slot < rows; ++slot) {
        for (int sub = 0; sub < cols; ++sub) {
            const int owner = assignment.transmission_at(slot, sub);
            outcome.require(owner >= 0 &&
                                owner < static_cast<int>(assignment.cells.size()),
                            label + ": unowned cell");
            // whole rows in TD, whole columns in FD
            if (assignment.mode == GridMode::TimeDivision)
                outcome.require(owner == assignment.transmission_at(slot, 0),
                                label + ": split row");
            else
                outcome.require(owner == assignment.transmission_at(0, sub),
                                label + ": split column");
            if (!outcome.pass) return false;
        }
    }
    outcome.require(assignment.quantized_time_s >= assignment.continuous_time_s,
                    label + ": quantized time below continuous");
    return outcome.pass;
}

Outcome quantization_feasibility() {
    Outcome outcome;

    // pinned examples
    {
        OptInstance inst;
        inst.size_bits.resize(2);
        inst.size_bits << 500, 500;
        inst.worst_noise.resize(2);
        inst.worst_noise << 2, 2;
        inst.power_w = 10;
        inst.bandwidth_hz = 1000;
        TdAllocation alloc;
        alloc.fractions.resize(2);
        alloc.fractions << 0.5, 0.5;
        alloc.total_time_s = 10.0;
        const GridAssignment assignment = quantize(alloc, inst, GridSpec{8, 1.0, 125.0});
        outcome.require(assignment.cells[0] == 5 && assignment.cells[1] == 5,
                        "even halves did not split 5/5");
    }
    {
        OptInstance inst;
        inst.size_bits.resize(3);
        inst.size_bits << 100, 100, 100;
        inst.worst_noise.resize(3);
        inst.worst_noise << 2, 2, 2;
        inst.power_w = 10;
        inst.bandwidth_hz = 1000;
        FdAllocation alloc;
        alloc.bandwidth_hz.resize(3);
        alloc.bandwidth_hz << 300, 300, 400;
        alloc.power_w.resize(3);
        alloc.power_w << 3, 3, 4;
        alloc.total_time_s = 1.0;
        const GridAssignment assignment = quantize(alloc, inst, GridSpec{10, 1.0, 100.0});
        outcome.require(assignment.cells[0] == 3 && assignment.cells[1] == 3 &&
                            assignment.cells[2] == 4,
                        "0.3/0.3/0.4 shares did not map to 3/3/4 subcarriers");

        TdAllocation thirds;
        thirds.fractions.resize(3);
        thirds.fractions << 1.0 / 3, 1.0 / 3, 1.0 / 3;
        thirds.total_time_s = 10.0;
        const GridAssignment tie = quantize(thirds, inst, GridSpec{4, 1.0, 250.0});
        outcome.require(tie.cells[0] == 4 && tie.cells[1] == 3 && tie.cells[2] == 3,
                        "thirds of ten slots did not break 4/3/3 toward low indices");
    }

    // random allocations through both quantizers
    Rng rng(20240404);
    int checked = 0;
    for (int trial = 0; trial < 40 && outcome.pass; ++trial) {
        const int count = 2 + static_cast<int>(rng.below(14));
        OptInstance inst;
        inst.size_bits.resize(count);
        inst.worst_noise.resize(count);
        for (int i = 0; i < count; ++i) {
            inst.size_bits[i] = rng.uniform() < 0.2 && i > 0 ? 0.0 : 10.0 + 990.0 * rng.uniform();
            inst.worst_noise[i] = 0.5 + 9.5 * rng.uniform();
        }
        if (inst.size_bits.sum() == 0.0) inst.size_bits[0] = 100.0;
        inst.power_w = 5.0 + 95.0 * rng.uniform();
        inst.bandwidth_hz = 1.0 + 9.0 * rng.uniform();
        const int subcarriers = count + 2 + static_cast<int>(rng.below(30));
        const GridSpec grid{subcarriers,
                            td_allocate(inst).total_time_s / (count + 2 + rng.below(20)),
                            inst.bandwidth_hz / subcarriers};

        if (!check_assignment(quantize(td_allocate(inst), inst, grid), outcome, "td"))
            break;
        if (!check_assignment(quantize(fd_allocate(inst, 1e-8), inst, grid), outcome, "fd"))
            break;
        checked += 2;
    }
    outcome.note(std::to_string(checked) + " random assignments plus the pinned examples");
    return outcome;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "Example-1 exactness (analytic + bit-level)", example1_exactness},
        {2, "decode soundness across (K, N, M) x 50 seeds", decode_soundness},
        {3, "subset-sum traffic identity on the (K, alpha) lattice", traffic_identity},
        {4, "TD closed form vs simplex grid oracle + perturbations", td_oracle},
        {5, "FD bisection vs 4-D lattice oracle + equal times", fd_oracle},
        {6, "FD dominance over TD on 500 random instances", fd_dominance},
        {7, "saturation trend K=2 -> K=10 at alpha 0.3", saturation_trend},
        {8, "throughput monotone in P and B per fixed seed", resource_monotonicity},
        {9, "grid quantization structure and timing", quantization_feasibility},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n", outcome.pass ? "PASS" : "FAIL",
                    criterion.id, criterion.name, elapsed, outcome.detail.empty() ? "" : " - ",
                    outcome.detail.c_str());
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    if (failures == 0)
        std::printf("all %zu criteria passed\n", criteria.size());
    else
        std::printf("%d criteria FAILED\n", failures);
    return failures;
}
