// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ccpush/allocator.hpp"
#include "ccpush/cache_codec.hpp"
#include "ccpush/channel.hpp"
#include "ccpush/system_config.hpp"

namespace ccpush {

enum class Scheme { Coded, Baseline };
enum class Mode { TimeDivision, FrequencyDivision };
enum class SizesSource { Analytic, BitLevel };

std::string to_string(Scheme scheme);
std::string to_string(Mode mode);
std::string to_string(SizesSource source);

/// One experiment cell. Trials t = 0..trials-1 run at seed + t; scenario,
/// requests and placement derive from that per-trial seed only, so schemes
/// and modes sharing a seed see identical randomness (paired comparison).
struct TrialSpec {
    Scheme scheme = Scheme::Coded;
    Mode mode = Mode::TimeDivision;
    SizesSource sizes_source = SizesSource::Analytic;
    SystemConfig system;
    FadingParams fading;
    double base_psd = 2.0;  ///< n, W/Hz; the simulated setup uses n/2 = 1
    bool distinct_requests = false;  ///< force pairwise-distinct requests (needs N >= K)
    std::uint64_t seed = 1;
    int trials = 1;
    double fd_tol = 1e-6;

    void validate() const;

    friend bool operator==(const TrialSpec&, const TrialSpec&) = default;
};

/// Result of a single seeded trial; throughput * total_time == useful bits.
struct TrialObservation {
    double total_time_s = 0.0;
    double throughput_bps = 0.0;
    double traffic_bits = 0.0;
    Eigen::ArrayXd per_transmission_time_s;
    bool converged = true;
};

/// Aggregate over the trial seeds, plus the first observation for callers
/// that need per-transmission detail.
struct TrialResult {
    int trials = 0;
    double mean_throughput_bps = 0.0;
    double stderr_throughput_bps = 0.0;
    double mean_total_time_s = 0.0;
    double mean_traffic_bits = 0.0;
    bool all_converged = true;
    TrialObservation first;
};

/// Channel-delivered bits each user actually needed: K*(1-M/N)*F.
double useful_bits(const SystemConfig& cfg);

/// Deterministic per-trial randomness: the channel scenario, the request
/// vector, and the seeds the bit-level path feeds to make_library and
/// make_placement. Everything derives from trial_seed alone.
struct TrialDraws {
    ChannelScenario scenario;
    RequestVector requests;
    std::uint64_t library_seed = 0;
    std::uint64_t placement_seed = 0;
};

TrialDraws draw_trial(const TrialSpec& spec, std::uint64_t trial_seed);

/// Per-transmission sizes and worst-user noises for the coded scheme, rows in
/// delivery_subset_order(). Analytic sizes come from the expected-payload
/// closed form; bit-level sizes from a realized placement and plan.
OptInstance coded_instance(const SystemConfig& cfg, const ChannelScenario& scenario,
                           const RequestVector& requests, SizesSource source,
                           std::uint64_t trial_seed);

/// K unicasts of the unprefetched content under the same optimizer.
OptInstance baseline_instance(const SystemConfig& cfg, const ChannelScenario& scenario,
                              const RequestVector& requests, SizesSource source,
                              std::uint64_t trial_seed);

TrialObservation run_single_trial(const TrialSpec& spec, std::uint64_t trial_seed);
TrialResult run_trial(const TrialSpec& spec);

enum class SweepParameter { CacheFraction, Power, Bandwidth, Users };

std::string to_string(SweepParameter parameter);
SweepParameter sweep_parameter_from_string(const std::string& name);

struct SweepRow {
    std::string parameter;
    double value = 0.0;
    Scheme scheme = Scheme::Coded;
    Mode mode = Mode::TimeDivision;
    SizesSource sizes_source = SizesSource::Analytic;
    int trials = 0;
    double mean_throughput_bps = 0.0;
    double stderr_bps = 0.0;
    double mean_total_time_s = 0.0;
    double traffic_bits = 0.0;
    std::uint64_t seed0 = 0;
    bool failed = false;
    std::string error;
};

/// One row per (grid value x scheme x mode), rows sorted by value then scheme
/// then mode; a failing point is recorded in-row and the sweep continues.
std::vector<SweepRow> sweep(const TrialSpec& spec, SweepParameter parameter,
                            const std::vector<double>& grid);

/// CSV with the fixed column set; failed rows carry nan measurements.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace ccpush
