// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#include "ccpush/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ccpush/analytic_model.hpp"
#include "ccpush/io_util.hpp"
#include "ccpush/rng.hpp"
#include "ccpush/subsets.hpp"

namespace ccpush {

namespace {

constexpr std::uint64_t kChannelTag = 0x6368616eULL;    // "chan"
constexpr std::uint64_t kRequestTag = 0x72657175ULL;    // "requ"
constexpr std::uint64_t kPlacementTag = 0x706c6163ULL;  // "plac"
constexpr std::uint64_t kLibraryTag = 0x6c696272ULL;    // "libr"

constexpr int kBitLevelUserCap = 12;
constexpr int kAnalyticUserCap = 20;  // 2^K - 1 transmissions must stay desk-scale

}  // namespace

std::string to_string(Scheme scheme) {
    return scheme == Scheme::Coded ? "coded" : "baseline";
}

std::string to_string(Mode mode) {
    return mode == Mode::TimeDivision ? "td" : "fd";
}

std::string to_string(SizesSource source) {
    return source == SizesSource::Analytic ? "analytic" : "bitlevel";
}

void TrialSpec::validate() const {
    system.validate();
    fading.validate();
    if (!(base_psd > 0.0))
        throw std::invalid_argument("TrialSpec.base_psd: must be positive");
    if (trials < 1) throw std::invalid_argument("TrialSpec.trials: must be at least 1");
    if (!(fd_tol > 0.0) || fd_tol > 1e-2)
        throw std::invalid_argument("TrialSpec.fd_tol: must be in (0, 1e-2]");
    if (sizes_source == SizesSource::BitLevel && system.num_users > kBitLevelUserCap)
        throw std::invalid_argument("TrialSpec: bit-level sizes require K <= " +
                                    std::to_string(kBitLevelUserCap));
    if (system.num_users > kAnalyticUserCap)
        throw std::invalid_argument("TrialSpec: K <= " + std::to_string(kAnalyticUserCap) +
                                    " (the plan has 2^K - 1 transmissions)");
    if (distinct_requests && system.num_users > system.num_contents)
        throw std::invalid_argument("TrialSpec: distinct requests need N >= K");
}

double useful_bits(const SystemConfig& cfg) {
    return cfg.num_users * (1.0 - cfg.cache_fraction()) *
           static_cast<double>(cfg.content_bits);
}

OptInstance coded_instance(const SystemConfig& cfg, const ChannelScenario& scenario,
                           const RequestVector& requests, SizesSource source,
                           std::uint64_t trial_seed) {
    const std::vector<UserMask> order = delivery_subset_order(cfg.num_users);
    OptInstance inst;
    inst.power_w = cfg.power_w;
    inst.bandwidth_hz = cfg.bandwidth_hz;
    inst.size_bits.resize(static_cast<Eigen::Index>(order.size()));
    inst.worst_noise.resize(static_cast<Eigen::Index>(order.size()));

    if (source == SizesSource::Analytic) {
        // Sizes depend only on the receiver count; cache per cardinality.
        Eigen::ArrayXd by_cardinality(cfg.num_users);
        for (int s = 1; s <= cfg.num_users; ++s)
            by_cardinality[s - 1] = expected_payload_size(cfg, s);
        for (std::size_t i = 0; i < order.size(); ++i)
            inst.size_bits[static_cast<Eigen::Index>(i)] =
                by_cardinality[mask_size(order[i]) - 1];
    } else {
        const ContentLibrary library = make_library(cfg, derive_seed(trial_seed, kLibraryTag));
        const PlacementState placement =
            make_placement(cfg, derive_seed(trial_seed, kPlacementTag));
        const DeliveryPlan plan = build_delivery_plan(library, placement, requests);
        for (std::size_t i = 0; i < order.size(); ++i)
            inst.size_bits[static_cast<Eigen::Index>(i)] =
                static_cast<double>(plan.transmissions[i].realized_size);
    }
    for (std::size_t i = 0; i < order.size(); ++i)
        inst.worst_noise[static_cast<Eigen::Index>(i)] = worst_noise(scenario, order[i]);
    return inst;
}

OptInstance baseline_instance(const SystemConfig& cfg, const ChannelScenario& scenario,
                              const RequestVector& /*requests*/, SizesSource source,
                              std::uint64_t /*trial_seed*/) {
    OptInstance inst;
    inst.power_w = cfg.power_w;
    inst.bandwidth_hz = cfg.bandwidth_hz;
    inst.size_bits.resize(cfg.num_users);
    inst.worst_noise.resize(cfg.num_users);
    // Every user is missing exactly F - quota bits of its request; the
    // analytic value (1 - M/N) F differs only by the quota rounding.
    const double unprefetched =
        source == SizesSource::Analytic
            ? (1.0 - cfg.cache_fraction()) * static_cast<double>(cfg.content_bits)
            : static_cast<double>(cfg.content_bits - cfg.placement_quota());
    for (int k = 0; k < cfg.num_users; ++k) {
        inst.size_bits[k] = unprefetched;
        inst.worst_noise[k] = scenario.effective_noise[k];
    }
    return inst;
}

TrialDraws draw_trial(const TrialSpec& spec, std::uint64_t trial_seed) {
    const SystemConfig& cfg = spec.system;
    TrialDraws draws;
    draws.scenario = sample_scenario(cfg.num_users, spec.fading, spec.base_psd,
                                     derive_seed(trial_seed, kChannelTag));
    const std::uint64_t request_seed = derive_seed(trial_seed, kRequestTag);
    draws.requests = spec.distinct_requests ? draw_distinct_requests(cfg, request_seed)
                                            : draw_requests(cfg, request_seed);
    draws.library_seed = derive_seed(trial_seed, kLibraryTag);
    draws.placement_seed = derive_seed(trial_seed, kPlacementTag);
    return draws;
}

TrialObservation run_single_trial(const TrialSpec& spec, std::uint64_t trial_seed) {
    const SystemConfig& cfg = spec.system;
    const TrialDraws draws = draw_trial(spec, trial_seed);
    const ChannelScenario& scenario = draws.scenario;
    const RequestVector& requests = draws.requests;
    const OptInstance inst =
        spec.scheme == Scheme::Coded
            ? coded_instance(cfg, scenario, requests, spec.sizes_source, trial_seed)
            : baseline_instance(cfg, scenario, requests, spec.sizes_source, trial_seed);

    TrialObservation observation;
    observation.traffic_bits = inst.size_bits.sum();
    observation.per_transmission_time_s = Eigen::ArrayXd::Zero(inst.count());

    if (spec.mode == Mode::TimeDivision) {
        const TdAllocation alloc = td_allocate(inst);
        observation.total_time_s = alloc.total_time_s;
        for (Eigen::Index i = 0; i < inst.count(); ++i)
            if (alloc.fractions[i] > 0.0)
                observation.per_transmission_time_s[i] =
                    inst.size_bits[i] / (alloc.fractions[i] *
                                         shannon_rate(inst.bandwidth_hz, inst.power_w,
                                                      inst.worst_noise[i]));
    } else {
        const FdAllocation alloc = fd_allocate(inst, spec.fd_tol);
        observation.total_time_s = alloc.total_time_s;
        observation.converged = alloc.converged;
        for (Eigen::Index i = 0; i < inst.count(); ++i)
            if (alloc.bandwidth_hz[i] > 0.0)
                observation.per_transmission_time_s[i] =
                    inst.size_bits[i] / shannon_rate(alloc.bandwidth_hz[i], alloc.power_w[i],
                                                     inst.worst_noise[i]);
    }

    observation.throughput_bps =
        observation.total_time_s > 0.0
            ? throughput(inst, observation.total_time_s, useful_bits(cfg))
            : 0.0;
    return observation;
}

TrialResult run_trial(const TrialSpec& spec) {
    spec.validate();
    TrialResult result;
    result.trials = spec.trials;

    double throughput_sum = 0.0, throughput_sq_sum = 0.0;
    double time_sum = 0.0, traffic_sum = 0.0;
    for (int t = 0; t < spec.trials; ++t) {
        TrialObservation observation = run_single_trial(spec, spec.seed + t);
        throughput_sum += observation.throughput_bps;
        throughput_sq_sum += observation.throughput_bps * observation.throughput_bps;
        time_sum += observation.total_time_s;
        traffic_sum += observation.traffic_bits;
        result.all_converged = result.all_converged && observation.converged;
        if (t == 0) result.first = std::move(observation);
    }
    const double n = spec.trials;
    result.mean_throughput_bps = throughput_sum / n;
    result.mean_total_time_s = time_sum / n;
    result.mean_traffic_bits = traffic_sum / n;
    if (spec.trials > 1) {
        const double variance = std::max(
            0.0, (throughput_sq_sum - throughput_sum * throughput_sum / n) / (n - 1.0));
        result.stderr_throughput_bps = std::sqrt(variance / n);
    }
    return result;
}

std::string to_string(SweepParameter parameter) {
    switch (parameter) {
        case SweepParameter::CacheFraction: return "cache_fraction";
        case SweepParameter::Power: return "power";
        case SweepParameter::Bandwidth: return "bandwidth";
        case SweepParameter::Users: return "users";
    }
    return "?";
}

SweepParameter sweep_parameter_from_string(const std::string& name) {
    if (name == "cache_fraction") return SweepParameter::CacheFraction;
    if (name == "power") return SweepParameter::Power;
    if (name == "bandwidth") return SweepParameter::Bandwidth;
    if (name == "users") return SweepParameter::Users;
    throw std::invalid_argument("unknown sweep parameter '" + name +
                                "' (cache_fraction|power|bandwidth|users)");
}

namespace {

TrialSpec apply_parameter(TrialSpec spec, SweepParameter parameter, double value) {
    switch (parameter) {
        case SweepParameter::CacheFraction:
            spec.system.cache_contents = value * spec.system.num_contents;
            break;
        case SweepParameter::Power:
            spec.system.power_w = value;
            break;
        case SweepParameter::Bandwidth:
            spec.system.bandwidth_hz = value;
            spec.system.subcarrier_bw_hz = value / spec.system.subcarriers;
            break;
        case SweepParameter::Users: {
            const double rounded = std::round(value);
            if (rounded != value)
                throw std::invalid_argument("users grid values must be integers");
            spec.system.num_users = static_cast<int>(rounded);
            break;
        }
    }
    return spec;
}

}  // namespace

std::vector<SweepRow> sweep(const TrialSpec& spec, SweepParameter parameter,
                            const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
    std::vector<double> values = grid;
    std::sort(values.begin(), values.end());

    std::vector<SweepRow> rows;
    for (double value : values) {
        for (Scheme scheme : {Scheme::Coded, Scheme::Baseline}) {
            for (Mode mode : {Mode::TimeDivision, Mode::FrequencyDivision}) {
                SweepRow row;
                row.parameter = to_string(parameter);
                row.value = value;
                row.scheme = scheme;
                row.mode = mode;
                row.sizes_source = spec.sizes_source;
                row.seed0 = spec.seed;
                try {
                    TrialSpec point = apply_parameter(spec, parameter, value);
                    point.scheme = scheme;
                    point.mode = mode;
                    const TrialResult result = run_trial(point);
                    row.trials = result.trials;
                    row.mean_throughput_bps = result.mean_throughput_bps;
                    row.stderr_bps = result.stderr_throughput_bps;
                    row.mean_total_time_s = result.mean_total_time_s;
                    row.traffic_bits = result.mean_traffic_bits;
                } catch (const std::exception& e) {
                    row.failed = true;
                    row.error = e.what();
                    row.trials = spec.trials;
                    const double nan = std::numeric_limits<double>::quiet_NaN();
                    row.mean_throughput_bps = nan;
                    row.stderr_bps = nan;
                    row.mean_total_time_s = nan;
                    row.traffic_bits = nan;
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "parameter,value,scheme,mode,sizes_source,trials,mean_throughput_bps,"
           "stderr_bps,mean_total_time_s,traffic_bits,seed0\n";
    for (const SweepRow& row : rows) {
        out << row.parameter << ',' << format_double(row.value) << ','
            << to_string(row.scheme) << ',' << to_string(row.mode) << ','
            << to_string(row.sizes_source) << ',' << row.trials << ','
            << format_double(row.mean_throughput_bps) << ',' << format_double(row.stderr_bps)
            << ',' << format_double(row.mean_total_time_s) << ','
            << format_double(row.traffic_bits) << ',' << row.seed0 << '\n';
    }
}

}  // namespace ccpush
