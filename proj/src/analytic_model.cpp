// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#include "ccpush/analytic_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ccpush {

double expected_payload_size(const SystemConfig& cfg, int receiver_count) {
    cfg.validate();
    const int num_users = cfg.num_users;
    if (receiver_count < 1 || receiver_count > num_users)
        throw std::domain_error("expected_payload_size: receiver_count " +
                                std::to_string(receiver_count) + " outside 1.." +
                                std::to_string(num_users));
    const double alpha = cfg.cache_fraction();
    const double bits = static_cast<double>(cfg.content_bits);
    return bits * std::pow(alpha, receiver_count - 1) *
           std::pow(1.0 - alpha, num_users - receiver_count + 1);
}

CodedTraffic coded_total_traffic(const SystemConfig& cfg) {
    cfg.validate();
    const double bits = static_cast<double>(cfg.content_bits);
    const int num_users = cfg.num_users;
    if (cfg.cache_contents == 0.0) {
        // Singular point of the closed form; nothing is cached, so delivery
        // degenerates to the baseline unicasts.
        return {num_users * bits, true};
    }
    const double alpha = cfg.cache_fraction();
    const double local_gain = num_users * (1.0 - alpha);
    const double global_gain = (1.0 - std::pow(1.0 - alpha, num_users)) / (num_users * alpha);
    return {local_gain * global_gain * bits, false};
}

double baseline_total_traffic(const SystemConfig& cfg) {
    cfg.validate();
    return cfg.num_users * (1.0 - cfg.cache_fraction()) *
           static_cast<double>(cfg.content_bits);
}

TrafficSummary traffic_summary(const SystemConfig& cfg) {
    TrafficSummary summary;
    const CodedTraffic coded = coded_total_traffic(cfg);
    summary.coded_total = coded.bits;
    summary.zero_cache_limit = coded.zero_cache_limit;
    summary.baseline_total = baseline_total_traffic(cfg);
    summary.traffic_gain =
        summary.coded_total > 0.0 ? summary.baseline_total / summary.coded_total : 1.0;
    summary.per_subset_size.resize(cfg.num_users);
    for (int s = 1; s <= cfg.num_users; ++s)
        summary.per_subset_size[s - 1] = expected_payload_size(cfg, s);
    return summary;
}

}  // namespace ccpush
