// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include "ccpush/system_config.hpp"

namespace ccpush {

/// Expected payload bits of a transmission with `receiver_count` receivers:
/// F * (M/N)^(s-1) * (1 - M/N)^(K-s+1). Each constituent segment is cached by
/// the s-1 other receivers and by nobody else; the unicast case s=1 is the
/// nobody-cached mass F * (1 - M/N)^K. Throws std::domain_error outside 1..K.
double expected_payload_size(const SystemConfig& cfg, int receiver_count);

struct CodedTraffic {
    double bits = 0.0;
    /// Set when M == 0: the closed form is singular there and the baseline
    /// value K*F is reported instead.
    bool zero_cache_limit = false;
};

/// Total expected delivery traffic of the coded scheme,
/// K*(1-M/N) * (N/(K*M)) * (1-(1-M/N)^K) * F bits.
CodedTraffic coded_total_traffic(const SystemConfig& cfg);

/// Total unicast traffic of the uncoded baseline, K*(1-M/N)*F bits.
double baseline_total_traffic(const SystemConfig& cfg);

struct TrafficSummary {
    double coded_total = 0.0;
    double baseline_total = 0.0;
    double traffic_gain = 1.0;       ///< baseline_total / coded_total
    Eigen::ArrayXd per_subset_size;  ///< [s-1] = expected payload bits at cardinality s
    bool zero_cache_limit = false;
};

TrafficSummary traffic_summary(const SystemConfig& cfg);

}  // namespace ccpush
