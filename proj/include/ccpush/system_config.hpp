// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace ccpush {

/// The (N, K, F, M) coded-caching universe plus the shared resource budget.
/// Cache size per user is M*F bits spread evenly over the N contents.
struct SystemConfig {
    int num_contents = 0;          ///< N
    int num_users = 0;             ///< K
    std::int64_t content_bits = 0; ///< F, bits per content
    double cache_contents = 0.0;   ///< M, contents' worth of cache per user, 0 <= M < N
    double power_w = 0.0;          ///< P, transmit power budget
    double bandwidth_hz = 0.0;     ///< B, system bandwidth
    int subcarriers = 0;           ///< H, with H * B_u == B
    double subcarrier_bw_hz = 0.0; ///< B_u
    double slot_seconds = 0.0;     ///< T_u

    double cache_fraction() const { return cache_contents / num_contents; }

    /// Bits of each content prefetched per user: round(M*F/N).
    std::int64_t placement_quota() const;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

}  // namespace ccpush
