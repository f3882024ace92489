// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#include "ccpush/system_config.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ccpush {

std::int64_t SystemConfig::placement_quota() const {
    return std::llround(cache_contents * static_cast<double>(content_bits) / num_contents);
}

void SystemConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw std::invalid_argument("SystemConfig." + field + ": " + why);
    };
    if (num_contents < 1) fail("N", "must be a positive count");
    if (num_users < 1) fail("K", "must be a positive count");
    if (content_bits < 1) fail("F", "must be at least 1 bit");
    if (!(cache_contents >= 0.0)) fail("M", "must be nonnegative");
    if (cache_contents >= num_contents) fail("M", "cache cannot reach the full library (M < N)");
    if (!(power_w > 0.0)) fail("P", "must be positive");
    if (!(bandwidth_hz > 0.0)) fail("B", "must be positive");
    if (subcarriers < 1) fail("H", "must be a positive count");
    if (!(subcarrier_bw_hz > 0.0)) fail("B_u", "must be positive");
    const double grid_bw = subcarriers * subcarrier_bw_hz;
    if (std::abs(grid_bw - bandwidth_hz) > 1e-9 * bandwidth_hz)
        fail("B_u", "H * B_u must equal B");
    if (!(slot_seconds > 0.0)) fail("T_u", "must be positive");
}

}  // namespace ccpush
