// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>

#include "ccpush/subsets.hpp"

namespace ccpush {

/// Cell geometry and fading model. Defaults follow the simulated setup:
/// 5 km broadcast radius, path-loss exponent 2, moderate line of sight.
struct FadingParams {
    double cell_radius_m = 5000.0;
    double pathloss_exponent = 2.0;
    double rice_factor = 2.0;    ///< linear K-factor; >= 1e9 means no fading
    double min_distance_m = 1.0; ///< path-loss guard distance

    void validate() const;

    friend bool operator==(const FadingParams&, const FadingParams&) = default;
};

/// Per-user link state: power gain g_k (path loss x fading) and the effective
/// noise PSD n_k = n / g_k, so capacity can use the unit-gain form
/// B*log2(1 + P/(n_k*B)).
struct ChannelScenario {
    Eigen::ArrayXd distance_m;
    Eigen::ArrayXd power_gain;
    Eigen::ArrayXd effective_noise;
    double base_psd = 0.0;

    int num_users() const { return static_cast<int>(effective_noise.size()); }
};

/// Users uniform on the disk, Ricean power fading per user, deterministic
/// given seed. rice_factor >= 1e9 is treated as the fading-free limit |h|^2=1.
ChannelScenario sample_scenario(int num_users, const FadingParams& params,
                                double base_psd, std::uint64_t seed);

/// Worst (largest) effective noise over a nonempty receiver set; a multicast
/// rate is pinned by this user.
double worst_noise(const ChannelScenario& scenario, UserMask receivers);

/// CSV dump: user, distance_m, power_gain, effective_noise.
void dump_scenario(const ChannelScenario& scenario, std::ostream& out);

}  // namespace ccpush
