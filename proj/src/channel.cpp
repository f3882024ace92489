// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#include "ccpush/channel.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ccpush/io_util.hpp"
#include "ccpush/rng.hpp"

namespace ccpush {

namespace {
constexpr double kNoFadingThreshold = 1e9;
}

void FadingParams::validate() const {
    if (!(min_distance_m > 0.0))
        throw std::invalid_argument("FadingParams.min_distance_m: must be positive");
    if (!(cell_radius_m > min_distance_m))
        throw std::invalid_argument("FadingParams.cell_radius_m: must exceed min_distance_m");
    if (!(pathloss_exponent >= 0.0))
        throw std::invalid_argument("FadingParams.pathloss_exponent: must be nonnegative");
    if (!(rice_factor >= 0.0))
        throw std::invalid_argument("FadingParams.rice_factor: must be nonnegative");
}

ChannelScenario sample_scenario(int num_users, const FadingParams& params,
                                double base_psd, std::uint64_t seed) {
    params.validate();
    if (num_users < 1)
        throw std::invalid_argument("sample_scenario: num_users must be at least 1");
    if (!(base_psd > 0.0))
        throw std::invalid_argument("sample_scenario: base_psd must be positive");

    ChannelScenario scenario;
    scenario.base_psd = base_psd;
    scenario.distance_m.resize(num_users);
    scenario.power_gain.resize(num_users);
    scenario.effective_noise.resize(num_users);

    Rng rng(seed);
    const double kappa = params.rice_factor;
    const bool fading = kappa < kNoFadingThreshold;
    const double line_of_sight = fading ? std::sqrt(kappa / (kappa + 1.0)) : 1.0;
    const double scatter = fading ? std::sqrt(1.0 / (2.0 * (kappa + 1.0))) : 0.0;

    for (int k = 0; k < num_users; ++k) {
        // sqrt(u) makes the distribution uniform over the disk area.
        const double distance = params.cell_radius_m * std::sqrt(rng.uniform());
        double fading_power = 1.0;
        if (fading) {
            const double re = line_of_sight + scatter * rng.normal();
            const double im = scatter * rng.normal();
            fading_power = re * re + im * im;
        }
        const double pathloss_distance = std::max(distance, params.min_distance_m);
        const double gain =
            fading_power * std::pow(pathloss_distance, -params.pathloss_exponent);
        scenario.distance_m[k] = distance;
        scenario.power_gain[k] = gain;
        scenario.effective_noise[k] = base_psd / gain;
    }
    return scenario;
}

double worst_noise(const ChannelScenario& scenario, UserMask receivers) {
    if (receivers == 0)
        throw std::invalid_argument("worst_noise: empty receiver set");
    double worst = 0.0;
    for (int k = 0; k < scenario.num_users(); ++k)
        if (receivers & (UserMask{1} << k)) worst = std::max(worst, scenario.effective_noise[k]);
    return worst;
}

void dump_scenario(const ChannelScenario& scenario, std::ostream& out) {
    out << "user,distance_m,power_gain,effective_noise\n";
    for (int k = 0; k < scenario.num_users(); ++k) {
        out << k << ',' << format_double(scenario.distance_m[k]) << ','
            << format_double(scenario.power_gain[k]) << ','
            << format_double(scenario.effective_noise[k]) << '\n';
    }
}

}  // namespace ccpush
