// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "irsnoma/model.hpp"

namespace irsnoma {

enum class LinkKind { Rayleigh, Rician, Los };

struct LinkModel {
    LinkKind kind = LinkKind::Rayleigh;
    double k_factor = 0.0;  // linear, Rician only
    double exponent = 2.0;  // path-loss exponent alpha
};

// Per-link fading and path-loss laws. All arrays are half-wavelength ULAs
// laid out along the y axis, so the steering phase of element i towards a
// node at bearing phi (measured from the x axis) is pi * i * sin(phi).
struct ChannelModelSpec {
    LinkModel bs_irs;
    LinkModel bs_nu;
    LinkModel bs_fu;
    LinkModel irs_nu;
    LinkModel irs_fu;
    double path_loss_ref_db = 40.0;

    // Rayleigh BS-NU (alpha 3), Rician BS-FU (alpha 2) and Rician IRS links
    // with the configured K-factor and exponent.
    static ChannelModelSpec from_config(const SystemConfig& config);

    void validate() const;
};

// L = L_0 + 10 alpha log10(d) in dB, and the matching linear power gain.
double path_loss_db(double ref_db, double exponent, double distance_m);
double path_loss_gain(double ref_db, double exponent, double distance_m);

// Bearing of `to` seen from `from`, radians from the x axis.
double bearing(const Point2& from, const Point2& to);

// entry i = exp(j pi i sin(angle))
CVec los_steering(int n, double angle);

// Deterministic for a fixed (config, spec, seed). Every link draws from its
// own std::mt19937_64 stream keyed by (seed, link id), so the direct links are
// identical whether or not the IRS is present.
ChannelSet generate_channels(const SystemConfig& config, const ChannelModelSpec& spec, std::uint64_t seed);
inline ChannelSet generate_channels(const SystemConfig& config) {
    return generate_channels(config, ChannelModelSpec::from_config(config), config.seed);
}

// JSON text with every complex entry written as a [re, im] pair.
std::string channels_to_json(const ChannelSet& channels);
ChannelSet channels_from_json(const std::string& text);
void save_channels(const std::string& path, const ChannelSet& channels);
ChannelSet load_channels(const std::string& path);

}  // namespace irsnoma
