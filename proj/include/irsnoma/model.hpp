// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "irsnoma/types.hpp"

namespace irsnoma {

// Conjugation convention used throughout the library: every channel is
// stored as a column vector h and the received amplitude for a transmit
// vector x is h^H x (Eigen: h.dot(x)). The effective channel returned by
// effective_channel() follows the same rule, so its conjugate transpose is
// the row vector h_I^H diag(v) G + h_B^H.

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct SystemConfig {
    int n_antennas = 20;  // N
    int n_elements = 14;  // K, 0 means no IRS
    double p_max = 0.01;  // W
    double sigma2_nu = 1e-13;  // W
    double sigma2_fu = 1e-13;  // W
    double zeta = 0.0;  // residual SIC coefficient
    double r_m = 1.0;  // minimum multicast rate, bits/s/Hz
    double gamma = 1e-15;  // minimum illumination power, W
    double d_nu = 100.0;  // m
    double d_fu = 1000.0;  // m
    double path_loss_ref_db = 40.0;  // L_0
    double rician_k_db = 10.0;
    double irs_path_loss_exponent = 2.0;
    Point2 bs_position{0.0, 0.0};
    Point2 irs_position{50.0, 10.0};
    std::uint64_t seed = 1;

    // Users sit on the +x axis through the BS at their configured distances.
    Point2 nu_position() const { return {bs_position.x + d_nu, bs_position.y}; }
    Point2 fu_position() const { return {bs_position.x + d_fu, bs_position.y}; }

    double gamma_bar() const { return std::exp2(r_m) - 1.0; }

    // Throws Error(InvalidConfig) on the first violated invariant.
    void validate() const;
};

struct ChannelSet {
    CMat g_bs_irs;  // K x N
    CVec h_bs_nu;  // N
    CVec h_bs_fu;  // N
    CVec h_irs_nu;  // K
    CVec h_irs_fu;  // K

    int n_antennas() const { return static_cast<int>(h_bs_nu.size()); }
    int n_elements() const { return static_cast<int>(h_irs_nu.size()); }

    // Dimensions must agree with each other (and with `config` when given);
    // all entries must be finite.
    void validate() const;
    void validate(const SystemConfig& config) const;
};

class ReflectVector {
public:
    ReflectVector() = default;

    // Phases are wrapped into (0, 2*pi].
    static ReflectVector from_phases(const RVec& phases);
    // Projects every entry onto the unit circle; zero entries map to phase 2*pi.
    static ReflectVector from_coefficients(const CVec& coefficients);
    static ReflectVector empty() { return {}; }

    const RVec& phases() const { return phases_; }
    const CVec& coefficients() const { return coefficients_; }
    int size() const { return static_cast<int>(phases_.size()); }

    double unit_modulus_deviation() const;

private:
    RVec phases_;
    CVec coefficients_;
};

struct BeamformingSolution {
    CVec w_u;
    CVec w_m;
    ReflectVector reflect;

    CMat covariance() const { return w_u * w_u.adjoint() + w_m * w_m.adjoint(); }
};

struct RateBreakdown {
    double r_unicast = 0.0;
    double r_multicast_nu = 0.0;
    double r_multicast_fu = 0.0;
    double r_multicast = 0.0;
    double illumination = 0.0;
};

enum class User { Near, Far };

// Effective column channel h with h^H = h_I^H diag(v) G + h_B^H.
CVec effective_channel(const ChannelSet& channels, const ReflectVector& reflect, User user);

// |h^H w|^2
inline double beam_gain(const CVec& h, const CVec& w) { return std::norm(h.dot(w)); }

double unicast_rate(const ChannelSet& channels, const ReflectVector& reflect, const CVec& w_u,
                    const CVec& w_m, double zeta, double sigma2_nu);
double multicast_rate_nu(const ChannelSet& channels, const ReflectVector& reflect, const CVec& w_u,
                         const CVec& w_m, double sigma2_nu);
double multicast_rate_fu(const ChannelSet& channels, const ReflectVector& reflect, const CVec& w_u,
                         const CVec& w_m, double sigma2_fu);
inline double multicast_rate(double r_nu, double r_fu) { return std::min(r_nu, r_fu); }

// Rank-2 expansion |h_f^H w_u|^2 + |h_f^H w_m|^2.
double illumination_power(const ChannelSet& channels, const ReflectVector& reflect, const CVec& w_u,
                          const CVec& w_m);
// Trace form Tr(R h_f h_f^H), kept as an independent evaluation path.
double illumination_power_trace(const ChannelSet& channels, const ReflectVector& reflect,
                                const CMat& covariance);

RateBreakdown evaluate(const SystemConfig& config, const ChannelSet& channels,
                       const BeamformingSolution& solution);

// Signed residuals, feasible iff every residual >= -tolerance.
//   multicast:     R_n - R_m                               [bits/s/Hz]
//   power:         1 - Tr(R) / P_max                       [relative]
//   illumination:  (P(theta) - Gamma) / max(Gamma, sigma_f^2)
//   unit_modulus:  -max_k | |v_k| - 1 |
struct FeasibilityReport {
    double multicast = 0.0;
    double power = 0.0;
    double illumination = 0.0;
    double unit_modulus = 0.0;
    double tolerance = 1e-6;

    double worst() const;
    bool feasible() const { return worst() >= -tolerance; }
    // Name of the most violated constraint ("9a", "9b", "9c", "unit_modulus").
    std::string worst_constraint() const;
};

FeasibilityReport check_feasibility(const SystemConfig& config, const ChannelSet& channels,
                                    const BeamformingSolution& solution, double tolerance = 1e-6);

}  // namespace irsnoma
