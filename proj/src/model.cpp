// SPDX-License-Identifier: Apache-2.0

#include "irsnoma/model.hpp"

#include <string>

namespace irsnoma {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::InvalidConfig, what);
}

void require_dims(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::DimensionMismatch, what);
}

double wrap_phase(double theta) {
    double t = std::fmod(theta, 2.0 * kPi);
    if (t <= 0.0) t += 2.0 * kPi;
    return t;
}

double log2_1p(double sinr) { return std::log2(1.0 + std::max(sinr, 0.0)); }

void check_beamformers(const ChannelSet& channels, const CVec& w_u, const CVec& w_m) {
    require_dims(w_u.size() == channels.n_antennas() && w_m.size() == channels.n_antennas(),
                 "beamformer length does not match the number of BS antennas");
}

}  // namespace

void SystemConfig::validate() const {
    require(n_antennas >= 1, "n_antennas must be >= 1");
    require(n_elements >= 0, "n_elements must be >= 0");
    require(zeta >= 0.0 && zeta < 1.0, "zeta must lie in [0, 1)");
    require(p_max > 0.0, "p_max must be positive");
    require(sigma2_nu > 0.0 && sigma2_fu > 0.0, "noise powers must be positive");
    require(gamma >= 0.0, "gamma must be nonnegative");
    require(r_m >= 0.0, "r_m must be nonnegative");
    require(d_nu > 0.0 && d_fu > 0.0, "user distances must be positive");
    require(irs_path_loss_exponent > 0.0, "irs_path_loss_exponent must be positive");
    require(std::isfinite(path_loss_ref_db) && std::isfinite(rician_k_db), "path loss parameters must be finite");
}

void ChannelSet::validate() const {
    const auto n = h_bs_nu.size();
    const auto k = h_irs_nu.size();
    require_dims(h_bs_fu.size() == n, "h_bs_fu length differs from h_bs_nu");
    require_dims(h_irs_fu.size() == k, "h_irs_fu length differs from h_irs_nu");
    require_dims(g_bs_irs.rows() == k && (k == 0 || g_bs_irs.cols() == n), "g_bs_irs must be K x N");
    const bool finite = g_bs_irs.allFinite() && h_bs_nu.allFinite() && h_bs_fu.allFinite() &&
                        h_irs_nu.allFinite() && h_irs_fu.allFinite();
    require_dims(finite, "channel entries must be finite");
}

void ChannelSet::validate(const SystemConfig& config) const {
    validate();
    require_dims(n_antennas() == config.n_antennas, "channel set has " + std::to_string(n_antennas()) +
                                                        " antennas, config expects " +
                                                        std::to_string(config.n_antennas));
    require_dims(n_elements() == config.n_elements, "channel set has " + std::to_string(n_elements()) +
                                                        " IRS elements, config expects " +
                                                        std::to_string(config.n_elements));
}

ReflectVector ReflectVector::from_phases(const RVec& phases) {
    ReflectVector r;
    r.phases_ = phases.unaryExpr(&wrap_phase);
    r.coefficients_ = r.phases_.unaryExpr([](double t) { return std::polar(1.0, t); });
    return r;
}

ReflectVector ReflectVector::from_coefficients(const CVec& coefficients) {
    RVec phases = coefficients.unaryExpr([](const cdouble& c) { return std::arg(c); }).real();
    return from_phases(phases);
}

double ReflectVector::unit_modulus_deviation() const {
    if (coefficients_.size() == 0) return 0.0;
    return (coefficients_.cwiseAbs().array() - 1.0).abs().maxCoeff();
}

CVec effective_channel(const ChannelSet& channels, const ReflectVector& reflect, User user) {
    const CVec& h_b = user == User::Near ? channels.h_bs_nu : channels.h_bs_fu;
    const CVec& h_i = user == User::Near ? channels.h_irs_nu : channels.h_irs_fu;
    require_dims(reflect.size() == h_i.size(), "reflect vector length does not match the IRS size");
    if (h_i.size() == 0) return h_b;
    // row = h_I^H diag(v) G + h_B^H  =>  column = G^H diag(conj v) h_I + h_B
    const CVec weighted = reflect.coefficients().conjugate().cwiseProduct(h_i);
    return channels.g_bs_irs.adjoint() * weighted + h_b;
}

double unicast_rate(const ChannelSet& channels, const ReflectVector& reflect, const CVec& w_u,
                    const CVec& w_m, double zeta, double sigma2_nu) {
    check_beamformers(channels, w_u, w_m);
    const CVec h = effective_channel(channels, reflect, User::Near);
    return log2_1p(beam_gain(h, w_u) / (zeta * beam_gain(h, w_m) + sigma2_nu));
}

double multicast_rate_nu(const ChannelSet& channels, const ReflectVector& reflect, const CVec& w_u,
                         const CVec& w_m, double sigma2_nu) {
    check_beamformers(channels, w_u, w_m);
    const CVec h = effective_channel(channels, reflect, User::Near);
    return log2_1p(beam_gain(h, w_m) / (beam_gain(h, w_u) + sigma2_nu));
}

double multicast_rate_fu(const ChannelSet& channels, const ReflectVector& reflect, const CVec& w_u,
                         const CVec& w_m, double sigma2_fu) {
    check_beamformers(channels, w_u, w_m);
    const CVec h = effective_channel(channels, reflect, User::Far);
    return log2_1p(beam_gain(h, w_m) / (beam_gain(h, w_u) + sigma2_fu));
}

double illumination_power(const ChannelSet& channels, const ReflectVector& reflect, const CVec& w_u,
                          const CVec& w_m) {
    check_beamformers(channels, w_u, w_m);
    const CVec h = effective_channel(channels, reflect, User::Far);
    return beam_gain(h, w_u) + beam_gain(h, w_m);
}

double illumination_power_trace(const ChannelSet& channels, const ReflectVector& reflect,
                                const CMat& covariance) {
    require_dims(covariance.rows() == channels.n_antennas() && covariance.cols() == channels.n_antennas(),
                 "covariance must be N x N");
    const CVec h = effective_channel(channels, reflect, User::Far);
    const CMat outer = h * h.adjoint();
    return std::max(0.0, (covariance * outer).trace().real());
}

RateBreakdown evaluate(const SystemConfig& config, const ChannelSet& channels,
                       const BeamformingSolution& s) {
    RateBreakdown r;
    r.r_unicast = unicast_rate(channels, s.reflect, s.w_u, s.w_m, config.zeta, config.sigma2_nu);
    r.r_multicast_nu = multicast_rate_nu(channels, s.reflect, s.w_u, s.w_m, config.sigma2_nu);
    r.r_multicast_fu = multicast_rate_fu(channels, s.reflect, s.w_u, s.w_m, config.sigma2_fu);
    r.r_multicast = multicast_rate(r.r_multicast_nu, r.r_multicast_fu);
    r.illumination = illumination_power(channels, s.reflect, s.w_u, s.w_m);
    return r;
}

double FeasibilityReport::worst() const { return std::min({multicast, power, illumination, unit_modulus}); }

std::string FeasibilityReport::worst_constraint() const {
    const double w = worst();
    if (w == multicast) return "9a";
    if (w == power) return "9b";
    if (w == illumination) return "9c";
    return "unit_modulus";
}

FeasibilityReport check_feasibility(const SystemConfig& config, const ChannelSet& channels,
                                    const BeamformingSolution& solution, double tolerance) {
    const RateBreakdown r = evaluate(config, channels, solution);
    FeasibilityReport f;
    f.tolerance = tolerance;
    f.multicast = r.r_multicast - config.r_m;
    f.power = 1.0 - solution.covariance().trace().real() / config.p_max;
    f.illumination = (r.illumination - config.gamma) / std::max(config.gamma, config.sigma2_fu);
    f.unit_modulus = -solution.reflect.unit_modulus_deviation();
    return f;
}

}  // namespace irsnoma
