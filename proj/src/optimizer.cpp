// SPDX-License-Identifier: Apache-2.0

#include "irsnoma/optimizer.hpp"

#include <array>
#include <chrono>
#include <limits>
#include <random>

#include <json.hpp>

namespace irsnoma {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Lower bound of Tr(M V) over Hermitian PSD V with unit diagonal
// (|V_ij| <= 1 for such V).
double unit_diagonal_lower_bound(const CMat& m) {
    double bound = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i == j) {
                bound += m(i, i).real();
            } else {
                bound -= std::abs(m(i, j));
            }
        }
    }
    return bound;
}

CVec unit(const CVec& x) {
    double n = x.norm();
    if (n <= 0.0) {
        return CVec::Zero(x.size());
    }
    return x / n;
}

// Missed (9a) or (9c) by more than 1 % in SINR or illumination power.
bool misses_by_more_than_one_percent(const SystemConfig& config, const ChannelSet& channels,
                                     const BeamformingSolution& s) {
    CVec h_n = effective_channel(channels, s.reflect, User::Near);
    CVec h_f = effective_channel(channels, s.reflect, User::Far);
    double gb = config.gamma_bar();
    double sinr_n = beam_gain(h_n, s.w_m) / (beam_gain(h_n, s.w_u) + config.sigma2_nu);
    double sinr_f = beam_gain(h_f, s.w_m) / (beam_gain(h_f, s.w_u) + config.sigma2_fu);
    if (gb > 0.0 && std::min(sinr_n, sinr_f) < 0.99 * gb) {
        return true;
    }
    double illum = beam_gain(h_f, s.w_u) + beam_gain(h_f, s.w_m);
    return config.gamma > 0.0 && illum < 0.99 * config.gamma;
}

struct Candidate {
    BeamformingSolution solution;
    double objective = kNegInf;
    bool valid = false;
};

void consider(Candidate& best, std::optional<BeamformingSolution> s, double q, const SystemConfig& config,
              const ChannelSet& channels) {
    if (!s) {
        return;
    }
    double obj = dinkelbach_objective(q, config, channels, *s);
    if (!best.valid || obj > best.objective) {
        best.solution = std::move(*s);
        best.objective = obj;
        best.valid = true;
    }
}

ReflectVector initial_reflect(const SystemConfig& config) {
    if (config.n_elements == 0) {
        return ReflectVector::empty();
    }
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(config.seed >> 32), 0x49525321u};
    std::mt19937_64 rng(seq);
    RVec phases(config.n_elements);
    for (int k = 0; k < config.n_elements; ++k) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        phases(k) = 2.0 * kPi * (1.0 - u);
    }
    return ReflectVector::from_phases(phases);
}

std::string diagnose_infeasibility(const SdpProblem& transmit, const SdpBackend& backend) {
    auto subset = [&](const std::vector<std::string>& keep) {
        SdpProblem p = transmit;
        p.constraints.clear();
        for (const auto& c : transmit.constraints) {
            for (const auto& k : keep) {
                if (c.label == k) {
                    p.constraints.push_back(c);
                }
            }
        }
        return solve(p, backend).status == SdpStatus::Infeasible;
    };
    if (subset({"power", "illumination"})) {
        return "9c";
    }
    if (subset({"power", "multicast_nu", "multicast_fu"})) {
        return "9a";
    }
    return "9a+9c";
}

}  // namespace

void DinkelbachConfig::validate() const {
    if (!(epsilon1 > 0.0) || !std::isfinite(epsilon1)) {
        throw Error(ErrorKind::InvalidConfig, "epsilon1 must be positive");
    }
    if (max_outer < 1) {
        throw Error(ErrorKind::InvalidConfig, "max_outer must be at least 1");
    }
    if (ao_inner_max < 1) {
        throw Error(ErrorKind::InvalidConfig, "ao_inner_max must be at least 1");
    }
    if (!(ao_epsilon > 0.0) || !std::isfinite(ao_epsilon)) {
        throw Error(ErrorKind::InvalidConfig, "ao_epsilon must be positive");
    }
    srocr.validate();
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

NormalizedInstance normalize(const SystemConfig& config, const ChannelSet& channels) {
    NormalizedInstance inst;
    double sigma_n = std::sqrt(config.sigma2_nu);
    double s = std::sqrt(config.p_max) / sigma_n;
    inst.beam_scale = std::sqrt(config.p_max);
    inst.config = config;
    inst.config.p_max = 1.0;
    inst.config.sigma2_nu = 1.0;
    inst.config.sigma2_fu = config.sigma2_fu / config.sigma2_nu;
    inst.config.gamma = config.gamma / config.sigma2_nu;
    inst.channels = channels;
    inst.channels.g_bs_irs *= s;
    inst.channels.h_bs_nu *= s;
    inst.channels.h_bs_fu *= s;
    return inst;
}

BeamformingSolution to_physical(const NormalizedInstance& inst, const BeamformingSolution& normalized) {
    return {normalized.w_u * inst.beam_scale, normalized.w_m * inst.beam_scale, normalized.reflect};
}

BeamformingSolution to_normalized(const NormalizedInstance& inst, const BeamformingSolution& physical) {
    return {physical.w_u / inst.beam_scale, physical.w_m / inst.beam_scale, physical.reflect};
}

// ---------------------------------------------------------------------------
// Subproblems
// ---------------------------------------------------------------------------

SubproblemMatrices build_subproblem_matrices(const SystemConfig& config, const ChannelSet& channels,
                                             const ReflectVector& reflect, const CVec& w_u, const CVec& w_m) {
    const int n = channels.n_antennas();
    const int k = channels.n_elements();
    if (reflect.size() != k || w_u.size() != n || w_m.size() != n) {
        throw Error(ErrorKind::DimensionMismatch, "subproblem inputs do not match the channel dimensions");
    }
    SubproblemMatrices m;
    m.gamma_bar = config.gamma_bar();
    m.h_eff_nu = effective_channel(channels, reflect, User::Near);
    m.h_eff_fu = effective_channel(channels, reflect, User::Far);
    m.H_n = m.h_eff_nu * m.h_eff_nu.adjoint();
    m.H_f = m.h_eff_fu * m.h_eff_fu.adjoint();
    m.H_I_n = channels.h_irs_nu.conjugate().asDiagonal() * channels.g_bs_irs;
    m.H_I_f = channels.h_irs_fu.conjugate().asDiagonal() * channels.g_bs_irs;

    auto lifted = [&](const CMat& h_i, const CVec& h_b, const CVec& w) {
        CVec c(k + 1);
        c.head(k) = h_i * w;
        c(k) = h_b.dot(w);
        return c;
    };
    auto split = [&](const CVec& c, CMat& r, double& a) {
        r = c * c.adjoint();
        a = std::norm(c(k));
        r(k, k) = 0.0;
    };
    CVec c_nu = lifted(m.H_I_n, channels.h_bs_nu, w_u);
    CVec c_nm = lifted(m.H_I_n, channels.h_bs_nu, w_m);
    CVec c_fu = lifted(m.H_I_f, channels.h_bs_fu, w_u);
    CVec c_fm = lifted(m.H_I_f, channels.h_bs_fu, w_m);
    split(c_nu, m.R_nu, m.A_nu);
    split(c_nm, m.R_nm, m.A_nm);
    split(c_fu, m.R_fu, m.A_fu);
    split(c_fm, m.R_fm, m.A_fm);
    m.F = c_fu * c_fu.adjoint() + c_fm * c_fm.adjoint();
    m.C = m.A_nm - m.gamma_bar * m.A_nu - m.gamma_bar * config.sigma2_nu;
    m.D = m.A_fm - m.gamma_bar * m.A_fu - m.gamma_bar * config.sigma2_fu;
    return m;
}

SdpProblem build_transmit_subproblem(double q, const SystemConfig& config, const ChannelSet& channels,
                                     const ReflectVector& reflect) {
    const int n = channels.n_antennas();
    CVec h_n = effective_channel(channels, reflect, User::Near);
    CVec h_f = effective_channel(channels, reflect, User::Far);
    CMat H_n = h_n * h_n.adjoint();
    CMat H_f = h_f * h_f.adjoint();
    CMat eye = CMat::Identity(n, n);
    double gb = config.gamma_bar();

    SdpProblem p;
    std::size_t wu = p.add_variable(n, "W_u");
    std::size_t wm = p.add_variable(n, "W_m");
    p.objective = {{wu, H_n}, {wm, -q * config.zeta * H_n}};
    p.objective_constant = -q * config.sigma2_nu;
    p.add_constraint({{wu, eye}, {wm, eye}}, Sense::LessEqual, config.p_max, "power");
    p.add_constraint({{wm, H_n}, {wu, -gb * H_n}}, Sense::GreaterEqual, gb * config.sigma2_nu, "multicast_nu");
    p.add_constraint({{wm, H_f}, {wu, -gb * H_f}}, Sense::GreaterEqual, gb * config.sigma2_fu, "multicast_fu");
    p.add_constraint({{wu, H_f}, {wm, H_f}}, Sense::GreaterEqual, config.gamma, "illumination");
    return p;
}

SdpProblem build_reflect_subproblem(double q, const SystemConfig& config, const ChannelSet& channels,
                                    const CVec& w_u, const CVec& w_m) {
    const int k = channels.n_elements();
    if (k == 0) {
        throw Error(ErrorKind::DimensionMismatch, "reflection subproblem needs at least one IRS element");
    }
    SubproblemMatrices m =
        build_subproblem_matrices(config, channels, ReflectVector::from_phases(RVec::Zero(k)), w_u, w_m);

    SdpProblem p;
    std::size_t v = p.add_variable(k + 1, "V");
    p.objective = {{v, m.R_nu - q * config.zeta * m.R_nm}};
    p.objective_constant = m.A_nu - q * (config.zeta * m.A_nm + config.sigma2_nu);

    CMat near = m.R_nm - m.gamma_bar * m.R_nu;
    if (unit_diagonal_lower_bound(near) < -m.C) {
        p.add_constraint({{v, near}}, Sense::GreaterEqual, -m.C, "multicast_nu");
    }
    CMat far = m.R_fm - m.gamma_bar * m.R_fu;
    if (unit_diagonal_lower_bound(far) < -m.D) {
        p.add_constraint({{v, far}}, Sense::GreaterEqual, -m.D, "multicast_fu");
    }
    if (unit_diagonal_lower_bound(m.F) < config.gamma) {
        p.add_constraint({{v, m.F}}, Sense::GreaterEqual, config.gamma, "illumination");
    }
    p.pin_diagonal(v, 1.0);
    return p;
}

Recovered recover_rank_one(const CMat& x, RecoveryKind kind) {
    Recovered out;
    const Eigen::Index n = x.rows();
    double tr = x.trace().real();
    if (kind == RecoveryKind::Beamformer) {
        if (!(tr > 1e-14)) {
            out.vector = CVec::Zero(n);
            return out;
        }
        auto [lambda, u] = principal_eigpair(x);
        out.rank_ratio = lambda / tr;
        out.vector = std::sqrt(std::max(lambda, 0.0)) * u;
        return out;
    }
    if (n < 2) {
        throw Error(ErrorKind::DimensionMismatch, "reflection matrix must have size K + 1 >= 2");
    }
    auto [lambda, u] = principal_eigpair(x);
    out.rank_ratio = tr > 1e-14 ? lambda / tr : 1.0;
    cdouble last = u(n - 1);
    CVec vbar;
    if (std::abs(last) < 1e-9) {
        Eigen::Index imax = 0;
        u.cwiseAbs().maxCoeff(&imax);
        vbar = u * (std::conj(u(imax)) / std::abs(u(imax)));
        out.fallback = true;
    } else {
        vbar = u / last;
    }
    out.vector = ReflectVector::from_coefficients(vbar.head(n - 1).conjugate()).coefficients();
    return out;
}

std::optional<BeamformingSolution> allocate_power(double q, const SystemConfig& config,
                                                  const ChannelSet& channels, const ReflectVector& reflect,
                                                  const CVec& dir_u, const CVec& dir_m) {
    CVec du = unit(dir_u);
    CVec dm = unit(dir_m);
    CVec h_n = effective_channel(channels, reflect, User::Near);
    CVec h_f = effective_channel(channels, reflect, User::Far);
    double a_nu = beam_gain(h_n, du), a_nm = beam_gain(h_n, dm);
    double a_fu = beam_gain(h_f, du), a_fm = beam_gain(h_f, dm);
    double gb = config.gamma_bar();
    double pmax = config.p_max;

    // alpha p_u + beta p_m >= c
    struct HalfPlane {
        double alpha, beta, c;
    };
    const std::array<HalfPlane, 6> planes{{
        {-1.0, -1.0, -pmax},
        {-gb * a_nu, a_nm, gb * config.sigma2_nu},
        {-gb * a_fu, a_fm, gb * config.sigma2_fu},
        {a_fu, a_fm, config.gamma},
        {1.0, 0.0, 0.0},
        {0.0, 1.0, 0.0},
    }};
    auto satisfied = [&](double pu, double pm) {
        for (const auto& h : planes) {
            double scale = (std::abs(h.alpha) + std::abs(h.beta)) * pmax + std::abs(h.c);
            if (h.alpha * pu + h.beta * pm - h.c < -1e-12 * scale) {
                return false;
            }
        }
        return true;
    };
    auto value = [&](double pu, double pm) { return a_nu * pu - q * (config.zeta * a_nm * pm + config.sigma2_nu); };

    bool found = false;
    double best_pu = 0.0, best_pm = 0.0, best_val = kNegInf;
    for (std::size_t i = 0; i < planes.size(); ++i) {
        for (std::size_t j = i + 1; j < planes.size(); ++j) {
            const auto& a = planes[i];
            const auto& b = planes[j];
            double det = a.alpha * b.beta - a.beta * b.alpha;
            double scale = (std::abs(a.alpha) + std::abs(a.beta)) * (std::abs(b.alpha) + std::abs(b.beta));
            if (std::abs(det) <= 1e-14 * scale) {
                continue;
            }
            double pu = (a.c * b.beta - a.beta * b.c) / det;
            double pm = (a.alpha * b.c - a.c * b.alpha) / det;
            if (!std::isfinite(pu) || !std::isfinite(pm)) {
                continue;
            }
            pu = std::max(pu, 0.0);
            pm = std::max(pm, 0.0);
            double total = pu + pm;
            if (total > pmax) {
                pu *= pmax / total;
                pm *= pmax / total;
            }
            if (!satisfied(pu, pm)) {
                continue;
            }
            double val = value(pu, pm);
            double tie = 1e-12 * std::max(1.0, std::abs(val));
            if (!found || val > best_val + tie || (val >= best_val - tie && pu > best_pu)) {
                found = true;
                best_pu = pu;
                best_pm = pm;
                best_val = val;
            }
        }
    }
    if (!found) {
        return std::nullopt;
    }
    return BeamformingSolution{std::sqrt(best_pu) * du, std::sqrt(best_pm) * dm, reflect};
}

double dinkelbach_objective(double q, const SystemConfig& config, const ChannelSet& channels,
                            const BeamformingSolution& s) {
    CVec h_n = effective_channel(channels, s.reflect, User::Near);
    double u = beam_gain(h_n, s.w_u);
    double m = config.zeta * beam_gain(h_n, s.w_m) + config.sigma2_nu;
    return u - q * m;
}

double sinr_ratio(const SystemConfig& config, const ChannelSet& channels, const BeamformingSolution& s) {
    CVec h_n = effective_channel(channels, s.reflect, User::Near);
    return beam_gain(h_n, s.w_u) / (config.zeta * beam_gain(h_n, s.w_m) + config.sigma2_nu);
}

// ---------------------------------------------------------------------------
// Alternating optimization
// ---------------------------------------------------------------------------

AoResult ao_step(double q, const NormalizedInstance& inst, const BeamformingSolution& current,
                 const DinkelbachConfig& config, const SdpBackend& backend) {
    const SystemConfig& cfg = inst.config;
    const ChannelSet& ch = inst.channels;
    SrocrConfig sc = config.srocr;
    if (config.lazy_rank) {
        sc.max_iters = 0;
    }

    AoResult res;
    res.solution = current;
    res.feasible = check_feasibility(cfg, ch, current).feasible();
    res.objective = res.feasible ? dinkelbach_objective(q, cfg, ch, current) : kNegInf;
    auto accept = [&](const Candidate& c) {
        if (!c.valid) {
            return false;
        }
        if (res.feasible && c.objective < res.objective) {
            return false;
        }
        res.solution = c.solution;
        res.objective = c.objective;
        res.feasible = true;
        return true;
    };

    // (a) beamformers at fixed reflection
    {
        auto t0 = Clock::now();
        SdpProblem tp = build_transmit_subproblem(q, cfg, ch, current.reflect);
        SrocrResult sr = srocr_run(tp, {"W_u", "W_m"}, sc, backend);
        res.stats.sdp_solves += sr.solves;
        res.stats.transmit_status = sr.solution.status;
        if (sr.solution.optimal()) {
            Recovered ru = recover_rank_one(sr.solution[0], RecoveryKind::Beamformer);
            Recovered rm = recover_rank_one(sr.solution[1], RecoveryKind::Beamformer);
            BeamformingSolution raw{ru.vector, rm.vector, current.reflect};
            bool large = misses_by_more_than_one_percent(cfg, ch, raw);

            Candidate best;
            consider(best, allocate_power(q, cfg, ch, current.reflect, ru.vector, rm.vector), q, cfg, ch);
            bool fallback = false;
            if (!best.valid) {
                fallback = true;
                CVec h_n = unit(effective_channel(ch, current.reflect, User::Near));
                CVec h_f = unit(effective_channel(ch, current.reflect, User::Far));
                CVec both = unit(h_n + h_f);
                const std::vector<std::pair<CVec, CVec>> dirs{
                    {ru.vector, h_f}, {ru.vector, both}, {h_n, h_f}, {h_n, both}, {h_f, h_f}, {both, both}};
                for (const auto& [du, dm] : dirs) {
                    consider(best, allocate_power(q, cfg, ch, current.reflect, du, dm), q, cfg, ch);
                }
            }
            if (accept(best)) {
                res.stats.transmit_accepted = true;
                res.stats.rank_w_u = ru.rank_ratio;
                res.stats.rank_w_m = rm.rank_ratio;
                res.stats.rank_flagged = res.stats.rank_flagged || sr.rank_not_reached;
                res.stats.large_repair = res.stats.large_repair || large;
                res.stats.recovery_fallback = res.stats.recovery_fallback || fallback;
            }
        }
        res.stats.transmit_seconds += seconds_since(t0);
    }

    // (b) reflection at fixed beamformers
    if (ch.n_elements() > 0 && res.feasible) {
        auto t0 = Clock::now();
        const CVec& w_u = res.solution.w_u;
        const CVec& w_m = res.solution.w_m;
        SdpProblem rp = build_reflect_subproblem(q, cfg, ch, w_u, w_m);
        SrocrResult sr = srocr_run(rp, {"V"}, sc, backend);
        res.stats.sdp_solves += sr.solves;
        if (sr.solution.optimal()) {
            Recovered rv = recover_rank_one(sr.solution[0], RecoveryKind::Reflect);
            ReflectVector reflect = ReflectVector::from_coefficients(rv.vector);
            BeamformingSolution raw{w_u, w_m, reflect};
            bool large = misses_by_more_than_one_percent(cfg, ch, raw);
            Candidate best;
            consider(best, allocate_power(q, cfg, ch, reflect, w_u, w_m), q, cfg, ch);
            if (accept(best)) {
                res.stats.reflect_accepted = true;
                res.stats.rank_v = rv.rank_ratio;
                res.stats.rank_flagged = res.stats.rank_flagged || sr.rank_not_reached;
                res.stats.large_repair = res.stats.large_repair || large;
                res.stats.recovery_fallback = res.stats.recovery_fallback || rv.fallback;
            }
        }
        res.stats.reflect_seconds += seconds_since(t0);
    }
    return res;
}

const char* to_string(Termination t) {
    switch (t) {
    case Termination::Converged:
        return "converged";
    case Termination::MaxOuter:
        return "max_outer";
    case Termination::InnerFailure:
        return "inner_failure";
    }
    return "unknown";
}

SolveResult dinkelbach_solve(const SystemConfig& config, const ChannelSet& channels,
                             const DinkelbachConfig& dconfig, const SdpBackend& backend) {
    auto t_start = Clock::now();
    config.validate();
    channels.validate(config);
    dconfig.validate();

    NormalizedInstance inst = normalize(config, channels);
    const SystemConfig& cfg = inst.config;
    const ChannelSet& ch = inst.channels;
    const int n = ch.n_antennas();

    BeamformingSolution cur{CVec::Zero(n), CVec::Zero(n), initial_reflect(cfg)};
    bool feasible = false;
    double rank_u = 1.0, rank_m = 1.0, rank_v = 1.0;
    SolveReport report;
    double q = 0.0;

    auto absorb = [&](const AoResult& r) {
        report.sdp_solves += r.stats.sdp_solves;
        report.transmit_seconds += r.stats.transmit_seconds;
        report.reflect_seconds += r.stats.reflect_seconds;
        if (r.stats.transmit_accepted) {
            rank_u = r.stats.rank_w_u;
            rank_m = r.stats.rank_w_m;
        }
        if (r.stats.reflect_accepted) {
            rank_v = r.stats.rank_v;
        }
        report.large_repair = report.large_repair || r.stats.large_repair;
        report.recovery_fallback = report.recovery_fallback || r.stats.recovery_fallback;
    };

    // Inner AO loop at fixed q; returns the number of passes.
    auto run_ao = [&](double qv, const DinkelbachConfig& dc, int& solves) {
        int passes = 0;
        double prev = feasible ? dinkelbach_objective(qv, cfg, ch, cur) : kNegInf;
        for (int pass = 0; pass < dc.ao_inner_max; ++pass) {
            AoResult r = ao_step(qv, inst, cur, dc, backend);
            ++passes;
            solves += r.stats.sdp_solves;
            absorb(r);
            if (!r.feasible) {
                if (!feasible && r.stats.transmit_status == SdpStatus::Infeasible) {
                    SdpProblem tp = build_transmit_subproblem(qv, cfg, ch, cur.reflect);
                    std::string which = diagnose_infeasibility(tp, backend);
                    throw Error(ErrorKind::InfeasibleInstance,
                                "relaxed transmit problem is infeasible: constraint " + which + " cannot be met");
                }
                break;
            }
            cur = r.solution;
            feasible = true;
            double scale = std::max(1.0, std::abs(r.objective));
            bool small = std::isfinite(prev) && r.objective - prev <= dc.ao_epsilon * scale;
            prev = r.objective;
            if (small) {
                break;
            }
        }
        return passes;
    };

    report.termination = Termination::MaxOuter;
    for (int it = 1; it <= dconfig.max_outer; ++it) {
        auto t0 = Clock::now();
        OuterRecord rec;
        rec.iteration = it;
        rec.q_in = q;
        rec.ao_passes = run_ao(q, dconfig, rec.sdp_solves);
        if (!feasible) {
            report.termination = Termination::InnerFailure;
            break;
        }
        double u = beam_gain(effective_channel(ch, cur.reflect, User::Near), cur.w_u);
        double m = cfg.zeta * beam_gain(effective_channel(ch, cur.reflect, User::Near), cur.w_m) + cfg.sigma2_nu;
        rec.objective = u - q * m;
        rec.q_out = u / m;
        rec.rates = evaluate(cfg, ch, cur);
        rec.rates.illumination *= config.sigma2_nu;
        rec.rank_w_u = rank_u;
        rec.rank_w_m = rank_m;
        rec.rank_v = rank_v;
        rec.seconds = seconds_since(t0);
        report.iterations.push_back(rec);
        report.q_iterates.push_back(rec.q_out);
        report.outer_iterations = it;
        report.final_gap = rec.objective;
        if (rec.objective < dconfig.epsilon1) {
            report.termination = Termination::Converged;
            break;
        }
        q = rec.q_out;
    }

    if (dconfig.lazy_rank && feasible) {
        DinkelbachConfig polish = dconfig;
        polish.lazy_rank = false;
        polish.ao_inner_max = 1;
        int solves = 0;
        run_ao(q, polish, solves);
    }

    if (!feasible) {
        report.termination = Termination::InnerFailure;
    }
    report.rank_w_u = rank_u;
    report.rank_w_m = rank_m;
    report.rank_v = rank_v;
    double thr = dconfig.srocr.rank_threshold;
    report.rank_flagged = rank_u < thr || rank_m < thr || rank_v < thr;
    report.rates = evaluate(cfg, ch, cur);
    report.rates.illumination *= config.sigma2_nu;
    report.feasibility = check_feasibility(cfg, ch, cur);
    report.total_seconds = seconds_since(t_start);
    return {to_physical(inst, cur), report};
}

std::string report_to_json(const SolveReport& report) {
    using nlohmann::json;
    auto rates = [](const RateBreakdown& r) {
        return json{{"r_unicast", r.r_unicast},
                    {"r_multicast_nu", r.r_multicast_nu},
                    {"r_multicast_fu", r.r_multicast_fu},
                    {"r_multicast", r.r_multicast},
                    {"illumination", r.illumination}};
    };
    json iters = json::array();
    for (const auto& r : report.iterations) {
        iters.push_back({{"iteration", r.iteration},
                         {"q_in", r.q_in},
                         {"q_out", r.q_out},
                         {"objective", r.objective},
                         {"rates", rates(r.rates)},
                         {"ao_passes", r.ao_passes},
                         {"sdp_solves", r.sdp_solves},
                         {"rank_w_u", r.rank_w_u},
                         {"rank_w_m", r.rank_w_m},
                         {"rank_v", r.rank_v},
                         {"seconds", r.seconds}});
    }
    const auto& f = report.feasibility;
    json doc{{"termination", to_string(report.termination)},
             {"outer_iterations", report.outer_iterations},
             {"q_iterates", report.q_iterates},
             {"final_gap", report.final_gap},
             {"rates", rates(report.rates)},
             {"feasibility",
              {{"feasible", f.feasible()},
               {"multicast", f.multicast},
               {"power", f.power},
               {"illumination", f.illumination},
               {"unit_modulus", f.unit_modulus}}},
             {"rank_w_u", report.rank_w_u},
             {"rank_w_m", report.rank_w_m},
             {"rank_v", report.rank_v},
             {"rank_flagged", report.rank_flagged},
             {"large_repair", report.large_repair},
             {"recovery_fallback", report.recovery_fallback},
             {"sdp_solves", report.sdp_solves},
             {"transmit_seconds", report.transmit_seconds},
             {"reflect_seconds", report.reflect_seconds},
             {"total_seconds", report.total_seconds},
             {"iterations", iters}};
    return doc.dump(2);
}

}  // namespace irsnoma
