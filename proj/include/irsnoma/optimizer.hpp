// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "irsnoma/model.hpp"
#include "irsnoma/sdp.hpp"
#include "irsnoma/srocr.hpp"

namespace irsnoma {

struct DinkelbachConfig {
    double epsilon1 = 1e-4;  // on U - qM, noise-normalized units
    int max_outer = 30;
    int ao_inner_max = 20;
    double ao_epsilon = 1e-4;  // relative objective change
    // Run SROCR only once, at the final q, instead of in every AO step.
    bool lazy_rank = false;
    SrocrConfig srocr;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

// Rescales an instance so that sigma_n^2 = 1 and P_max = 1: channels are
// multiplied by sqrt(P_max) / sigma_n (G and h_B only; the IRS-user vectors
// stay as they are), beamformers divided by sqrt(P_max). Every SINR, rate and
// constraint is unchanged by the map.
struct NormalizedInstance {
    SystemConfig config;
    ChannelSet channels;
    double beam_scale = 1.0;  // physical w = beam_scale * normalized w
};

NormalizedInstance normalize(const SystemConfig& config, const ChannelSet& channels);
BeamformingSolution to_physical(const NormalizedInstance& inst, const BeamformingSolution& normalized);
BeamformingSolution to_normalized(const NormalizedInstance& inst, const BeamformingSolution& physical);

// ---------------------------------------------------------------------------
// Subproblems
// ---------------------------------------------------------------------------

// Quantities shared by both subproblems for a fixed reflect vector and fixed
// beamformers. With the lifted vector vbar = [conj(v); 1], every received
// amplitude is vbar^H c_ij, c_ij = [H_I_i w_j; h_B_i^H w_j], and
//   |h_i^H w_j|^2 = vbar^H R_ij vbar + A_ij,   P(theta) = vbar^H F vbar.
// R_ij is c_ij c_ij^H with its lower-right entry moved into A_ij.
struct SubproblemMatrices {
    CVec h_eff_nu, h_eff_fu;
    CMat H_n, H_f;  // h h^H
    CMat H_I_n, H_I_f;  // diag(h_I^H) G, K x N
    CMat F;
    CMat R_nu, R_nm, R_fu, R_fm;
    double A_nu = 0.0, A_nm = 0.0, A_fu = 0.0, A_fm = 0.0;
    double C = 0.0, D = 0.0;
    double gamma_bar = 0.0;
};

SubproblemMatrices build_subproblem_matrices(const SystemConfig& config, const ChannelSet& channels,
                                             const ReflectVector& reflect, const CVec& w_u, const CVec& w_m);

// Variables "W_u", "W_m". Rank-one constraints are left to SROCR.
SdpProblem build_transmit_subproblem(double q, const SystemConfig& config, const ChannelSet& channels,
                                     const ReflectVector& reflect);

// Variable "V" of size K + 1 with a unit diagonal. Multicast or illumination
// constraints that no unit-diagonal V can violate are omitted.
SdpProblem build_reflect_subproblem(double q, const SystemConfig& config, const ChannelSet& channels,
                                    const CVec& w_u, const CVec& w_m);

enum class RecoveryKind { Beamformer, Reflect };

struct Recovered {
    CVec vector;
    double rank_ratio = 1.0;
    bool fallback = false;  // reflect: last eigenvector entry too small to normalize by
};

// Beamformer: sqrt(lambda_max) u_max. Reflect: v with v_k = conj(u_k / u_{K+1})
// projected onto the unit circle.
Recovered recover_rank_one(const CMat& x, RecoveryKind kind);

// Best power split along fixed unit directions (a 2-variable linear program
// in (|w_u|^2, |w_m|^2), solved by vertex enumeration) for the objective
// U - qM under (9a)-(9c). Empty when no split is feasible.
std::optional<BeamformingSolution> allocate_power(double q, const SystemConfig& config,
                                                  const ChannelSet& channels, const ReflectVector& reflect,
                                                  const CVec& dir_u, const CVec& dir_m);

// U - qM
double dinkelbach_objective(double q, const SystemConfig& config, const ChannelSet& channels,
                            const BeamformingSolution& s);
// U / M
double sinr_ratio(const SystemConfig& config, const ChannelSet& channels, const BeamformingSolution& s);

// ---------------------------------------------------------------------------
// Alternating optimization and the Dinkelbach loop
// ---------------------------------------------------------------------------

struct AoStats {
    bool transmit_accepted = false;
    bool reflect_accepted = false;
    double rank_w_u = 1.0, rank_w_m = 1.0, rank_v = 1.0;
    bool rank_flagged = false;
    bool large_repair = false;  // recovered point missed (9a)/(9c) by more than 1 %
    bool recovery_fallback = false;
    SdpStatus transmit_status = SdpStatus::Optimal;
    int sdp_solves = 0;
    double transmit_seconds = 0.0;
    double reflect_seconds = 0.0;
};

struct AoResult {
    BeamformingSolution solution;
    double objective = 0.0;
    bool feasible = false;
    AoStats stats;
};

// One pass of (a) transmit update at fixed reflection, then (b) reflection
// update at fixed beamformers (skipped when K = 0). A candidate replaces the
// current point if the current point is infeasible, or if the candidate is
// feasible and does not lower U - qM; the objective of a feasible current
// point therefore never decreases. Works in normalized units.
AoResult ao_step(double q, const NormalizedInstance& inst, const BeamformingSolution& current,
                 const DinkelbachConfig& config, const SdpBackend& backend = default_backend());

enum class Termination { Converged, MaxOuter, InnerFailure };
const char* to_string(Termination t);

struct OuterRecord {
    int iteration = 0;
    double q_in = 0.0;  // q used in the parametric problem
    double q_out = 0.0;  // U / M of the returned point
    double objective = 0.0;  // U - q_in M
    RateBreakdown rates;
    int ao_passes = 0;
    int sdp_solves = 0;
    double rank_w_u = 1.0, rank_w_m = 1.0, rank_v = 1.0;
    double seconds = 0.0;
};

struct SolveReport {
    std::vector<double> q_iterates;
    std::vector<OuterRecord> iterations;
    RateBreakdown rates;
    FeasibilityReport feasibility;
    double rank_w_u = 1.0, rank_w_m = 1.0, rank_v = 1.0;
    bool rank_flagged = false;
    bool large_repair = false;
    bool recovery_fallback = false;
    Termination termination = Termination::MaxOuter;
    double final_gap = 0.0;  // U - qM at termination
    int outer_iterations = 0;
    int sdp_solves = 0;
    double transmit_seconds = 0.0;
    double reflect_seconds = 0.0;
    double total_seconds = 0.0;

    bool flagged() const { return rank_flagged || termination == Termination::InnerFailure || !feasibility.feasible(); }
};

struct SolveResult {
    BeamformingSolution solution;  // physical units
    SolveReport report;
};

// Throws Error(InfeasibleInstance) naming the violated constraint when the
// relaxed transmit problem at the initial reflection is infeasible.
SolveResult dinkelbach_solve(const SystemConfig& config, const ChannelSet& channels,
                             const DinkelbachConfig& dconfig = {}, const SdpBackend& backend = default_backend());

// JSON document, one record per outer iteration plus the final summary.
std::string report_to_json(const SolveReport& report);

}  // namespace irsnoma
