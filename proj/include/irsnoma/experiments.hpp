// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "irsnoma/channels.hpp"
#include "irsnoma/model.hpp"
#include "irsnoma/optimizer.hpp"

namespace irsnoma {

enum class Scheme { IrsNoma, NoIrsNoma };
const char* to_string(Scheme s);
Scheme parse_scheme(const std::string& name);

enum class SweepAxis { PMaxDbm, RM, Zeta };
const char* to_string(SweepAxis a);
SweepAxis parse_axis(const std::string& name);

// The benchmark is the same instance with the IRS removed.
SystemConfig apply_scheme(SystemConfig config, Scheme scheme);
SystemConfig apply_axis(SystemConfig config, SweepAxis axis, double value);

struct ExperimentSpec {
    SystemConfig base;
    SweepAxis axis = SweepAxis::PMaxDbm;
    std::vector<double> values{0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
    std::vector<Scheme> schemes{Scheme::IrsNoma, Scheme::NoIrsNoma};
    int trials = 1;
    // Trial t uses seed first_seed + t for both schemes and every axis value.
    std::uint64_t first_seed = 1;
    std::string output;

    void validate() const;
};

struct RunRecord {
    Scheme scheme = Scheme::IrsNoma;
    double value = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;  // "<kind>: <message>" when !ok
    RateBreakdown rates;
    bool feasible = false;
    int outer_iterations = 0;
    double rank_w_u = 0.0, rank_w_m = 0.0, rank_v = 0.0;
    bool rank_flagged = false;
    bool large_repair = false;
    std::string termination;
    int sdp_solves = 0;
    double runtime_s = 0.0;
};

// Generates channels for `config` (its own seed) and solves. Errors are
// captured in the record.
RunRecord run_single(const SystemConfig& config, const DinkelbachConfig& solver);

// Every (scheme, value, trial) work item, in that sorted order regardless of
// `jobs`.
std::vector<RunRecord> run_experiment(const ExperimentSpec& spec, const DinkelbachConfig& solver, int jobs = 1);

struct PointSummary {
    Scheme scheme = Scheme::IrsNoma;
    double value = 0.0;
    int runs = 0;  // successful runs
    double mean_r_unicast = 0.0;
    double mean_r_multicast = 0.0;
    double mean_illumination = 0.0;
    double feasible_fraction = 0.0;
};

std::vector<PointSummary> summarize(const ExperimentSpec& spec, const std::vector<RunRecord>& records);

constexpr int kCsvVersion = 1;

// One row per run followed by one "mean" row per (scheme, value).
void write_experiment_csv(std::ostream& out, const ExperimentSpec& spec, const std::vector<RunRecord>& records);

// ---------------------------------------------------------------------------
// Convergence traces
// ---------------------------------------------------------------------------

struct TraceSpec {
    std::vector<double> r_m_values{0.5, 1.0, 2.0};
    std::vector<std::uint64_t> seeds{1};

    void validate() const;
};

struct TraceRow {
    double r_m = 0.0;
    std::uint64_t seed = 0;
    int iteration = 0;
    double q = 0.0;
    double r_unicast = 0.0;
    double gap = 0.0;  // U - q_in M
    std::string termination;
    std::string error;
};

std::vector<TraceRow> convergence_trace(const SystemConfig& base, const TraceSpec& spec,
                                        const DinkelbachConfig& solver, int jobs = 1);
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);

// ---------------------------------------------------------------------------
// Brute-force oracle for tiny instances
// ---------------------------------------------------------------------------

// Nested grids: phases 2 pi k / phase_levels per element, power split
// p = i / (power_levels - 1) with p P_max on w_u and (1 - p) P_max on w_m,
// and per-beamformer unit directions cos(a) e_1 + sin(a) e^{j b} e_2 in an
// orthonormal basis of span{h_n, h_f}, a on direction_angles points of
// [0, pi/2] and b on direction_phases points of [0, 2 pi). At N = 1 the
// only direction is 1.
struct OracleSpec {
    int phase_levels = 16;
    int power_levels = 41;
    int direction_angles = 9;
    int direction_phases = 8;

    double grid_size(const SystemConfig& config) const;
    // Every point of this grid is also a point of the refined one.
    OracleSpec refined() const;
    void validate(const SystemConfig& config) const;
};

struct OracleResult {
    bool feasible = false;  // false: infeasible at this resolution
    double r_unicast = 0.0;
    BeamformingSolution best;
    double points = 0.0;
};

// Requires N <= 2 and K <= 2.
OracleResult brute_force_oracle(const SystemConfig& config, const ChannelSet& channels, const OracleSpec& spec);

// ---------------------------------------------------------------------------
// Run configuration files
// ---------------------------------------------------------------------------

// JSON document with optional sections "system", "solver", "sweep", "trace"
// and "oracle"; field names follow the structs above. Powers may be given in
// watts ("p_max", "sigma2_nu", "gamma") or dBm ("p_max_dbm", ...), and Gamma
// also relative to the far-user noise ("gamma_over_noise").
struct RunConfig {
    SystemConfig system;
    DinkelbachConfig solver;
    ExperimentSpec sweep;
    TraceSpec trace;
    OracleSpec oracle;
    std::optional<std::string> channels_file;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
std::string run_config_to_json(const RunConfig& config);

}  // namespace irsnoma
