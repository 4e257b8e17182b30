// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "irsnoma/experiments.hpp"

using namespace irsnoma;

namespace {

SystemConfig tiny(std::uint64_t seed, int n = 2, int k = 2) {
    SystemConfig c;
    c.n_antennas = n;
    c.n_elements = k;
    c.seed = seed;
    c.p_max = dbm_to_watts(10.0);
    c.gamma = 0.01 * c.sigma2_fu;
    c.r_m = 1.0;
    return c;
}

std::string strip_column(const std::string& csv, const std::string& column) {
    std::istringstream in(csv);
    std::string line, out;
    int drop = -1;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (drop < 0)
            for (std::size_t i = 0; i < cells.size(); ++i)
                if (cells[i] == column) drop = static_cast<int>(i);
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (static_cast<int>(i) != drop) out += cells[i] + ",";
        out += "\n";
    }
    return out;
}

}  // namespace

TEST(Scheme, NamesRoundTrip) {
    for (Scheme s : {Scheme::IrsNoma, Scheme::NoIrsNoma}) EXPECT_EQ(parse_scheme(to_string(s)), s);
    for (SweepAxis a : {SweepAxis::PMaxDbm, SweepAxis::RM, SweepAxis::Zeta}) EXPECT_EQ(parse_axis(to_string(a)), a);
    EXPECT_THROW(parse_scheme("oma"), Error);
    EXPECT_THROW(parse_axis("k"), Error);
}

TEST(Scheme, BenchmarkOnlyRemovesTheIrs) {
    SystemConfig c;
    SystemConfig b = apply_scheme(c, Scheme::NoIrsNoma);
    EXPECT_EQ(b.n_elements, 0);
    EXPECT_EQ(b.n_antennas, c.n_antennas);
    EXPECT_EQ(b.seed, c.seed);
    EXPECT_EQ(apply_scheme(c, Scheme::IrsNoma).n_elements, c.n_elements);
    ChannelSet with = generate_channels(c), without = generate_channels(b);
    EXPECT_EQ(with.h_bs_nu, without.h_bs_nu);
    EXPECT_EQ(with.h_bs_fu, without.h_bs_fu);
}

TEST(Scheme, AxisApplication) {
    SystemConfig c;
    EXPECT_NEAR(apply_axis(c, SweepAxis::PMaxDbm, 20.0).p_max, 0.1, 1e-15);
    EXPECT_EQ(apply_axis(c, SweepAxis::RM, 1.5).r_m, 1.5);
    EXPECT_EQ(apply_axis(c, SweepAxis::Zeta, 0.1).zeta, 0.1);
}

TEST(ExperimentSpec, Validation) {
    ExperimentSpec s;
    EXPECT_NO_THROW(s.validate());
    s.trials = 0;
    EXPECT_THROW(s.validate(), Error);
    s = {};
    s.values.clear();
    EXPECT_THROW(s.validate(), Error);
    s = {};
    s.schemes.clear();
    EXPECT_THROW(s.validate(), Error);
}

TEST(Experiment, CsvIsIdenticalAcrossJobCounts) {
    ExperimentSpec spec;
    spec.base = tiny(1, 3, 2);
    spec.values = {5.0, 15.0};
    spec.trials = 2;
    spec.first_seed = 11;
    DinkelbachConfig solver;
    auto a = run_experiment(spec, solver, 1);
    auto b = run_experiment(spec, solver, 3);
    ASSERT_EQ(a.size(), 8u);
    std::ostringstream sa, sb;
    write_experiment_csv(sa, spec, a);
    write_experiment_csv(sb, spec, b);
    EXPECT_EQ(strip_column(sa.str(), "runtime_s"), strip_column(sb.str(), "runtime_s"));

    // sorted (scheme, value, trial) order, seeds first_seed + trial
    EXPECT_EQ(a[0].scheme, Scheme::IrsNoma);
    EXPECT_EQ(a[0].value, 5.0);
    EXPECT_EQ(a[1].trial, 1);
    EXPECT_EQ(a[1].seed, 12u);
    EXPECT_EQ(a[4].scheme, Scheme::NoIrsNoma);
    for (const auto& r : a) EXPECT_TRUE(r.ok) << r.error;
}

TEST(Experiment, CsvLayout) {
    ExperimentSpec spec;
    spec.base = tiny(1);
    spec.values = {10.0};
    spec.schemes = {Scheme::IrsNoma};
    auto recs = run_experiment(spec, DinkelbachConfig{});
    std::ostringstream s;
    write_experiment_csv(s, spec, recs);
    std::istringstream in(s.str());
    std::string header, row, mean;
    std::getline(in, header);
    std::getline(in, row);
    std::getline(in, mean);
    EXPECT_EQ(header.rfind("version,scheme,axis,value,trial,seed,ok,r_u,r_n,illumination", 0), 0u);
    EXPECT_EQ(row.rfind("1,irs_noma,p_max_dbm,10,0,1,1,", 0), 0u) << row;
    EXPECT_EQ(mean.rfind("1,irs_noma,p_max_dbm,10,mean,", 0), 0u) << mean;
}

TEST(Experiment, FailuresAreRecordedInRow) {
    ExperimentSpec spec;
    spec.base = tiny(1);
    spec.base.r_m = 40.0;
    spec.values = {10.0};
    spec.schemes = {Scheme::IrsNoma};
    auto recs = run_experiment(spec, DinkelbachConfig{});
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_FALSE(recs[0].ok);
    EXPECT_EQ(recs[0].error.rfind("infeasible_instance: ", 0), 0u) << recs[0].error;
    auto sum = summarize(spec, recs);
    ASSERT_EQ(sum.size(), 1u);
    EXPECT_EQ(sum[0].runs, 0);
}

TEST(Experiment, SummaryAveragesSuccessfulRuns) {
    ExperimentSpec spec;
    spec.base = tiny(1);
    spec.values = {10.0};
    spec.schemes = {Scheme::NoIrsNoma};
    spec.trials = 3;
    auto recs = run_experiment(spec, DinkelbachConfig{}, 2);
    auto sum = summarize(spec, recs);
    ASSERT_EQ(sum.size(), 1u);
    double mean = 0.0;
    for (const auto& r : recs) mean += r.rates.r_unicast / 3.0;
    EXPECT_EQ(sum[0].runs, 3);
    EXPECT_NEAR(sum[0].mean_r_unicast, mean, 1e-12);
    EXPECT_EQ(sum[0].feasible_fraction, 1.0);
}

TEST(Experiment, SavedChannelsReplayTheSameRow) {
    SystemConfig c = tiny(4, 3, 2);
    RunRecord rec = run_single(c, DinkelbachConfig{});
    ASSERT_TRUE(rec.ok);
    ASSERT_TRUE(rec.feasible);
    auto path = std::filesystem::temp_directory_path() / "irsnoma_replay.json";
    save_channels(path.string(), generate_channels(c));
    ChannelSet ch = load_channels(path.string());
    std::filesystem::remove(path);
    SolveResult res = dinkelbach_solve(c, ch);
    EXPECT_EQ(res.report.rates.r_unicast, rec.rates.r_unicast);
    EXPECT_TRUE(check_feasibility(c, ch, res.solution).feasible());
}

TEST(Trace, RecordsOneRowPerOuterIteration) {
    SystemConfig base = tiny(2, 3, 2);
    TraceSpec spec;
    spec.r_m_values = {0.5, 1.0};
    spec.seeds = {1, 2};
    auto rows = convergence_trace(base, spec, DinkelbachConfig{}, 2);
    ASSERT_FALSE(rows.empty());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].r_m != rows[i - 1].r_m || rows[i].seed != rows[i - 1].seed) continue;
        EXPECT_EQ(rows[i].iteration, rows[i - 1].iteration + 1);
        EXPECT_GE(rows[i].r_unicast, rows[i - 1].r_unicast - 1e-6);
    }
    for (const auto& r : rows) EXPECT_TRUE(r.error.empty()) << r.error;
    std::ostringstream out;
    write_trace_csv(out, rows);
    EXPECT_EQ(out.str().rfind("version,r_m,seed,iteration,q,r_u,gap,termination,error\n", 0), 0u);
}

// ---------------------------------------------------------------------------
// Oracle
// ---------------------------------------------------------------------------

TEST(Oracle, SingleAntennaNoIrsMatchesClosedForm) {
    // N = 1, K = 0: rates depend only on the split p. Unicast SINR grows with
    // p and the multicast constraints cap it at
    //   p* = (a - gbar) / (a (1 + gbar)),  a = P |h|^2 / sigma^2,
    // the smaller over both users.
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        SystemConfig c = tiny(seed, 1, 0);
        c.zeta = 0.05;
        ChannelSet ch = generate_channels(c);
        OracleSpec spec;
        OracleResult r = brute_force_oracle(c, ch, spec);
        const double an = c.p_max * std::norm(ch.h_bs_nu(0)) / c.sigma2_nu;
        const double af = c.p_max * std::norm(ch.h_bs_fu(0)) / c.sigma2_fu;
        const double gb = c.gamma_bar();
        const double pstar = std::min({1.0, (an - gb) / (an * (1 + gb)), (af - gb) / (af * (1 + gb))});
        const bool illum = c.p_max * std::norm(ch.h_bs_fu(0)) >= c.gamma;
        if (pstar < 0 || !illum) {
            EXPECT_FALSE(r.feasible);
            continue;
        }
        ASSERT_TRUE(r.feasible);
        const int levels = spec.power_levels - 1;
        const double pgrid = std::floor(pstar * levels + 1e-9) / levels;
        auto rate = [&](double p) { return std::log2(1 + p * an / (c.zeta * (1 - p) * an + 1)); };
        EXPECT_NEAR(r.r_unicast, rate(pgrid), 1e-9);
        EXPECT_LE(r.r_unicast, rate(pstar) + 1e-12);
        EXPECT_EQ(r.points, spec.grid_size(c));
    }
}

TEST(Oracle, RefinementNeverLowersTheOptimum) {
    OracleSpec coarse{4, 5, 3, 2};
    OracleSpec fine = coarse.refined();
    EXPECT_EQ(fine.phase_levels, 8);
    EXPECT_EQ(fine.power_levels, 9);
    EXPECT_EQ(fine.direction_angles, 5);
    EXPECT_EQ(fine.direction_phases, 4);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        SystemConfig c = tiny(seed);
        ChannelSet ch = generate_channels(c);
        OracleResult a = brute_force_oracle(c, ch, coarse), b = brute_force_oracle(c, ch, fine);
        if (a.feasible) {
            ASSERT_TRUE(b.feasible);
            EXPECT_GE(b.r_unicast, a.r_unicast - 1e-12);
        }
    }
}

TEST(Oracle, BestPointIsFeasibleAndMatchesRate) {
    SystemConfig c = tiny(3);
    ChannelSet ch = generate_channels(c);
    OracleResult r = brute_force_oracle(c, ch, OracleSpec{8, 11, 5, 4});
    ASSERT_TRUE(r.feasible);
    EXPECT_TRUE(check_feasibility(c, ch, r.best).feasible());
    EXPECT_NEAR(evaluate(c, ch, r.best).r_unicast, r.r_unicast, 1e-12);
}

TEST(Oracle, PipelineIsNotBeatenByACoarseGrid) {
    SystemConfig c = tiny(2);
    ChannelSet ch = generate_channels(c);
    OracleResult r = brute_force_oracle(c, ch, OracleSpec{8, 11, 5, 4});
    SolveResult s = dinkelbach_solve(c, ch);
    if (r.feasible) EXPECT_GE(s.report.rates.r_unicast, r.r_unicast * 0.95);
}

TEST(Oracle, ValidationRejectsLargeInstances) {
    OracleSpec spec;
    EXPECT_THROW(spec.validate(tiny(1, 3, 2)), Error);
    EXPECT_THROW(spec.validate(tiny(1, 2, 3)), Error);
    EXPECT_NO_THROW(spec.validate(tiny(1)));
    spec.power_levels = 1;
    EXPECT_THROW(spec.validate(tiny(1)), Error);
    spec = OracleSpec{256, 1001, 100, 100};
    EXPECT_THROW(spec.validate(tiny(1)), Error);
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

TEST(RunConfigParse, EmptyDocumentGivesDefaults) {
    RunConfig rc = parse_run_config("{}");
    SystemConfig d;
    EXPECT_EQ(rc.system.n_antennas, d.n_antennas);
    EXPECT_EQ(rc.system.p_max, d.p_max);
    EXPECT_EQ(rc.sweep.first_seed, rc.system.seed);
    EXPECT_FALSE(rc.channels_file.has_value());
}

TEST(RunConfigParse, DbmFields) {
    RunConfig rc = parse_run_config(R"({"system": {"p_max_dbm": 20, "sigma2_dbm": -90, "gamma_dbm": -100}})");
    EXPECT_NEAR(rc.system.p_max, 0.1, 1e-15);
    EXPECT_NEAR(rc.system.sigma2_nu, 1e-12, 1e-24);
    EXPECT_NEAR(rc.system.sigma2_fu, 1e-12, 1e-24);
    EXPECT_NEAR(rc.system.gamma, 1e-13, 1e-25);
}

TEST(RunConfigParse, GammaRelativeToNoise) {
    RunConfig rc = parse_run_config(R"({"system": {"sigma2_fu_dbm": -80, "gamma_over_noise": 0.5}})");
    EXPECT_NEAR(rc.system.gamma, 0.5e-11, 1e-24);
}

TEST(RunConfigParse, RejectsBadInput) {
    auto kind_of = [](const std::string& text) {
        try {
            parse_run_config(text);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Io;  // sentinel: no throw
    };
    EXPECT_EQ(kind_of(R"({"system": {"bogus": 1}})"), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind_of(R"({"extra": {}})"), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind_of(R"({"system": {"p_max": 1, "p_max_dbm": 30}})"), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind_of(R"({"system": {"gamma": 1e-14, "gamma_over_noise": 0.1}})"), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind_of(R"({"system": {"n_antennas": "many"}})"), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind_of(R"({"system": {"zeta": 2}})"), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind_of(R"({"sweep": {"axis": "k"}})"), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind_of(R"({"solver": {"srocr": {"rank_threshold": 0.2}}})"), ErrorKind::InvalidConfig);
    EXPECT_EQ(kind_of("[1, 2"), ErrorKind::InvalidConfig);
}

TEST(RunConfigParse, RoundTrip) {
    RunConfig rc = parse_run_config(
        R"({"system": {"n_antennas": 4, "n_elements": 3, "p_max_dbm": 25, "zeta": 0.05, "r_m": 1.5, "seed": 9},
            "solver": {"epsilon1": 1e-5, "lazy_rank": true, "srocr": {"max_iters": 50}},
            "sweep": {"axis": "zeta", "values": [0, 0.05], "schemes": ["no_irs_noma"], "trials": 2},
            "trace": {"r_m_values": [1], "seeds": [3, 4]},
            "oracle": {"phase_levels": 8},
            "channels_file": "ch.json"})");
    RunConfig back = parse_run_config(run_config_to_json(rc));
    EXPECT_EQ(back.system.n_antennas, 4);
    EXPECT_EQ(back.system.p_max, rc.system.p_max);
    EXPECT_EQ(back.system.gamma, rc.system.gamma);
    EXPECT_EQ(back.solver.epsilon1, 1e-5);
    EXPECT_TRUE(back.solver.lazy_rank);
    EXPECT_EQ(back.solver.srocr.max_iters, 50);
    EXPECT_EQ(back.sweep.axis, SweepAxis::Zeta);
    EXPECT_EQ(back.sweep.values, rc.sweep.values);
    EXPECT_EQ(back.sweep.schemes, std::vector<Scheme>{Scheme::NoIrsNoma});
    EXPECT_EQ(back.sweep.first_seed, 9u);
    EXPECT_EQ(back.trace.seeds, (std::vector<std::uint64_t>{3, 4}));
    EXPECT_EQ(back.oracle.phase_levels, 8);
    EXPECT_EQ(back.channels_file, std::optional<std::string>("ch.json"));
}

TEST(RunConfigParse, MissingFileIsIoError) {
    try {
        load_run_config("/nonexistent/config.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Io);
    }
}

// ---------------------------------------------------------------------------
// Command line
// ---------------------------------------------------------------------------

namespace {

int run_cli(const std::string& args, std::string& out, std::string& err) {
    auto dir = std::filesystem::temp_directory_path();
    auto o = dir / "irsnoma_cli_out.txt", e = dir / "irsnoma_cli_err.txt";
    std::string cmd = std::string(IRSNOMA_CLI_PATH) + " " + args + " >" + o.string() + " 2>" + e.string();
    int status = std::system(cmd.c_str());
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream f(p);
        std::stringstream s;
        s << f.rdbuf();
        return s.str();
    };
    out = slurp(o);
    err = slurp(e);
    std::filesystem::remove(o);
    std::filesystem::remove(e);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write_temp(const std::string& name, const std::string& text) {
    auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << text;
    return p.string();
}

}  // namespace

TEST(Cli, BadConfigGivesTypedError) {
    std::string cfg = write_temp("irsnoma_bad.json", R"({"system": {"bogus": 1}})");
    std::string out, err;
    EXPECT_EQ(run_cli("solve --config " + cfg, out, err), 2);
    EXPECT_EQ(err.rfind("error: invalid_config: ", 0), 0u) << err;
    std::filesystem::remove(cfg);
}

TEST(Cli, MissingConfigIsIoError) {
    std::string out, err;
    EXPECT_EQ(run_cli("solve --config /nonexistent/cfg.json", out, err), 6);
    EXPECT_EQ(err.rfind("error: io_error: ", 0), 0u) << err;
}

TEST(Cli, InfeasibleInstanceExitCode) {
    std::string cfg = write_temp("irsnoma_infeasible.json",
                                 R"({"system": {"n_antennas": 2, "n_elements": 2, "r_m": 40}})");
    std::string out, err;
    EXPECT_EQ(run_cli("solve --config " + cfg, out, err), 5);
    EXPECT_EQ(err.rfind("error: infeasible_instance: ", 0), 0u) << err;
    std::filesystem::remove(cfg);
}

TEST(Cli, SolveWritesJsonReport) {
    std::string cfg = write_temp("irsnoma_ok.json", R"({"system": {"n_antennas": 3, "n_elements": 2}})");
    std::string out, err;
    ASSERT_EQ(run_cli("solve --config " + cfg + " --seed 3", out, err), 0) << err;
    auto doc = nlohmann::json::parse(out);
    EXPECT_TRUE(doc["report"]["feasibility"]["feasible"].get<bool>());
    EXPECT_EQ(doc["config"]["system"]["seed"], 3);
    EXPECT_EQ(doc["solution"]["phases"].size(), 2u);
    std::filesystem::remove(cfg);
}

TEST(Cli, UnknownSubcommandFails) {
    std::string out, err;
    EXPECT_NE(run_cli("frobnicate", out, err), 0);
}
