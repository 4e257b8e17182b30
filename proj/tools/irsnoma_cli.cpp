// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "irsnoma/channels.hpp"
#include "irsnoma/experiments.hpp"
#include "irsnoma/optimizer.hpp"

using namespace irsnoma;
using nlohmann::json;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    int jobs = 1;
};

RunConfig load(const Common& opts) {
    RunConfig rc = opts.config.empty() ? parse_run_config("{}") : load_run_config(opts.config);
    if (opts.seed) {
        rc.system.seed = *opts.seed;
        rc.sweep.base.seed = *opts.seed;
        rc.sweep.first_seed = *opts.seed;
        rc.trace.seeds = {*opts.seed};
    }
    return rc;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot write '" + path + "'");
    }
    out << text;
}

json vec_json(const CVec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back({v(i).real(), v(i).imag()});
    }
    return a;
}

ChannelSet channels_for(const RunConfig& rc) {
    if (rc.channels_file) {
        ChannelSet ch = load_channels(*rc.channels_file);
        ch.validate(rc.system);
        return ch;
    }
    return generate_channels(rc.system);
}

int cmd_solve(const Common& opts, const std::string& save_channels_path) {
    RunConfig rc = load(opts);
    ChannelSet ch = channels_for(rc);
    if (!save_channels_path.empty()) {
        save_channels(save_channels_path, ch);
    }
    SolveResult res = dinkelbach_solve(rc.system, ch, rc.solver);
    json doc;
    doc["report"] = json::parse(report_to_json(res.report));
    doc["solution"] = {{"w_u", vec_json(res.solution.w_u)},
                       {"w_m", vec_json(res.solution.w_m)},
                       {"phases", std::vector<double>(res.solution.reflect.phases().data(),
                                                      res.solution.reflect.phases().data() +
                                                          res.solution.reflect.size())}};
    doc["config"] = json::parse(run_config_to_json(rc));
    emit(opts.out, doc.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const Common& opts) {
    RunConfig rc = load(opts);
    std::vector<RunRecord> records = run_experiment(rc.sweep, rc.solver, opts.jobs);
    std::ostringstream csv;
    write_experiment_csv(csv, rc.sweep, records);
    emit(opts.out.empty() ? rc.sweep.output : opts.out, csv.str());
    return 0;
}

int cmd_trace(const Common& opts) {
    RunConfig rc = load(opts);
    std::vector<TraceRow> rows = convergence_trace(rc.system, rc.trace, rc.solver, opts.jobs);
    std::ostringstream csv;
    write_trace_csv(csv, rows);
    emit(opts.out, csv.str());
    return 0;
}

int cmd_oracle(const Common& opts, bool skip_pipeline) {
    RunConfig rc = load(opts);
    ChannelSet ch = channels_for(rc);
    OracleResult o = brute_force_oracle(rc.system, ch, rc.oracle);
    json doc{{"grid_points", o.points}, {"feasible", o.feasible}};
    if (o.feasible) {
        doc["oracle_r_u"] = o.r_unicast;
        doc["oracle_phases"] = std::vector<double>(o.best.reflect.phases().data(),
                                                   o.best.reflect.phases().data() + o.best.reflect.size());
    }
    if (!skip_pipeline) {
        SolveResult res = dinkelbach_solve(rc.system, ch, rc.solver);
        doc["pipeline_r_u"] = res.report.rates.r_unicast;
        doc["pipeline_feasible"] = res.report.feasibility.feasible();
        if (o.feasible && o.r_unicast > 0.0) {
            doc["ratio"] = res.report.rates.r_unicast / o.r_unicast;
        }
    }
    emit(opts.out, doc.dump(2) + "\n");
    return 0;
}

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidConfig:
        return 2;
    case ErrorKind::DimensionMismatch:
        return 3;
    case ErrorKind::DegenerateVariable:
        return 4;
    case ErrorKind::InfeasibleInstance:
        return 5;
    case ErrorKind::Io:
        return 6;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IRS-aided NOMA ISAC beamforming solver"};
    app.require_subcommand(1);

    Common opts;
    std::string save_channels_path;
    bool skip_pipeline = false;
    auto add_common = [&](CLI::App* sub, bool with_jobs) {
        sub->add_option("--config", opts.config, "JSON run configuration");
        sub->add_option("--seed", opts.seed, "Override the configured seed");
        sub->add_option("--out", opts.out, "Output file (default: stdout)");
        if (with_jobs) {
            sub->add_option("--jobs", opts.jobs, "Worker threads")->check(CLI::PositiveNumber);
        }
    };

    CLI::App* solve = app.add_subcommand("solve", "Solve one instance and print the report as JSON");
    add_common(solve, false);
    solve->add_option("--save-channels", save_channels_path, "Write the channel realization to this file");

    CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
    add_common(sweep, true);

    CLI::App* trace = app.add_subcommand("trace", "Write per-iteration Dinkelbach traces as CSV");
    add_common(trace, true);

    CLI::App* oracle = app.add_subcommand("oracle", "Brute-force grid search on a tiny instance");
    add_common(oracle, false);
    oracle->add_flag("--no-pipeline", skip_pipeline, "Skip the comparison solve");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (solve->parsed()) {
            return cmd_solve(opts, save_channels_path);
        }
        if (sweep->parsed()) {
            return cmd_sweep(opts);
        }
        if (trace->parsed()) {
            return cmd_trace(opts);
        }
        if (oracle->parsed()) {
            return cmd_oracle(opts, skip_pipeline);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
