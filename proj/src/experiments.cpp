// SPDX-License-Identifier: Apache-2.0

#include "irsnoma/experiments.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace irsnoma {

using nlohmann::json;

const char* to_string(Scheme s) {
    return s == Scheme::IrsNoma ? "irs_noma" : "no_irs_noma";
}

Scheme parse_scheme(const std::string& name) {
    if (name == "irs_noma") {
        return Scheme::IrsNoma;
    }
    if (name == "no_irs_noma") {
        return Scheme::NoIrsNoma;
    }
    throw Error(ErrorKind::InvalidConfig, "unknown scheme '" + name + "'");
}

const char* to_string(SweepAxis a) {
    switch (a) {
    case SweepAxis::PMaxDbm:
        return "p_max_dbm";
    case SweepAxis::RM:
        return "r_m";
    case SweepAxis::Zeta:
        return "zeta";
    }
    return "unknown";
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "p_max_dbm") {
        return SweepAxis::PMaxDbm;
    }
    if (name == "r_m") {
        return SweepAxis::RM;
    }
    if (name == "zeta") {
        return SweepAxis::Zeta;
    }
    throw Error(ErrorKind::InvalidConfig, "unknown sweep axis '" + name + "'");
}

SystemConfig apply_scheme(SystemConfig config, Scheme scheme) {
    if (scheme == Scheme::NoIrsNoma) {
        config.n_elements = 0;
    }
    return config;
}

SystemConfig apply_axis(SystemConfig config, SweepAxis axis, double value) {
    switch (axis) {
    case SweepAxis::PMaxDbm:
        config.p_max = dbm_to_watts(value);
        break;
    case SweepAxis::RM:
        config.r_m = value;
        break;
    case SweepAxis::Zeta:
        config.zeta = value;
        break;
    }
    return config;
}

void ExperimentSpec::validate() const {
    base.validate();
    if (values.empty()) {
        throw Error(ErrorKind::InvalidConfig, "sweep values must not be empty");
    }
    if (schemes.empty()) {
        throw Error(ErrorKind::InvalidConfig, "sweep schemes must not be empty");
    }
    if (trials < 1) {
        throw Error(ErrorKind::InvalidConfig, "trials must be at least 1");
    }
    for (double v : values) {
        apply_axis(base, axis, v).validate();
    }
}

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

namespace {

template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    std::size_t workers = static_cast<std::size_t>(std::max(1, jobs));
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                fn(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

std::string describe(const std::exception& e) {
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
        return std::string(to_string(err->kind())) + ": " + err->what();
    }
    return std::string("error: ") + e.what();
}

}  // namespace

RunRecord run_single(const SystemConfig& config, const DinkelbachConfig& solver) {
    RunRecord r;
    r.seed = config.seed;
    auto t0 = std::chrono::steady_clock::now();
    try {
        ChannelSet ch = generate_channels(config);
        SolveResult res = dinkelbach_solve(config, ch, solver);
        const SolveReport& rep = res.report;
        r.ok = true;
        r.rates = rep.rates;
        r.feasible = rep.feasibility.feasible();
        r.outer_iterations = rep.outer_iterations;
        r.rank_w_u = rep.rank_w_u;
        r.rank_w_m = rep.rank_w_m;
        r.rank_v = rep.rank_v;
        r.rank_flagged = rep.rank_flagged;
        r.large_repair = rep.large_repair;
        r.termination = to_string(rep.termination);
        r.sdp_solves = rep.sdp_solves;
    } catch (const std::exception& e) {
        r.ok = false;
        r.error = describe(e);
    }
    r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec, const DinkelbachConfig& solver, int jobs) {
    spec.validate();
    solver.validate();
    struct Item {
        Scheme scheme;
        double value;
        int trial;
    };
    std::vector<Item> items;
    for (Scheme s : spec.schemes) {
        for (double v : spec.values) {
            for (int t = 0; t < spec.trials; ++t) {
                items.push_back({s, v, t});
            }
        }
    }
    std::vector<RunRecord> out(items.size());
    parallel_for(items.size(), jobs, [&](std::size_t i) {
        const Item& it = items[i];
        SystemConfig c = apply_scheme(apply_axis(spec.base, spec.axis, it.value), it.scheme);
        c.seed = spec.first_seed + static_cast<std::uint64_t>(it.trial);
        RunRecord r = run_single(c, solver);
        r.scheme = it.scheme;
        r.value = it.value;
        r.trial = it.trial;
        out[i] = std::move(r);
    });
    return out;
}

std::vector<PointSummary> summarize(const ExperimentSpec& spec, const std::vector<RunRecord>& records) {
    std::vector<PointSummary> out;
    for (Scheme s : spec.schemes) {
        for (double v : spec.values) {
            PointSummary p;
            p.scheme = s;
            p.value = v;
            int total = 0, feasible = 0;
            for (const auto& r : records) {
                if (r.scheme != s || r.value != v) {
                    continue;
                }
                ++total;
                if (!r.ok) {
                    continue;
                }
                ++p.runs;
                feasible += r.feasible ? 1 : 0;
                p.mean_r_unicast += r.rates.r_unicast;
                p.mean_r_multicast += r.rates.r_multicast;
                p.mean_illumination += r.rates.illumination;
            }
            if (p.runs > 0) {
                p.mean_r_unicast /= p.runs;
                p.mean_r_multicast /= p.runs;
                p.mean_illumination /= p.runs;
            }
            p.feasible_fraction = total > 0 ? static_cast<double>(feasible) / total : 0.0;
            out.push_back(p);
        }
    }
    return out;
}

namespace {

std::string num(double x) {
    std::ostringstream s;
    s << std::setprecision(12) << x;
    return s.str();
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return out + "\"";
}

}  // namespace

void write_experiment_csv(std::ostream& out, const ExperimentSpec& spec, const std::vector<RunRecord>& records) {
    const char* axis = to_string(spec.axis);
    out << "version,scheme,axis,value,trial,seed,ok,r_u,r_n,illumination,feasible,outer_iterations,"
           "rank_w_u,rank_w_m,rank_v,rank_flagged,large_repair,termination,sdp_solves,runtime_s,error\n";
    for (const auto& r : records) {
        out << kCsvVersion << ',' << to_string(r.scheme) << ',' << axis << ',' << num(r.value) << ',' << r.trial
            << ',' << r.seed << ',' << (r.ok ? 1 : 0) << ',' << num(r.rates.r_unicast) << ','
            << num(r.rates.r_multicast) << ',' << num(r.rates.illumination) << ',' << (r.feasible ? 1 : 0) << ','
            << r.outer_iterations << ',' << num(r.rank_w_u) << ',' << num(r.rank_w_m) << ',' << num(r.rank_v)
            << ',' << (r.rank_flagged ? 1 : 0) << ',' << (r.large_repair ? 1 : 0) << ',' << r.termination << ','
            << r.sdp_solves << ',' << std::fixed << std::setprecision(4) << r.runtime_s << std::defaultfloat
            << ',' << csv_escape(r.error) << '\n';
    }
    for (const auto& p : summarize(spec, records)) {
        out << kCsvVersion << ',' << to_string(p.scheme) << ',' << axis << ',' << num(p.value) << ",mean,,"
            << p.runs << ',' << num(p.mean_r_unicast) << ',' << num(p.mean_r_multicast) << ','
            << num(p.mean_illumination) << ',' << num(p.feasible_fraction) << ",,,,,,,,,,\n";
    }
}

// ---------------------------------------------------------------------------
// Convergence traces
// ---------------------------------------------------------------------------

void TraceSpec::validate() const {
    if (r_m_values.empty() || seeds.empty()) {
        throw Error(ErrorKind::InvalidConfig, "trace needs at least one R_m value and one seed");
    }
    for (double r : r_m_values) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw Error(ErrorKind::InvalidConfig, "trace R_m values must be finite and nonnegative");
        }
    }
}

std::vector<TraceRow> convergence_trace(const SystemConfig& base, const TraceSpec& spec,
                                        const DinkelbachConfig& solver, int jobs) {
    spec.validate();
    solver.validate();
    std::vector<std::pair<double, std::uint64_t>> items;
    for (double r : spec.r_m_values) {
        for (std::uint64_t s : spec.seeds) {
            items.emplace_back(r, s);
        }
    }
    std::vector<std::vector<TraceRow>> parts(items.size());
    parallel_for(items.size(), jobs, [&](std::size_t i) {
        SystemConfig c = base;
        c.r_m = items[i].first;
        c.seed = items[i].second;
        std::vector<TraceRow>& rows = parts[i];
        try {
            ChannelSet ch = generate_channels(c);
            SolveResult res = dinkelbach_solve(c, ch, solver);
            for (const auto& it : res.report.iterations) {
                TraceRow row;
                row.r_m = c.r_m;
                row.seed = c.seed;
                row.iteration = it.iteration;
                row.q = it.q_out;
                row.r_unicast = std::log2(1.0 + it.q_out);
                row.gap = it.objective;
                row.termination = to_string(res.report.termination);
                rows.push_back(row);
            }
        } catch (const std::exception& e) {
            TraceRow row;
            row.r_m = c.r_m;
            row.seed = c.seed;
            row.error = describe(e);
            rows.push_back(row);
        }
    });
    std::vector<TraceRow> out;
    for (auto& p : parts) {
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
    out << "version,r_m,seed,iteration,q,r_u,gap,termination,error\n";
    for (const auto& r : rows) {
        out << kCsvVersion << ',' << num(r.r_m) << ',' << r.seed << ',' << r.iteration << ',' << num(r.q) << ','
            << num(r.r_unicast) << ',' << num(r.gap) << ',' << r.termination << ',' << csv_escape(r.error)
            << '\n';
    }
}

// ---------------------------------------------------------------------------
// Oracle
// ---------------------------------------------------------------------------

double OracleSpec::grid_size(const SystemConfig& config) const {
    double phases = std::pow(static_cast<double>(phase_levels), config.n_elements);
    double dirs = config.n_antennas == 1 ? 1.0 : static_cast<double>(direction_angles) * direction_phases;
    return phases * power_levels * dirs * dirs;
}

OracleSpec OracleSpec::refined() const {
    return {2 * phase_levels, 2 * (power_levels - 1) + 1, 2 * (direction_angles - 1) + 1, 2 * direction_phases};
}

void OracleSpec::validate(const SystemConfig& config) const {
    if (phase_levels < 1 || power_levels < 2 || direction_angles < 2 || direction_phases < 1) {
        throw Error(ErrorKind::InvalidConfig,
                    "oracle grid needs phase_levels >= 1, power_levels >= 2, direction_angles >= 2, "
                    "direction_phases >= 1");
    }
    if (config.n_antennas > 2 || config.n_elements > 2) {
        throw Error(ErrorKind::InvalidConfig, "oracle is limited to N <= 2 and K <= 2");
    }
    if (grid_size(config) > 1e8) {
        throw Error(ErrorKind::InvalidConfig, "oracle grid exceeds 1e8 points");
    }
}

OracleResult brute_force_oracle(const SystemConfig& config, const ChannelSet& channels, const OracleSpec& spec) {
    config.validate();
    channels.validate(config);
    spec.validate(config);
    const int n = config.n_antennas;
    const int k = config.n_elements;
    const double gb = config.gamma_bar();
    OracleResult res;
    res.points = spec.grid_size(config);

    std::vector<double> p_grid(spec.power_levels);
    for (int i = 0; i < spec.power_levels; ++i) {
        p_grid[i] = static_cast<double>(i) / (spec.power_levels - 1);
    }

    long long combos = 1;
    for (int e = 0; e < k; ++e) {
        combos *= spec.phase_levels;
    }
    std::vector<int> idx(k, 0);
    for (long long c = 0; c < combos; ++c) {
        long long rest = c;
        RVec phases(k);
        for (int e = 0; e < k; ++e) {
            idx[e] = static_cast<int>(rest % spec.phase_levels);
            rest /= spec.phase_levels;
            phases(e) = 2.0 * kPi * idx[e] / spec.phase_levels;
        }
        ReflectVector reflect = ReflectVector::from_phases(phases);
        CVec h_n = effective_channel(channels, reflect, User::Near);
        CVec h_f = effective_channel(channels, reflect, User::Far);

        std::vector<CVec> dirs;
        if (n == 1) {
            dirs.push_back(CVec::Ones(1));
        } else {
            CVec e1 = h_n.norm() > 0.0 ? CVec(h_n / h_n.norm()) : CVec(CVec::Unit(2, 0));
            CVec e2 = h_f - e1 * e1.dot(h_f);
            if (e2.norm() <= 1e-12 * std::max(1e-300, h_f.norm())) {
                e2 = CVec(2);
                e2 << -std::conj(e1(1)), std::conj(e1(0));
            }
            e2 /= e2.norm();
            for (int a = 0; a < spec.direction_angles; ++a) {
                double ang = 0.5 * kPi * a / (spec.direction_angles - 1);
                for (int b = 0; b < spec.direction_phases; ++b) {
                    double ph = 2.0 * kPi * b / spec.direction_phases;
                    dirs.push_back(std::cos(ang) * e1 + std::sin(ang) * std::polar(1.0, ph) * e2);
                }
            }
        }
        std::vector<double> gn(dirs.size()), gf(dirs.size());
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            gn[d] = std::norm(h_n.dot(dirs[d]));
            gf[d] = std::norm(h_f.dot(dirs[d]));
        }
        for (std::size_t du = 0; du < dirs.size(); ++du) {
            for (std::size_t dm = 0; dm < dirs.size(); ++dm) {
                for (double p : p_grid) {
                    double pu = p * config.p_max;
                    double pm = (1.0 - p) * config.p_max;
                    double x = pu * gn[du], y = pm * gn[dm];
                    double xf = pu * gf[du], yf = pm * gf[dm];
                    if (y < gb * (x + config.sigma2_nu) || yf < gb * (xf + config.sigma2_fu)) {
                        continue;
                    }
                    if (xf + yf < config.gamma) {
                        continue;
                    }
                    double rate = std::log2(1.0 + x / (config.zeta * y + config.sigma2_nu));
                    if (!res.feasible || rate > res.r_unicast) {
                        res.feasible = true;
                        res.r_unicast = rate;
                        res.best = {std::sqrt(pu) * dirs[du], std::sqrt(pm) * dirs[dm], reflect};
                    }
                }
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Config files
// ---------------------------------------------------------------------------

namespace {

void reject_unknown(const json& obj, const std::string& section, const std::set<std::string>& known) {
    if (!obj.is_object()) {
        throw Error(ErrorKind::InvalidConfig, "section '" + section + "' must be an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key)) {
            throw Error(ErrorKind::InvalidConfig, "unknown field '" + key + "' in section '" + section + "'");
        }
    }
}

template <typename T>
void read(const json& obj, const char* key, T& target) {
    if (obj.contains(key)) {
        try {
            target = obj.at(key).get<T>();
        } catch (const json::exception&) {
            throw Error(ErrorKind::InvalidConfig, std::string("field '") + key + "' has the wrong type");
        }
    }
}

Point2 read_point(const json& obj, const char* key, Point2 fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    std::vector<double> xy;
    read(obj, key, xy);
    if (xy.size() != 2) {
        throw Error(ErrorKind::InvalidConfig, std::string("field '") + key + "' must be [x, y]");
    }
    return {xy[0], xy[1]};
}

void read_power(const json& obj, const std::string& name, double& target) {
    bool watts = obj.contains(name);
    bool dbm = obj.contains(name + "_dbm");
    if (watts && dbm) {
        throw Error(ErrorKind::InvalidConfig, "give either '" + name + "' or '" + name + "_dbm', not both");
    }
    if (watts) {
        read(obj, name.c_str(), target);
    } else if (dbm) {
        double v = 0.0;
        read(obj, (name + "_dbm").c_str(), v);
        target = dbm_to_watts(v);
    }
}

SystemConfig parse_system(const json& s) {
    reject_unknown(s, "system",
                   {"n_antennas", "n_elements", "p_max", "p_max_dbm", "sigma2_dbm", "sigma2_nu", "sigma2_nu_dbm",
                    "sigma2_fu", "sigma2_fu_dbm", "zeta", "r_m", "gamma", "gamma_dbm", "gamma_over_noise", "d_nu",
                    "d_fu", "path_loss_ref_db", "rician_k_db", "irs_path_loss_exponent", "bs_position",
                    "irs_position", "seed"});
    SystemConfig c;
    read(s, "n_antennas", c.n_antennas);
    read(s, "n_elements", c.n_elements);
    read_power(s, "p_max", c.p_max);
    if (s.contains("sigma2_dbm")) {
        double v = 0.0;
        read(s, "sigma2_dbm", v);
        c.sigma2_nu = c.sigma2_fu = dbm_to_watts(v);
    }
    read_power(s, "sigma2_nu", c.sigma2_nu);
    read_power(s, "sigma2_fu", c.sigma2_fu);
    read(s, "zeta", c.zeta);
    read(s, "r_m", c.r_m);
    int gamma_forms = static_cast<int>(s.contains("gamma")) + static_cast<int>(s.contains("gamma_dbm")) +
                      static_cast<int>(s.contains("gamma_over_noise"));
    if (gamma_forms > 1) {
        throw Error(ErrorKind::InvalidConfig, "give only one of 'gamma', 'gamma_dbm', 'gamma_over_noise'");
    }
    read_power(s, "gamma", c.gamma);
    if (s.contains("gamma_over_noise")) {
        double ratio = 0.0;
        read(s, "gamma_over_noise", ratio);
        c.gamma = ratio * c.sigma2_fu;
    } else if (gamma_forms == 0) {
        c.gamma = 1e-2 * c.sigma2_fu;
    }
    read(s, "d_nu", c.d_nu);
    read(s, "d_fu", c.d_fu);
    read(s, "path_loss_ref_db", c.path_loss_ref_db);
    read(s, "rician_k_db", c.rician_k_db);
    read(s, "irs_path_loss_exponent", c.irs_path_loss_exponent);
    c.bs_position = read_point(s, "bs_position", c.bs_position);
    c.irs_position = read_point(s, "irs_position", c.irs_position);
    read(s, "seed", c.seed);
    c.validate();
    return c;
}

DinkelbachConfig parse_solver(const json& s) {
    reject_unknown(s, "solver", {"epsilon1", "max_outer", "ao_inner_max", "ao_epsilon", "lazy_rank", "srocr"});
    DinkelbachConfig d;
    read(s, "epsilon1", d.epsilon1);
    read(s, "max_outer", d.max_outer);
    read(s, "ao_inner_max", d.ao_inner_max);
    read(s, "ao_epsilon", d.ao_epsilon);
    read(s, "lazy_rank", d.lazy_rank);
    if (s.contains("srocr")) {
        const json& r = s.at("srocr");
        reject_unknown(r, "solver.srocr",
                       {"rank_threshold", "max_iters", "backoff_divisor", "initial_step_cap", "max_relaxation",
                        "step_floor"});
        read(r, "rank_threshold", d.srocr.rank_threshold);
        read(r, "max_iters", d.srocr.max_iters);
        read(r, "backoff_divisor", d.srocr.backoff_divisor);
        read(r, "initial_step_cap", d.srocr.initial_step_cap);
        read(r, "max_relaxation", d.srocr.max_relaxation);
        read(r, "step_floor", d.srocr.step_floor);
    }
    d.validate();
    return d;
}

ExperimentSpec parse_sweep(const json& s, const SystemConfig& base) {
    reject_unknown(s, "sweep", {"axis", "values", "schemes", "trials", "first_seed", "output"});
    ExperimentSpec e;
    e.base = base;
    e.first_seed = base.seed;
    if (s.contains("axis")) {
        std::string axis;
        read(s, "axis", axis);
        e.axis = parse_axis(axis);
    }
    read(s, "values", e.values);
    if (s.contains("schemes")) {
        std::vector<std::string> names;
        read(s, "schemes", names);
        e.schemes.clear();
        for (const auto& n : names) {
            e.schemes.push_back(parse_scheme(n));
        }
    }
    read(s, "trials", e.trials);
    read(s, "first_seed", e.first_seed);
    read(s, "output", e.output);
    e.validate();
    return e;
}

TraceSpec parse_trace(const json& s) {
    reject_unknown(s, "trace", {"r_m_values", "seeds"});
    TraceSpec t;
    read(s, "r_m_values", t.r_m_values);
    read(s, "seeds", t.seeds);
    t.validate();
    return t;
}

OracleSpec parse_oracle(const json& s) {
    reject_unknown(s, "oracle", {"phase_levels", "power_levels", "direction_angles", "direction_phases"});
    OracleSpec o;
    read(s, "phase_levels", o.phase_levels);
    read(s, "power_levels", o.power_levels);
    read(s, "direction_angles", o.direction_angles);
    read(s, "direction_phases", o.direction_phases);
    return o;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(doc, "<root>", {"system", "solver", "sweep", "trace", "oracle", "channels_file"});
    RunConfig rc;
    rc.system = parse_system(doc.value("system", json::object()));
    rc.solver = parse_solver(doc.value("solver", json::object()));
    rc.sweep = parse_sweep(doc.value("sweep", json::object()), rc.system);
    rc.trace = parse_trace(doc.value("trace", json::object()));
    rc.oracle = parse_oracle(doc.value("oracle", json::object()));
    if (doc.contains("channels_file")) {
        std::string path;
        read(doc, "channels_file", path);
        rc.channels_file = path;
    }
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::string run_config_to_json(const RunConfig& rc) {
    const SystemConfig& c = rc.system;
    const DinkelbachConfig& d = rc.solver;
    std::vector<std::string> schemes;
    for (Scheme s : rc.sweep.schemes) {
        schemes.emplace_back(to_string(s));
    }
    json doc{
        {"system",
         {{"n_antennas", c.n_antennas},
          {"n_elements", c.n_elements},
          {"p_max", c.p_max},
          {"sigma2_nu", c.sigma2_nu},
          {"sigma2_fu", c.sigma2_fu},
          {"zeta", c.zeta},
          {"r_m", c.r_m},
          {"gamma", c.gamma},
          {"d_nu", c.d_nu},
          {"d_fu", c.d_fu},
          {"path_loss_ref_db", c.path_loss_ref_db},
          {"rician_k_db", c.rician_k_db},
          {"irs_path_loss_exponent", c.irs_path_loss_exponent},
          {"bs_position", {c.bs_position.x, c.bs_position.y}},
          {"irs_position", {c.irs_position.x, c.irs_position.y}},
          {"seed", c.seed}}},
        {"solver",
         {{"epsilon1", d.epsilon1},
          {"max_outer", d.max_outer},
          {"ao_inner_max", d.ao_inner_max},
          {"ao_epsilon", d.ao_epsilon},
          {"lazy_rank", d.lazy_rank},
          {"srocr",
           {{"rank_threshold", d.srocr.rank_threshold},
            {"max_iters", d.srocr.max_iters},
            {"backoff_divisor", d.srocr.backoff_divisor},
            {"initial_step_cap", d.srocr.initial_step_cap},
            {"max_relaxation", d.srocr.max_relaxation},
            {"step_floor", d.srocr.step_floor}}}}},
        {"sweep",
         {{"axis", to_string(rc.sweep.axis)},
          {"values", rc.sweep.values},
          {"schemes", schemes},
          {"trials", rc.sweep.trials},
          {"first_seed", rc.sweep.first_seed},
          {"output", rc.sweep.output}}},
        {"trace", {{"r_m_values", rc.trace.r_m_values}, {"seeds", rc.trace.seeds}}},
        {"oracle",
         {{"phase_levels", rc.oracle.phase_levels},
          {"power_levels", rc.oracle.power_levels},
          {"direction_angles", rc.oracle.direction_angles},
          {"direction_phases", rc.oracle.direction_phases}}}};
    if (rc.channels_file) {
        doc["channels_file"] = *rc.channels_file;
    }
    return doc.dump(2);
}

}  // namespace irsnoma
