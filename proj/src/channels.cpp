// SPDX-License-Identifier: Apache-2.0

#include "irsnoma/channels.hpp"

#include <array>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace irsnoma {

namespace {

enum LinkId : std::uint32_t { kBsIrs = 0, kBsNu = 1, kBsFu = 2, kIrsNu = 3, kIrsFu = 4 };

class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, std::uint32_t link) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                          static_cast<std::uint32_t>(seed >> 32), link};
        engine_.seed(seq);
    }

    // CN(0, 1) via Box-Muller on 53-bit uniforms.
    cdouble complex_normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1));  // sqrt(-2 ln u) / sqrt(2)
        return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
    }

private:
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
};

void check_link(const LinkModel& link, const char* name) {
    if (link.exponent <= 0.0)
        throw Error(ErrorKind::InvalidConfig, std::string("path-loss exponent must be positive for ") + name);
    if (link.k_factor < 0.0)
        throw Error(ErrorKind::InvalidConfig, std::string("K-factor must be nonnegative for ") + name);
}

// Fading matrix of a link (rows x cols) whose LoS component is `los`.
CMat draw_link(const LinkModel& link, const CMat& los, double gain, GaussianStream& rng) {
    CMat nlos(los.rows(), los.cols());
    for (Eigen::Index c = 0; c < nlos.cols(); ++c)
        for (Eigen::Index r = 0; r < nlos.rows(); ++r) nlos(r, c) = rng.complex_normal();

    CMat h;
    switch (link.kind) {
    case LinkKind::Rayleigh: h = nlos; break;
    case LinkKind::Los: h = los; break;
    case LinkKind::Rician: {
        const double kf = link.k_factor;
        h = std::sqrt(kf / (kf + 1.0)) * los + std::sqrt(1.0 / (kf + 1.0)) * nlos;
        break;
    }
    }
    return std::sqrt(gain) * h;
}

using json = nlohmann::json;

json to_json(const CVec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
    return out;
}

json to_json(const CMat& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(CVec(m.row(r).transpose())));
    return out;
}

CVec vec_from_json(const json& j) {
    CVec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = {j[i].at(0).get<double>(), j[i].at(1).get<double>()};
    return v;
}

CMat mat_from_json(const json& j, Eigen::Index cols) {
    CMat m(static_cast<Eigen::Index>(j.size()), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        const CVec row = vec_from_json(j[r]);
        if (row.size() != cols) throw Error(ErrorKind::DimensionMismatch, "g_bs_irs rows must have N entries");
        m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
}

}  // namespace

ChannelModelSpec ChannelModelSpec::from_config(const SystemConfig& config) {
    const double kf = db_to_linear(config.rician_k_db);
    ChannelModelSpec s;
    s.bs_irs = {LinkKind::Rician, kf, config.irs_path_loss_exponent};
    s.bs_nu = {LinkKind::Rayleigh, 0.0, 3.0};
    s.bs_fu = {LinkKind::Rician, kf, 2.0};
    s.irs_nu = {LinkKind::Rician, kf, config.irs_path_loss_exponent};
    s.irs_fu = {LinkKind::Rician, kf, config.irs_path_loss_exponent};
    s.path_loss_ref_db = config.path_loss_ref_db;
    return s;
}

void ChannelModelSpec::validate() const {
    check_link(bs_irs, "bs_irs");
    check_link(bs_nu, "bs_nu");
    check_link(bs_fu, "bs_fu");
    check_link(irs_nu, "irs_nu");
    check_link(irs_fu, "irs_fu");
}

double path_loss_db(double ref_db, double exponent, double distance_m) {
    return ref_db + 10.0 * exponent * std::log10(distance_m);
}

double path_loss_gain(double ref_db, double exponent, double distance_m) {
    return std::pow(10.0, -path_loss_db(ref_db, exponent, distance_m) / 10.0);
}

double bearing(const Point2& from, const Point2& to) { return std::atan2(to.y - from.y, to.x - from.x); }

CVec los_steering(int n, double angle) {
    CVec a(n);
    const double s = std::sin(angle);
    for (int i = 0; i < n; ++i) a(i) = std::polar(1.0, kPi * i * s);
    return a;
}

ChannelSet generate_channels(const SystemConfig& config, const ChannelModelSpec& spec, std::uint64_t seed) {
    config.validate();
    spec.validate();
    const int n = config.n_antennas;
    const int k = config.n_elements;
    const Point2 bs = config.bs_position;
    const Point2 irs = config.irs_position;
    const Point2 nu = config.nu_position();
    const Point2 fu = config.fu_position();
    const double l0 = spec.path_loss_ref_db;

    ChannelSet ch;
    {
        GaussianStream rng(seed, kBsNu);
        const CMat los = los_steering(n, bearing(bs, nu));
        ch.h_bs_nu = draw_link(spec.bs_nu, los, path_loss_gain(l0, spec.bs_nu.exponent, config.d_nu), rng);
    }
    {
        GaussianStream rng(seed, kBsFu);
        const CMat los = los_steering(n, bearing(bs, fu));
        ch.h_bs_fu = draw_link(spec.bs_fu, los, path_loss_gain(l0, spec.bs_fu.exponent, config.d_fu), rng);
    }
    if (k == 0) {
        ch.g_bs_irs = CMat(0, n);
        ch.h_irs_nu = CVec(0);
        ch.h_irs_fu = CVec(0);
        return ch;
    }
    {
        GaussianStream rng(seed, kBsIrs);
        const CMat los = los_steering(k, bearing(irs, bs)) * los_steering(n, bearing(bs, irs)).adjoint();
        ch.g_bs_irs =
            draw_link(spec.bs_irs, los, path_loss_gain(l0, spec.bs_irs.exponent, distance(bs, irs)), rng);
    }
    {
        GaussianStream rng(seed, kIrsNu);
        const CMat los = los_steering(k, bearing(irs, nu));
        ch.h_irs_nu = draw_link(spec.irs_nu, los, path_loss_gain(l0, spec.irs_nu.exponent, distance(irs, nu)), rng);
    }
    {
        GaussianStream rng(seed, kIrsFu);
        const CMat los = los_steering(k, bearing(irs, fu));
        ch.h_irs_fu = draw_link(spec.irs_fu, los, path_loss_gain(l0, spec.irs_fu.exponent, distance(irs, fu)), rng);
    }
    return ch;
}

std::string channels_to_json(const ChannelSet& ch) {
    json j;
    j["format"] = "irsnoma-channels";
    j["version"] = 1;
    j["n_antennas"] = ch.n_antennas();
    j["n_elements"] = ch.n_elements();
    j["g_bs_irs"] = to_json(ch.g_bs_irs);
    j["h_bs_nu"] = to_json(ch.h_bs_nu);
    j["h_bs_fu"] = to_json(ch.h_bs_fu);
    j["h_irs_nu"] = to_json(ch.h_irs_nu);
    j["h_irs_fu"] = to_json(ch.h_irs_fu);
    return j.dump(1);
}

ChannelSet channels_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Io, std::string("malformed channel file: ") + e.what());
    }
    try {
        const auto n = j.at("n_antennas").get<Eigen::Index>();
        ChannelSet ch;
        ch.h_bs_nu = vec_from_json(j.at("h_bs_nu"));
        ch.h_bs_fu = vec_from_json(j.at("h_bs_fu"));
        ch.h_irs_nu = vec_from_json(j.at("h_irs_nu"));
        ch.h_irs_fu = vec_from_json(j.at("h_irs_fu"));
        ch.g_bs_irs = mat_from_json(j.at("g_bs_irs"), n);
        ch.validate();
        if (ch.n_antennas() != n || ch.n_elements() != j.at("n_elements").get<int>())
            throw Error(ErrorKind::DimensionMismatch, "channel file header disagrees with its arrays");
        return ch;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Io, std::string("malformed channel file: ") + e.what());
    }
}

void save_channels(const std::string& path, const ChannelSet& channels) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << channels_to_json(channels) << '\n';
}

ChannelSet load_channels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return channels_from_json(buf.str());
}

}  // namespace irsnoma
