// SPDX-License-Identifier: Apache-2.0

#include "irsnoma/srocr.hpp"

#include <Eigen/Eigenvalues>

namespace irsnoma {

double rank_ratio(const CMat& x) {
    const double tr = x.trace().real();
    if (tr <= 1e-14) throw Error(ErrorKind::DegenerateVariable, "rank ratio of a (numerically) zero matrix");
    return std::clamp(principal_eigpair(x).first / tr, 0.0, 1.0);
}

std::pair<double, CVec> principal_eigpair(const CMat& x) {
    const CMat h = 0.5 * (x + x.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    const Eigen::Index last = h.rows() - 1;
    CVec u = es.eigenvectors().col(last);
    Eigen::Index imax = 0;
    u.cwiseAbs().maxCoeff(&imax);
    if (std::abs(u(imax)) > 0.0) u *= std::conj(u(imax)) / std::abs(u(imax));
    u.normalize();
    return {es.eigenvalues()(last), u};
}

void SrocrConfig::validate() const {
    if (!(rank_threshold > 0.9 && rank_threshold <= 1.0))
        throw Error(ErrorKind::InvalidConfig, "rank_threshold must lie in (0.9, 1]");
    if (!(backoff_divisor > 1.0)) throw Error(ErrorKind::InvalidConfig, "backoff_divisor must exceed 1");
    if (max_iters < 0) throw Error(ErrorKind::InvalidConfig, "max_iters must be >= 0");
    if (!(initial_step_cap > 0.0)) throw Error(ErrorKind::InvalidConfig, "initial_step_cap must be positive");
    if (!(max_relaxation >= rank_threshold && max_relaxation <= 1.0))
        throw Error(ErrorKind::InvalidConfig, "max_relaxation must lie in [rank_threshold, 1]");
}

namespace {

// Variables whose trace is negligible next to the largest tracked trace
// carry no direction to tighten; they count as rank-one.
bool vanishing(const CMat& x, double reference) { return x.trace().real() <= 1e-10 * std::max(1e-300, reference); }

std::vector<double> ratios(const SdpSolution& s, const std::vector<std::size_t>& tracked) {
    double reference = 0.0;
    for (auto v : tracked) reference = std::max(reference, s[v].trace().real());
    std::vector<double> r;
    for (auto v : tracked) r.push_back(vanishing(s[v], reference) ? 1.0 : rank_ratio(s[v]));
    return r;
}

}  // namespace

SrocrResult srocr_run(const SdpProblem& base, const std::vector<std::string>& tracked,
                      const SrocrConfig& config, const SdpBackend& backend, const SrocrObserver& observer) {
    config.validate();
    SrocrResult out;
    SrocrState& st = out.state;
    for (const auto& label : tracked) st.tracked.push_back(base.variable_index(label));
    const std::size_t ne = st.tracked.size();

    out.solution = solve(base, backend);
    ++out.solves;
    if (!out.solution.optimal()) return out;

    std::vector<double> r = ratios(out.solution, st.tracked);
    st.m.assign(ne, 0.0);
    st.delta0.resize(ne);
    for (std::size_t e = 0; e < ne; ++e) st.delta0[e] = std::min(config.initial_step_cap, std::max(1.0 - r[e], 1e-9));
    st.delta = st.delta0;

    const auto refresh_anchors = [&] {
        st.anchor.clear();
        for (auto v : st.tracked) st.anchor.push_back(principal_eigpair(out.solution[v]).second);
    };
    refresh_anchors();

    bool accepted = true;
    for (;;) {
        for (std::size_t e = 0; e < ne; ++e) st.m[e] = std::min(config.max_relaxation, r[e] + st.delta[e]);

        SrocrIterationRecord rec;
        rec.iteration = st.iteration;
        rec.m = st.m;
        rec.delta = st.delta;
        rec.rank_ratio = r;
        rec.objective = out.solution.objective;
        rec.accepted = accepted;
        st.history.push_back(rec);
        if (observer) observer(rec);

        bool certified = true;
        for (double v : r) certified = certified && v >= config.rank_threshold;
        if (certified) break;
        if (st.iteration >= config.max_iters) {
            out.rank_not_reached = true;
            break;
        }

        SdpProblem anchored = base;
        double reference = 0.0;
        for (auto v : st.tracked) reference = std::max(reference, out.solution[v].trace().real());
        for (std::size_t e = 0; e < ne; ++e) {
            const auto v = st.tracked[e];
            if (vanishing(out.solution[v], reference)) continue;
            const int n = base.variables[v].dim;
            CMat a = st.anchor[e] * st.anchor[e].adjoint() - st.m[e] * CMat::Identity(n, n);
            anchored.add_constraint({{v, std::move(a)}}, Sense::GreaterEqual, 0.0,
                                    "anchor_" + base.variables[v].label);
        }
        SdpSolution next = solve(anchored, backend);
        ++out.solves;
        ++st.iteration;

        if (next.optimal()) {
            out.solution = std::move(next);
            r = ratios(out.solution, st.tracked);
            st.delta = st.delta0;
            refresh_anchors();
            accepted = true;
        } else {
            bool exhausted = true;
            for (auto& d : st.delta) {
                d /= config.backoff_divisor;
                exhausted = exhausted && d < config.step_floor;
            }
            accepted = false;
            if (exhausted) {
                out.rank_not_reached = true;
                break;
            }
        }
    }
    return out;
}

}  // namespace irsnoma
