// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "irsnoma/sdp.hpp"

namespace irsnoma {

// lambda_max(X) / Tr(X). Throws Error(DegenerateVariable) when Tr(X) <= 1e-14.
double rank_ratio(const CMat& x);

// Largest eigenvalue and its unit eigenvector, with the largest-magnitude
// entry of the eigenvector rotated onto the positive real axis.
std::pair<double, CVec> principal_eigpair(const CMat& x);

struct SrocrConfig {
    double rank_threshold = 0.99;
    int max_iters = 50;
    double backoff_divisor = 3.0;
    // delta_0 = min(initial_step_cap, 1 - lambda_max/Tr) of the relaxed solution.
    double initial_step_cap = 0.1;
    // m never exceeds this value, so the anchored problem keeps a strictly
    // feasible point (m = 1 admits only exact rank-one matrices).
    double max_relaxation = 0.999;
    double step_floor = 1e-12;

    void validate() const;
};

struct SrocrIterationRecord {
    int iteration = 0;
    std::vector<double> m;
    std::vector<double> delta;
    std::vector<double> rank_ratio;  // of the accepted iterate
    double objective = 0.0;  // of the accepted iterate
    bool accepted = true;  // false: the solve at this m failed and delta was cut
};

struct SrocrState {
    std::vector<std::size_t> tracked;  // variable indices
    std::vector<double> m;
    std::vector<double> delta;
    std::vector<double> delta0;
    std::vector<CVec> anchor;  // principal eigenvectors of the accepted iterate
    int iteration = 0;
    std::vector<SrocrIterationRecord> history;
};

struct SrocrResult {
    SdpSolution solution;  // last accepted iterate (or the failed relaxation)
    SrocrState state;
    bool rank_not_reached = false;
    int solves = 0;
};

using SrocrObserver = std::function<void(const SrocrIterationRecord&)>;

// Sequential rank-one constraint relaxation on the variables labelled in
// `tracked`. The base problem is the semidefinite relaxation; each round adds
// u^H X u >= m Tr(X) per tracked variable, with u the principal eigenvector of
// the previous accepted iterate.
SrocrResult srocr_run(const SdpProblem& base, const std::vector<std::string>& tracked,
                      const SrocrConfig& config, const SdpBackend& backend = default_backend(),
                      const SrocrObserver& observer = {});

}  // namespace irsnoma
