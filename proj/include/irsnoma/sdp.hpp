// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "irsnoma/types.hpp"

namespace irsnoma {

// ---------------------------------------------------------------------------
// Complex Hermitian problem description
// ---------------------------------------------------------------------------

struct HermitianVariable {
    int dim = 0;
    std::string label;
};

// Tr(coefficient * X_variable); coefficient must be Hermitian.
struct TraceTerm {
    std::size_t variable = 0;
    CMat coefficient;
};

enum class Sense { GreaterEqual, LessEqual, Equal };

struct TraceConstraint {
    std::vector<TraceTerm> terms;
    Sense sense = Sense::GreaterEqual;
    double rhs = 0.0;
    std::string label;
};

// maximize  sum_i Tr(A_i X_i) + constant
// s.t.      sum_i Tr(B_i X_i) {>=, <=, ==} c   for every constraint
//           X_i Hermitian PSD
struct SdpProblem {
    std::vector<HermitianVariable> variables;
    std::vector<TraceTerm> objective;
    double objective_constant = 0.0;
    std::vector<TraceConstraint> constraints;

    std::size_t add_variable(int dim, std::string label);
    std::size_t variable_index(const std::string& label) const;

    void add_constraint(std::vector<TraceTerm> terms, Sense sense, double rhs, std::string label);
    // X_{kk} = value for every k, written as Tr(E_kk X) = value.
    void pin_diagonal(std::size_t variable, double value);

    // Dimensions consistent and every coefficient Hermitian within 1e-10
    // (relative); throws Error(DimensionMismatch) otherwise.
    void validate() const;

    double objective_value(const std::vector<CMat>& x) const;
    double lhs(const TraceConstraint& c, const std::vector<CMat>& x) const;
    // Largest signed violation over all constraints, each scaled by 1 + |rhs|
    // (0 when everything holds).
    double max_violation(const std::vector<CMat>& x) const;
};

enum class SdpStatus { Optimal, Infeasible, NumericalFailure };
const char* to_string(SdpStatus status);

struct SdpAccuracy {
    double primal_infeasibility = 0.0;  // relative, embedded problem
    double dual_infeasibility = 0.0;
    double relative_gap = 0.0;
    double max_violation = 0.0;  // on the extracted Hermitian matrices
    int iterations = 0;
    int attempts = 0;
};

struct SdpSolution {
    SdpStatus status = SdpStatus::NumericalFailure;
    std::vector<CMat> matrices;  // one per variable, Hermitian PSD
    double objective = 0.0;  // recomputed from `matrices`, includes the constant
    double dual_objective = 0.0;
    SdpAccuracy accuracy;
    std::string message;

    bool optimal() const { return status == SdpStatus::Optimal; }
    const CMat& operator[](std::size_t i) const { return matrices[i]; }
};

// ---------------------------------------------------------------------------
// Real symmetric embedding
// ---------------------------------------------------------------------------

// [[Re X, -Im X], [Im X, Re X]]
RMat embed_hermitian(const CMat& x);
// Inverse of embed_hermitian on its range; for any symmetric 2n x 2n Y it
// returns the congruence (1/2) V^H Y V with V = [I; -jI], which is PSD when Y is.
CMat extract_hermitian(const RMat& y);

// Coefficient of one PSD block inside one real constraint. Matrices with few
// nonzeros (diagonal pins, identities) are kept as full symmetric triplet lists.
struct BlockCoefficient {
    std::size_t block = 0;
    bool sparse = false;
    RMat dense;
    std::vector<Eigen::Triplet<double>> entries;

    double dot(const RMat& x) const;  // Tr(A X)
    void add_to(RMat& target, double scale) const;  // target += scale * A
};

struct RealConstraint {
    std::vector<BlockCoefficient> blocks;
    std::vector<std::pair<int, double>> nonneg;  // (index, coefficient) of x >= 0 variables
    double rhs = 0.0;
};

// maximize  sum_b Tr(C_b X_b) + c^T x
// s.t.      sum_b Tr(A_ib X_b) + a_i^T x = b_i,   X_b PSD,  x >= 0
//
// Coefficients are embedded as (1/2) embed_hermitian(A), so that
// Tr(A~ embed(X)) = Tr(A X): traces, right-hand sides and objective values are
// identical on both sides of the embedding. Every inequality owns one
// nonnegative slack.
struct RealSdp {
    std::vector<int> block_dims;
    int n_nonneg = 0;
    std::vector<RMat> objective;  // one per block, may be empty (zero)
    RVec objective_nonneg;
    std::vector<RealConstraint> constraints;
    double objective_constant = 0.0;
};

RealSdp embed_real(const SdpProblem& problem);

// Writes the embedded problem in SDPA sparse format (".dat-s"): the Hermitian
// problem maps onto the SDPA dual form  max F0.Y  s.t.  Fi.Y = ci,  with
// F0 = C and the nonnegative slacks as one diagonal block (negative size).
void write_sdpa(std::ostream& out, const RealSdp& problem);

// ---------------------------------------------------------------------------
// Solver contract
// ---------------------------------------------------------------------------

struct RealSdpResult {
    SdpStatus status = SdpStatus::NumericalFailure;
    std::vector<RMat> blocks;
    RVec nonneg;
    RVec y;
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
    double relative_gap = 0.0;
    int iterations = 0;
    std::string message;
};

class SdpBackend {
public:
    virtual ~SdpBackend() = default;
    virtual RealSdpResult solve(const RealSdp& problem) const = 0;
    virtual std::string name() const = 0;
};

struct InteriorPointOptions {
    int max_iterations = 80;
    double feasibility_tolerance = 1e-9;
    double gap_tolerance = 1e-8;
    double step_fraction = 0.98;
    // Accepted as optimal when progress stalls.
    double fallback_feasibility = 1e-7;
    double fallback_gap = 1e-6;
};

// Infeasible-start primal-dual path-following method (HKM search direction,
// Mehrotra predictor-corrector). Detects primal infeasibility through a Farkas
// certificate on the dual iterate.
class InteriorPointBackend final : public SdpBackend {
public:
    InteriorPointBackend() = default;
    explicit InteriorPointBackend(InteriorPointOptions options) : options_(options) {}

    RealSdpResult solve(const RealSdp& problem) const override;
    std::string name() const override { return "hkm-interior-point"; }

    const InteriorPointOptions& options() const { return options_; }

private:
    InteriorPointOptions options_;
};

const SdpBackend& default_backend();

// Embeds, row-scales, solves and extracts. A numerical failure is retried
// once with tighter scaling (objective normalized as well) and a more
// conservative step; status Optimal guarantees max_violation <= 1e-6.
SdpSolution solve(const SdpProblem& problem, const SdpBackend& backend = default_backend());

}  // namespace irsnoma
