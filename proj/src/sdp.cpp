// SPDX-License-Identifier: Apache-2.0

#include "irsnoma/sdp.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace irsnoma {

// ---------------------------------------------------------------------------
// SdpProblem
// ---------------------------------------------------------------------------

std::size_t SdpProblem::add_variable(int dim, std::string label) {
    if (dim <= 0) throw Error(ErrorKind::DimensionMismatch, "variable dimension must be positive");
    variables.push_back({dim, std::move(label)});
    return variables.size() - 1;
}

std::size_t SdpProblem::variable_index(const std::string& label) const {
    for (std::size_t i = 0; i < variables.size(); ++i)
        if (variables[i].label == label) return i;
    throw Error(ErrorKind::DimensionMismatch, "no variable labelled '" + label + "'");
}

void SdpProblem::add_constraint(std::vector<TraceTerm> terms, Sense sense, double rhs, std::string label) {
    constraints.push_back({std::move(terms), sense, rhs, std::move(label)});
}

void SdpProblem::pin_diagonal(std::size_t variable, double value) {
    const int n = variables.at(variable).dim;
    for (int k = 0; k < n; ++k) {
        CMat e = CMat::Zero(n, n);
        e(k, k) = 1.0;
        add_constraint({{variable, std::move(e)}}, Sense::Equal, value,
                       variables[variable].label + "_diag_" + std::to_string(k));
    }
}

namespace {

void check_term(const SdpProblem& p, const TraceTerm& t, const std::string& where) {
    if (t.variable >= p.variables.size())
        throw Error(ErrorKind::DimensionMismatch, where + ": unknown variable index");
    const int n = p.variables[t.variable].dim;
    if (t.coefficient.rows() != n || t.coefficient.cols() != n)
        throw Error(ErrorKind::DimensionMismatch, where + ": coefficient has the wrong size");
    const double scale = 1.0 + t.coefficient.cwiseAbs().maxCoeff();
    if ((t.coefficient - t.coefficient.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw Error(ErrorKind::DimensionMismatch, where + ": coefficient is not Hermitian");
}

double trace_product(const CMat& a, const CMat& x) {
    // Re Tr(A X) for Hermitian A, X = sum_ij A_ij X_ji = sum_ij A_ij conj(X_ij)
    return (a.array() * x.conjugate().array()).sum().real();
}

}  // namespace

void SdpProblem::validate() const {
    for (const auto& t : objective) check_term(*this, t, "objective");
    for (const auto& c : constraints)
        for (const auto& t : c.terms) check_term(*this, t, "constraint " + c.label);
}

double SdpProblem::objective_value(const std::vector<CMat>& x) const {
    double v = objective_constant;
    for (const auto& t : objective) v += trace_product(t.coefficient, x[t.variable]);
    return v;
}

double SdpProblem::lhs(const TraceConstraint& c, const std::vector<CMat>& x) const {
    double v = 0.0;
    for (const auto& t : c.terms) v += trace_product(t.coefficient, x[t.variable]);
    return v;
}

double SdpProblem::max_violation(const std::vector<CMat>& x) const {
    double worst = 0.0;
    for (const auto& c : constraints) {
        double magnitude = 1.0 + std::abs(c.rhs);
        double value = 0.0;
        for (const auto& t : c.terms) {
            const double term = trace_product(t.coefficient, x[t.variable]);
            value += term;
            magnitude += std::abs(term);
        }
        double violation = 0.0;
        switch (c.sense) {
        case Sense::GreaterEqual: violation = c.rhs - value; break;
        case Sense::LessEqual: violation = value - c.rhs; break;
        case Sense::Equal: violation = std::abs(value - c.rhs); break;
        }
        worst = std::max(worst, violation / magnitude);
    }
    return worst;
}

const char* to_string(SdpStatus status) {
    switch (status) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::Infeasible: return "infeasible";
    case SdpStatus::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Embedding
// ---------------------------------------------------------------------------

RMat embed_hermitian(const CMat& x) {
    const Eigen::Index n = x.rows();
    RMat y(2 * n, 2 * n);
    y.topLeftCorner(n, n) = x.real();
    y.topRightCorner(n, n) = -x.imag();
    y.bottomLeftCorner(n, n) = x.imag();
    y.bottomRightCorner(n, n) = x.real();
    return y;
}

CMat extract_hermitian(const RMat& y) {
    const Eigen::Index n = y.rows() / 2;
    CMat x(n, n);
    x.real() = 0.5 * (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n));
    x.imag() = 0.5 * (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n));
    return 0.5 * (x + x.adjoint());
}

double BlockCoefficient::dot(const RMat& x) const {
    if (!sparse) return dense.cwiseProduct(x).sum();
    double v = 0.0;
    for (const auto& e : entries) v += e.value() * x(e.row(), e.col());
    return v;
}

void BlockCoefficient::add_to(RMat& target, double scale) const {
    if (!sparse) {
        target.noalias() += scale * dense;
        return;
    }
    for (const auto& e : entries) target(e.row(), e.col()) += scale * e.value();
}

namespace {

BlockCoefficient make_block_coefficient(std::size_t block, const CMat& a) {
    BlockCoefficient bc;
    bc.block = block;
    bc.dense = 0.5 * embed_hermitian(a);
    const Eigen::Index n = bc.dense.rows();
    Eigen::Index nnz = 0;
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r)
            if (bc.dense(r, c) != 0.0) ++nnz;
    if (nnz <= 2 * n) {
        bc.sparse = true;
        for (Eigen::Index c = 0; c < n; ++c)
            for (Eigen::Index r = 0; r < n; ++r)
                if (bc.dense(r, c) != 0.0)
                    bc.entries.emplace_back(static_cast<int>(r), static_cast<int>(c), bc.dense(r, c));
        bc.dense.resize(0, 0);
    }
    return bc;
}

}  // namespace

RealSdp embed_real(const SdpProblem& problem) {
    problem.validate();
    RealSdp out;
    for (const auto& v : problem.variables) out.block_dims.push_back(2 * v.dim);
    out.objective.resize(problem.variables.size());
    for (std::size_t b = 0; b < problem.variables.size(); ++b)
        out.objective[b] = RMat::Zero(out.block_dims[b], out.block_dims[b]);
    for (const auto& t : problem.objective) out.objective[t.variable] += 0.5 * embed_hermitian(t.coefficient);
    out.objective_constant = problem.objective_constant;

    int slack = 0;
    for (const auto& c : problem.constraints) {
        RealConstraint rc;
        rc.rhs = c.rhs;
        // Merge terms that hit the same variable.
        std::vector<CMat> merged(problem.variables.size());
        for (const auto& t : c.terms) {
            if (merged[t.variable].size() == 0)
                merged[t.variable] = t.coefficient;
            else
                merged[t.variable] += t.coefficient;
        }
        for (std::size_t b = 0; b < merged.size(); ++b)
            if (merged[b].size() != 0) rc.blocks.push_back(make_block_coefficient(b, merged[b]));
        if (c.sense == Sense::GreaterEqual) rc.nonneg.emplace_back(slack++, -1.0);
        if (c.sense == Sense::LessEqual) rc.nonneg.emplace_back(slack++, 1.0);
        out.constraints.push_back(std::move(rc));
    }
    out.n_nonneg = slack;
    out.objective_nonneg = RVec::Zero(slack);
    return out;
}

void write_sdpa(std::ostream& out, const RealSdp& p) {
    const auto m = p.constraints.size();
    const std::size_t nblocks = p.block_dims.size() + (p.n_nonneg > 0 ? 1 : 0);
    out.precision(17);
    out << "\"irsnoma real-embedded SDP; objective constant " << p.objective_constant << "\"\n";
    out << m << "\n" << nblocks << "\n";
    for (int d : p.block_dims) out << d << ' ';
    if (p.n_nonneg > 0) out << -p.n_nonneg;
    out << "\n";
    for (const auto& c : p.constraints) out << c.rhs << ' ';
    out << "\n";
    const auto write_dense = [&](std::size_t mat, std::size_t block, const RMat& a) {
        for (Eigen::Index r = 0; r < a.rows(); ++r)
            for (Eigen::Index c = r; c < a.cols(); ++c)
                if (a(r, c) != 0.0) out << mat << ' ' << block + 1 << ' ' << r + 1 << ' ' << c + 1 << ' ' << a(r, c) << "\n";
    };
    for (std::size_t b = 0; b < p.objective.size(); ++b)
        if (p.objective[b].size() != 0) write_dense(0, b, p.objective[b]);
    const std::size_t lp_block = p.block_dims.size();
    for (int k = 0; k < p.n_nonneg; ++k)
        if (p.objective_nonneg(k) != 0.0) out << 0 << ' ' << lp_block + 1 << ' ' << k + 1 << ' ' << k + 1 << ' ' << p.objective_nonneg(k) << "\n";
    for (std::size_t i = 0; i < m; ++i) {
        const auto& c = p.constraints[i];
        for (const auto& bc : c.blocks) {
            if (!bc.sparse) {
                write_dense(i + 1, bc.block, bc.dense);
                continue;
            }
            for (const auto& e : bc.entries)
                if (e.row() <= e.col())
                    out << i + 1 << ' ' << bc.block + 1 << ' ' << e.row() + 1 << ' ' << e.col() + 1 << ' ' << e.value() << "\n";
        }
        for (const auto& [k, a] : c.nonneg) out << i + 1 << ' ' << lp_block + 1 << ' ' << k + 1 << ' ' << k + 1 << ' ' << a << "\n";
    }
}

// ---------------------------------------------------------------------------
// Interior-point backend
// ---------------------------------------------------------------------------

namespace {

struct Direction {
    std::vector<RMat> dX, dZ;
    RVec dx, dz, dy;
};

class IpmWorkspace {
public:
    explicit IpmWorkspace(const RealSdp& p) : p_(p), m_(p.constraints.size()) {
        lp_coeff_ = RMat::Zero(static_cast<Eigen::Index>(m_), p.n_nonneg);
        for (std::size_t i = 0; i < m_; ++i)
            for (const auto& [k, a] : p.constraints[i].nonneg) lp_coeff_(static_cast<Eigen::Index>(i), k) += a;
        b_ = RVec(static_cast<Eigen::Index>(m_));
        for (std::size_t i = 0; i < m_; ++i) b_(static_cast<Eigen::Index>(i)) = p.constraints[i].rhs;
        per_block_.resize(p.block_dims.size());
        for (std::size_t i = 0; i < m_; ++i)
            for (const auto& bc : p.constraints[i].blocks) per_block_[bc.block].push_back({i, &bc});
    }

    std::size_t m() const { return m_; }
    const RVec& b() const { return b_; }

    RVec forward(const std::vector<RMat>& X, const RVec& x) const {
        RVec out = lp_coeff_ * x;
        for (std::size_t i = 0; i < m_; ++i)
            for (const auto& bc : p_.constraints[i].blocks) out(static_cast<Eigen::Index>(i)) += bc.dot(X[bc.block]);
        return out;
    }

    void adjoint(const RVec& y, std::vector<RMat>& blocks, RVec& lp) const {
        blocks.resize(p_.block_dims.size());
        for (std::size_t b = 0; b < blocks.size(); ++b) blocks[b] = RMat::Zero(p_.block_dims[b], p_.block_dims[b]);
        for (std::size_t i = 0; i < m_; ++i)
            for (const auto& bc : p_.constraints[i].blocks) bc.add_to(blocks[bc.block], y(static_cast<Eigen::Index>(i)));
        lp = lp_coeff_.transpose() * y;
    }

    // M_ij = sum_b Tr(A_ib X_b A_jb Zinv_b) + sum_k a_ik a_jk x_k / z_k
    RMat schur(const std::vector<RMat>& X, const std::vector<RMat>& Zinv, const RVec& x, const RVec& z) const {
        const auto m = static_cast<Eigen::Index>(m_);
        RMat M = lp_coeff_ * (x.array() / z.array()).matrix().asDiagonal() * lp_coeff_.transpose();
        for (std::size_t b = 0; b < per_block_.size(); ++b) {
            const auto& entries = per_block_[b];
            if (entries.empty()) continue;
            RMat Mb = RMat::Zero(m, m);
            std::vector<bool> filled(entries.size(), false);
            for (std::size_t a = 0; a < entries.size(); ++a) {
                const auto& [i, bi] = entries[a];
                if (bi->sparse) continue;
                const RMat P = X[b] * bi->dense * Zinv[b];
                for (const auto& [j, bj] : entries) {
                    double v = 0.0;
                    if (bj->sparse) {
                        for (const auto& e : bj->entries) v += e.value() * P(e.col(), e.row());
                    } else {
                        v = bj->dense.cwiseProduct(P.transpose()).sum();
                    }
                    Mb(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += v;
                }
            }
            for (std::size_t a = 0; a < entries.size(); ++a) {
                const auto& [i, bi] = entries[a];
                if (!bi->sparse) continue;
                for (const auto& [j, bj] : entries) {
                    const auto ii = static_cast<Eigen::Index>(i);
                    const auto jj = static_cast<Eigen::Index>(j);
                    if (!bj->sparse) {
                        Mb(ii, jj) = Mb(jj, ii);
                        continue;
                    }
                    double v = 0.0;
                    for (const auto& ea : bi->entries)
                        for (const auto& eb : bj->entries)
                            v += ea.value() * eb.value() * X[b](ea.col(), eb.row()) * Zinv[b](eb.col(), ea.row());
                    Mb(ii, jj) += v;
                }
            }
            M += Mb;
        }
        return 0.5 * (M + M.transpose());
    }

private:
    struct Entry {
        std::size_t row;
        const BlockCoefficient* coeff;
    };
    const RealSdp& p_;
    std::size_t m_;
    RMat lp_coeff_;
    RVec b_;
    std::vector<std::vector<Entry>> per_block_;
};

double max_step_psd(const RMat& X, const RMat& dX) {
    Eigen::LLT<RMat> llt(X);
    if (llt.info() != Eigen::Success) return 0.0;
    const auto L = llt.matrixL();
    RMat t = L.solve(dX);
    t = L.solve(t.transpose().eval());
    const RMat sym = 0.5 * (t + t.transpose());
    const double lmin = Eigen::SelfAdjointEigenSolver<RMat>(sym, Eigen::EigenvaluesOnly).eigenvalues()(0);
    return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

double max_step_lp(const RVec& x, const RVec& dx) {
    double a = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < x.size(); ++k)
        if (dx(k) < 0.0) a = std::min(a, -x(k) / dx(k));
    return a;
}

double min_eigenvalue(const RMat& a) {
    if (a.size() == 0) return 0.0;
    return Eigen::SelfAdjointEigenSolver<RMat>(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly).eigenvalues()(0);
}

RMat symmetrize(const RMat& a) { return 0.5 * (a + a.transpose()); }

}  // namespace

RealSdpResult InteriorPointBackend::solve(const RealSdp& p) const {
    const IpmWorkspace ws(p);
    const auto nb = p.block_dims.size();
    const auto m = static_cast<Eigen::Index>(ws.m());
    const RVec& b = ws.b();

    int total_dim = p.n_nonneg;
    for (int d : p.block_dims) total_dim += d;

    RealSdpResult res;
    if (total_dim == 0) {
        res.status = SdpStatus::NumericalFailure;
        res.message = "empty problem";
        return res;
    }

    // Starting point (scaled identities).
    double max_a = 0.0, max_ratio = 0.0;
    for (std::size_t i = 0; i < ws.m(); ++i) {
        double norm2 = 0.0;
        for (const auto& bc : p.constraints[i].blocks) {
            if (bc.sparse)
                for (const auto& e : bc.entries) norm2 += e.value() * e.value();
            else
                norm2 += bc.dense.squaredNorm();
        }
        for (const auto& [k, a] : p.constraints[i].nonneg) norm2 += a * a;
        const double na = std::sqrt(norm2);
        max_a = std::max(max_a, na);
        max_ratio = std::max(max_ratio, (1.0 + std::abs(b(static_cast<Eigen::Index>(i)))) / (1.0 + na));
    }
    double norm_c = p.objective_nonneg.squaredNorm();
    for (const auto& c : p.objective) norm_c += c.squaredNorm();
    norm_c = std::sqrt(norm_c);
    const double xi = std::max({10.0, std::sqrt(double(total_dim)), total_dim * max_ratio});
    const double eta = std::max({10.0, std::sqrt(double(total_dim)), max_a, norm_c});

    std::vector<RMat> X(nb), Z(nb), C(nb);
    for (std::size_t k = 0; k < nb; ++k) {
        X[k] = xi * RMat::Identity(p.block_dims[k], p.block_dims[k]);
        Z[k] = eta * RMat::Identity(p.block_dims[k], p.block_dims[k]);
        C[k] = p.objective[k].size() ? p.objective[k] : RMat::Zero(p.block_dims[k], p.block_dims[k]);
    }
    RVec x = RVec::Constant(p.n_nonneg, xi);
    RVec z = RVec::Constant(p.n_nonneg, eta);
    const RVec c = p.objective_nonneg.size() ? p.objective_nonneg : RVec::Zero(p.n_nonneg);
    RVec y = RVec::Zero(m);

    const double norm_b = b.norm();

    std::vector<RMat> aty;
    RVec aty_lp;
    std::vector<RMat> Rd(nb), Zinv(nb);
    RVec rd_lp;

    bool stalled = false;
    int iter = 0;
    for (; iter <= options_.max_iterations; ++iter) {
        // Residuals.
        const RVec rp = b - ws.forward(X, x);
        ws.adjoint(y, aty, aty_lp);
        double rd_norm2 = 0.0;
        for (std::size_t k = 0; k < nb; ++k) {
            Rd[k] = C[k] - aty[k] + Z[k];
            rd_norm2 += Rd[k].squaredNorm();
        }
        rd_lp = c - aty_lp + z;
        rd_norm2 += rd_lp.squaredNorm();

        double pobj = c.dot(x), gap = x.dot(z);
        for (std::size_t k = 0; k < nb; ++k) {
            pobj += C[k].cwiseProduct(X[k]).sum();
            gap += X[k].cwiseProduct(Z[k]).sum();
        }
        const double dobj = b.dot(y);
        res.primal_infeasibility = rp.norm() / (1.0 + norm_b);
        res.dual_infeasibility = std::sqrt(rd_norm2) / (1.0 + norm_c);
        res.relative_gap = gap / (1.0 + std::abs(pobj) + std::abs(dobj));
        res.primal_objective = pobj;
        res.dual_objective = dobj;
        res.iterations = iter;

        if (res.primal_infeasibility < options_.feasibility_tolerance &&
            res.dual_infeasibility < options_.feasibility_tolerance &&
            res.relative_gap < options_.gap_tolerance) {
            res.status = SdpStatus::Optimal;
            break;
        }

        // Farkas certificate: A^T y_hat PSD with b^T y_hat = -1.
        if (iter > 3 && dobj < 0.0) {
            const double scale = -dobj;
            double lmin = aty_lp.size() ? aty_lp.minCoeff() / scale : std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < nb; ++k) lmin = std::min(lmin, min_eigenvalue(aty[k]) / scale);
            if (lmin > -1e-8 && y.norm() / scale < 1e8) {
                res.status = SdpStatus::Infeasible;
                res.message = "primal infeasible (dual Farkas certificate)";
                break;
            }
        }

        if (iter == options_.max_iterations || stalled) break;

        const double mu = gap / total_dim;
        for (std::size_t k = 0; k < nb; ++k) {
            Eigen::LLT<RMat> llt(Z[k]);
            if (llt.info() != Eigen::Success) {
                stalled = true;
                break;
            }
            Zinv[k] = symmetrize(llt.solve(RMat::Identity(Z[k].rows(), Z[k].cols())));
        }
        if (stalled) break;

        const RMat M = ws.schur(X, Zinv, x, z);
        Eigen::LLT<RMat> mchol(M);
        Eigen::LDLT<RMat> mldlt;
        const bool use_llt = mchol.info() == Eigen::Success;
        if (!use_llt) mldlt.compute(M);

        // sigma_mu: centering target; corr: second-order term (nullptr in the predictor).
        const auto direction = [&](double sigma_mu, const Direction* corr) {
            Direction d;
            std::vector<RMat> G(nb);
            std::vector<RMat> cz(nb);
            for (std::size_t k = 0; k < nb; ++k) {
                G[k] = sigma_mu * Zinv[k] + X[k] * Rd[k] * Zinv[k];
                if (corr) {
                    cz[k] = corr->dX[k] * corr->dZ[k] * Zinv[k];
                    G[k] -= cz[k];
                }
            }
            RVec corr_lp = corr ? RVec(corr->dx.cwiseProduct(corr->dz)) : RVec::Zero(p.n_nonneg);
            const RVec g_lp = ((sigma_mu + x.array() * rd_lp.array() - corr_lp.array()) / z.array()).matrix();
            const RVec rhs = ws.forward(G, g_lp) - b;
            d.dy = use_llt ? RVec(mchol.solve(rhs)) : RVec(mldlt.solve(rhs));
            std::vector<RMat> atdy;
            RVec atdy_lp;
            ws.adjoint(d.dy, atdy, atdy_lp);
            d.dX.resize(nb);
            d.dZ.resize(nb);
            for (std::size_t k = 0; k < nb; ++k) {
                d.dZ[k] = atdy[k] - Rd[k];
                RMat t = sigma_mu * Zinv[k] - X[k] - symmetrize(X[k] * d.dZ[k] * Zinv[k]);
                if (corr) t -= symmetrize(cz[k]);
                d.dX[k] = symmetrize(t);
            }
            d.dz = atdy_lp - rd_lp;
            d.dx = ((sigma_mu - corr_lp.array()) / z.array() - x.array() - x.array() * d.dz.array() / z.array()).matrix();
            return d;
        };

        const auto step_lengths = [&](const Direction& d) {
            double ap = max_step_lp(x, d.dx), ad = max_step_lp(z, d.dz);
            for (std::size_t k = 0; k < nb; ++k) {
                ap = std::min(ap, max_step_psd(X[k], d.dX[k]));
                ad = std::min(ad, max_step_psd(Z[k], d.dZ[k]));
            }
            return std::pair<double, double>{ap, ad};
        };

        const Direction pred = direction(0.0, nullptr);
        auto [ap_aff, ad_aff] = step_lengths(pred);
        ap_aff = std::min(1.0, ap_aff);
        ad_aff = std::min(1.0, ad_aff);
        double gap_aff = (x + ap_aff * pred.dx).dot(z + ad_aff * pred.dz);
        for (std::size_t k = 0; k < nb; ++k)
            gap_aff += (X[k] + ap_aff * pred.dX[k]).cwiseProduct(Z[k] + ad_aff * pred.dZ[k]).sum();
        const double sigma = std::clamp(std::pow(std::max(gap_aff, 0.0) / gap, 3.0), 0.0, 1.0);

        const Direction corr = direction(sigma * mu, &pred);
        auto [ap, ad] = step_lengths(corr);
        ap = std::min(1.0, options_.step_fraction * ap);
        ad = std::min(1.0, options_.step_fraction * ad);
        if (ap < 1e-10 && ad < 1e-10) stalled = true;

        for (std::size_t k = 0; k < nb; ++k) {
            X[k] = symmetrize(X[k] + ap * corr.dX[k]);
            Z[k] = symmetrize(Z[k] + ad * corr.dZ[k]);
        }
        x += ap * corr.dx;
        z += ad * corr.dz;
        y += ad * corr.dy;
    }

    if (res.status != SdpStatus::Optimal && res.status != SdpStatus::Infeasible) {
        if (res.primal_infeasibility < options_.fallback_feasibility &&
            res.dual_infeasibility < options_.fallback_feasibility && res.relative_gap < options_.fallback_gap) {
            res.status = SdpStatus::Optimal;
            res.message = "reduced accuracy";
        } else {
            res.status = SdpStatus::NumericalFailure;
            res.message = stalled ? "step length collapsed" : "iteration limit reached";
        }
    }
    res.blocks = std::move(X);
    res.nonneg = std::move(x);
    res.y = std::move(y);
    return res;
}

const SdpBackend& default_backend() {
    static const InteriorPointBackend backend;
    return backend;
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

namespace {

double row_norm(const RealConstraint& c) {
    double n2 = 0.0;
    for (const auto& bc : c.blocks) {
        if (bc.sparse)
            for (const auto& e : bc.entries) n2 += e.value() * e.value();
        else
            n2 += bc.dense.squaredNorm();
    }
    for (const auto& [k, a] : c.nonneg) n2 += a * a;
    return std::sqrt(n2);
}

void scale_rows(RealSdp& p) {
    for (auto& c : p.constraints) {
        const double s = row_norm(c);
        if (s <= 0.0) continue;
        for (auto& bc : c.blocks) {
            if (bc.sparse)
                for (auto& e : bc.entries) e = Eigen::Triplet<double>(e.row(), e.col(), e.value() / s);
            else
                bc.dense /= s;
        }
        for (auto& [k, a] : c.nonneg) a /= s;
        c.rhs /= s;
    }
}

double scale_objective(RealSdp& p) {
    double n2 = p.objective_nonneg.squaredNorm();
    for (const auto& c : p.objective) n2 += c.squaredNorm();
    const double s = std::sqrt(n2);
    if (s <= 0.0) return 1.0;
    for (auto& c : p.objective) c /= s;
    p.objective_nonneg /= s;
    return s;
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SdpBackend& backend) {
    const RealSdp base = embed_real(problem);

    SdpSolution sol;
    for (int attempt = 1; attempt <= 2; ++attempt) {
        RealSdp scaled = base;
        scale_rows(scaled);
        double obj_scale = 1.0;
        RealSdpResult r;
        if (attempt == 1) {
            r = backend.solve(scaled);
        } else {
            obj_scale = scale_objective(scaled);
            if (const auto* ipm = dynamic_cast<const InteriorPointBackend*>(&backend)) {
                InteriorPointOptions opts = ipm->options();
                opts.step_fraction = 0.9;
                opts.max_iterations = 2 * opts.max_iterations;
                r = InteriorPointBackend(opts).solve(scaled);
            } else {
                r = backend.solve(scaled);
            }
        }
        sol.accuracy.attempts = attempt;
        sol.accuracy.iterations += r.iterations;
        sol.accuracy.primal_infeasibility = r.primal_infeasibility;
        sol.accuracy.dual_infeasibility = r.dual_infeasibility;
        sol.accuracy.relative_gap = r.relative_gap;
        sol.status = r.status;
        sol.message = r.message;
        sol.matrices.clear();
        for (const auto& blk : r.blocks) sol.matrices.push_back(extract_hermitian(blk));
        if (r.status == SdpStatus::Infeasible) break;
        if (sol.matrices.size() == problem.variables.size()) {
            sol.objective = problem.objective_value(sol.matrices);
            sol.dual_objective = r.dual_objective * obj_scale + problem.objective_constant;
            sol.accuracy.max_violation = problem.max_violation(sol.matrices);
            if (sol.status == SdpStatus::Optimal && sol.accuracy.max_violation > 1e-6) {
                sol.status = SdpStatus::NumericalFailure;
                sol.message = "constraint violation after extraction";
            }
        }
        if (sol.status == SdpStatus::Optimal) break;
    }
    return sol;
}

}  // namespace irsnoma
