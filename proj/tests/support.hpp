// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>

#include "irsnoma/model.hpp"

namespace irsnoma::test {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

    cdouble cnormal() { return {normal() / std::sqrt(2.0), normal() / std::sqrt(2.0)}; }

    CVec cvec(Eigen::Index n, double scale = 1.0) {
        CVec v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = scale * cnormal();
        return v;
    }

    CMat cmat(Eigen::Index r, Eigen::Index c, double scale = 1.0) {
        CMat m(r, c);
        for (Eigen::Index j = 0; j < c; ++j)
            for (Eigen::Index i = 0; i < r; ++i) m(i, j) = scale * cnormal();
        return m;
    }

    CMat hermitian(Eigen::Index n) {
        CMat a = cmat(n, n);
        return 0.5 * (a + a.adjoint());
    }

    CMat psd(Eigen::Index n, Eigen::Index rank) {
        CMat b = cmat(n, rank);
        return b * b.adjoint();
    }

    ReflectVector reflect(int k) {
        RVec phases(k);
        for (int i = 0; i < k; ++i) phases(i) = uniform(0.0, 2.0 * kPi);
        return ReflectVector::from_phases(phases);
    }

    ChannelSet channels(int n, int k, double direct = 1.0, double irs = 1.0) {
        ChannelSet ch;
        ch.g_bs_irs = cmat(k, n, irs);
        ch.h_bs_nu = cvec(n, direct);
        ch.h_bs_fu = cvec(n, direct);
        ch.h_irs_nu = cvec(k, irs);
        ch.h_irs_fu = cvec(k, irs);
        return ch;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace irsnoma::test
