// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace irsnoma {

using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorKind {
    InvalidConfig,
    DimensionMismatch,
    DegenerateVariable,
    InfeasibleInstance,
    Io,
};

// Base error for everything the library throws. `kind()` lets callers
// (the CLI, the experiment harness) report a typed error line.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidConfig: return "invalid_config";
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::DegenerateVariable: return "degenerate_variable";
    case ErrorKind::InfeasibleInstance: return "infeasible_instance";
    case ErrorKind::Io: return "io_error";
    }
    return "error";
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace irsnoma
