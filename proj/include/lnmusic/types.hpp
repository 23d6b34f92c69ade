// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lnmusic {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Invalid or inconsistent configuration (shapes, ranges, missing keys).
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numeric parameter outside its admissible domain (e.g. a non-positive smoothing constant).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A factorization or decomposition failed.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The spectrum did not contain enough peaks to report every source.
class EstimationFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace lnmusic
