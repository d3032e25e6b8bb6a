// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace udcran {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Raised when a linear solve or factorization is numerically unsafe.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or precondition violation.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Draws a CN(0, var I_n) vector (real and imaginary parts each var/2).
CVec sample_cn(Rng& rng, int n, double var);

/// Isotropically distributed unit vector in C^n.
CVec sample_unit(Rng& rng, int n);

/// Counter-based seed derivation (splitmix64 of base and stream index).
std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream);

/// Thermal noise power in mW over the given bandwidth.
double noise_power_mw(double bandwidth_hz, double density_dbm_per_hz = -174.0);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Wraps an angle to [0, 2*pi).
double wrap_angle(double phi);

}  // namespace udcran
