// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#pragma once

#include "udcran/common.hpp"
#include "udcran/statistics.hpp"

#include <string>
#include <vector>

namespace udcran {

/// Frame, target and limit parameters. Rates in bit/s/Hz, powers in mW.
struct RateConfig {
  int T = 200;
  int tau = 0;
  std::vector<double> r_min;  // per UE
  std::vector<double> c_max;  // per RRH
  std::vector<double> p_max;  // per RRH

  /// Common targets; fronthaul limit is c_max_norm * r_min.
  static RateConfig uniform(int num_rrh, int num_ue, int T, int tau, double r_min, double c_max_norm, double p_max);

  double prelog() const { return static_cast<double>(T - tau) / T; }
  /// SINR target 2^{T R / (T - tau)} - 1 of UE k.
  double eta(int k) const;
  void validate() const;
};

/// Stacked beamformers, one per UE (length M |I_k|); UEs that are not served hold zeros.
struct BeamSet {
  int antennas = 2;
  std::vector<CVec> w;

  static BeamSet zeros(const StatSet& stats);
  /// Slice of w_k transmitted by the RRH at cluster position pos.
  auto slice(int k, int pos) { return w[k].segment(pos * antennas, antennas); }
  auto slice(int k, int pos) const { return w[k].segment(pos * antennas, antennas); }
  double link_power(int k, int pos) const { return slice(k, pos).squaredNorm(); }
  double total_power() const;
  /// Per-RRH transmit power given the cluster layout.
  RVec rrh_power(const std::vector<std::vector<int>>& clusters, int num_rrh) const;
};

inline constexpr double kLinkPowerFloor = 1e-9;  // mW; below this a link counts as off

/// Smoothed link indicator x / (x + theta).
inline double smooth_indicator(double x, double theta) { return x / (x + theta); }
/// Derivative theta / (x + theta)^2 of the smoothed indicator.
inline double smooth_indicator_slope(double x, double theta) { return theta / ((x + theta) * (x + theta)); }

/// Interference-plus-noise power at UE k (denominator of its SINR).
double interference_plus_noise(const BeamSet& beams, const StatSet& stats, int k);
double sinr(const BeamSet& beams, const StatSet& stats, int k);
double net_rate(const BeamSet& beams, const StatSet& stats, const RateConfig& cfg, int k);
double rate_from_sinr(double sinr, const RateConfig& cfg);

struct ResidualRow {
  int ue = -1;
  int rrh = -1;
  std::string constraint;
  double margin = 0.0;
};

/// Margins are non-negative when satisfied.
struct ResidualReport {
  RVec power_margin;           // P_max - sum ||w_ik||^2, per RRH
  RVec fronthaul_margin;       // C_max - sum 1{||w_ik||^2 > floor} R_k, per RRH
  RVec fronthaul_smooth_margin;  // C_max - sum f_theta(||w_ik||^2) R_k, per RRH
  RVec sinr_margin;            // SINR_k / eta_k - 1 for UEs in the served set, else NaN
  std::vector<ResidualRow> rows;

  /// Largest violation relative to the corresponding limit (0 when feasible).
  double max_relative_violation(const RateConfig& cfg) const;
};

ResidualReport constraint_residuals(const BeamSet& beams, const StatSet& stats, const RateConfig& cfg,
                                    const std::vector<int>& served_ues, double theta);

std::string residuals_to_csv(const ResidualReport& r);

}  // namespace udcran
