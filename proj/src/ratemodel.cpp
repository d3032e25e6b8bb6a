// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/ratemodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace udcran {

RateConfig RateConfig::uniform(int num_rrh, int num_ue, int T, int tau, double r_min, double c_max_norm,
                               double p_max) {
  RateConfig c;
  c.T = T;
  c.tau = tau;
  c.r_min.assign(num_ue, r_min);
  c.c_max.assign(num_rrh, c_max_norm * r_min);
  c.p_max.assign(num_rrh, p_max);
  c.validate();
  return c;
}

double RateConfig::eta(int k) const { return std::exp2(r_min[k] / prelog()) - 1.0; }

void RateConfig::validate() const {
  if (T <= 0 || tau < 0 || tau >= T) throw ConfigError("training length must satisfy 0 <= tau < T");
  for (double r : r_min)
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("rate targets must be positive");
  for (double c : c_max)
    if (!(c > 0.0)) throw ConfigError("fronthaul limits must be positive");
  for (double p : p_max)
    if (!(p > 0.0)) throw ConfigError("power limits must be positive");
}

BeamSet BeamSet::zeros(const StatSet& stats) {
  BeamSet b;
  b.antennas = stats.antennas;
  b.w.resize(stats.num_ue);
  for (int k = 0; k < stats.num_ue; ++k) b.w[k] = CVec::Zero(stats.dim(k));
  return b;
}

double BeamSet::total_power() const {
  double s = 0.0;
  for (const auto& v : w) s += v.squaredNorm();
  return s;
}

RVec BeamSet::rrh_power(const std::vector<std::vector<int>>& clusters, int num_rrh) const {
  RVec p = RVec::Zero(num_rrh);
  for (std::size_t k = 0; k < w.size(); ++k)
    for (std::size_t pos = 0; pos < clusters[k].size(); ++pos)
      p(clusters[k][pos]) += link_power(static_cast<int>(k), static_cast<int>(pos));
  return p;
}

double interference_plus_noise(const BeamSet& beams, const StatSet& stats, int k) {
  double d = stats.noise_mw + std::real(beams.w[k].dot(stats.E_kk[k] * beams.w[k]));
  for (int l = 0; l < stats.num_ue; ++l) {
    if (l == k || beams.w[l].squaredNorm() == 0.0) continue;
    d += std::real(beams.w[l].dot(stats.A_lk(l, k) * beams.w[l]));
  }
  return d;
}

double sinr(const BeamSet& beams, const StatSet& stats, int k) {
  const double s = std::real(beams.w[k].dot(stats.A_kk[k] * beams.w[k]));
  return std::max(s, 0.0) / interference_plus_noise(beams, stats, k);
}

double rate_from_sinr(double s, const RateConfig& cfg) { return cfg.prelog() * std::log2(1.0 + s); }

double net_rate(const BeamSet& beams, const StatSet& stats, const RateConfig& cfg, int k) {
  return rate_from_sinr(sinr(beams, stats, k), cfg);
}

double ResidualReport::max_relative_violation(const RateConfig& cfg) const {
  double v = 0.0;
  for (int i = 0; i < power_margin.size(); ++i) {
    v = std::max(v, -power_margin(i) / cfg.p_max[i]);
    v = std::max(v, -fronthaul_margin(i) / cfg.c_max[i]);
  }
  for (int k = 0; k < sinr_margin.size(); ++k)
    if (std::isfinite(sinr_margin(k))) v = std::max(v, -sinr_margin(k));
  return v;
}

ResidualReport constraint_residuals(const BeamSet& beams, const StatSet& stats, const RateConfig& cfg,
                                    const std::vector<int>& served_ues, double theta) {
  const int num_i = stats.num_rrh, num_k = stats.num_ue;
  ResidualReport r;
  r.power_margin = Eigen::Map<const RVec>(cfg.p_max.data(), num_i);
  r.fronthaul_margin = Eigen::Map<const RVec>(cfg.c_max.data(), num_i);
  r.fronthaul_smooth_margin = r.fronthaul_margin;
  r.sinr_margin = RVec::Constant(num_k, std::numeric_limits<double>::quiet_NaN());
  for (int k = 0; k < num_k; ++k) {
    const auto& cl = stats.clusters[k];
    for (int pos = 0; pos < static_cast<int>(cl.size()); ++pos) {
      const double x = beams.link_power(k, pos);
      const int i = cl[pos];
      r.power_margin(i) -= x;
      if (x > kLinkPowerFloor) r.fronthaul_margin(i) -= cfg.r_min[k];
      r.fronthaul_smooth_margin(i) -= smooth_indicator(x, theta) * cfg.r_min[k];
    }
  }
  for (int k : served_ues) r.sinr_margin(k) = sinr(beams, stats, k) / cfg.eta(k) - 1.0;

  for (int i = 0; i < num_i; ++i) {
    r.rows.push_back({-1, i, "power", r.power_margin(i)});
    r.rows.push_back({-1, i, "fronthaul", r.fronthaul_margin(i)});
    r.rows.push_back({-1, i, "fronthaul_smooth", r.fronthaul_smooth_margin(i)});
  }
  for (int k : served_ues) r.rows.push_back({k, -1, "sinr", r.sinr_margin(k)});
  return r;
}

std::string residuals_to_csv(const ResidualReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "ue,rrh,constraint,margin\n";
  for (const auto& row : r.rows) os << row.ue << ',' << row.rrh << ',' << row.constraint << ',' << row.margin << '\n';
  return os.str();
}

}  // namespace udcran
