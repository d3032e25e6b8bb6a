// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/channels.hpp"

#include <cmath>

namespace udcran {
namespace {

double contaminated_power(const Topology& topo, const PilotAssignment& pa, int i, int k) {
  double s = 0.0;
  for (int m : pa.reuse_set_of(i)) s += topo.alpha(m, k);
  return s;
}

double foreign_power(const Topology& topo, const PilotAssignment& pa, int i, int k) {
  double s = 0.0;
  for (int m : pa.reuse_set_of(i))
    if (m != i) s += topo.alpha(m, k);
  return s;
}

ChannelDraw empty_draw(const Topology& topo) {
  ChannelDraw d;
  d.num_rrh = topo.num_rrh();
  d.num_ue = topo.num_ue();
  const std::size_t n = static_cast<std::size_t>(d.num_rrh) * d.num_ue;
  d.h.resize(n);
  d.h_hat.resize(n);
  d.e.resize(n);
  return d;
}

}  // namespace

EstimationStats estimation_stats(const Topology& topo, const PilotAssignment& pa, double p_t_mw, double noise_mw) {
  if (!(p_t_mw > 0.0)) throw ConfigError("pilot power must be positive");
  if (static_cast<int>(pa.color.size()) != topo.num_rrh()) throw ConfigError("pilot assignment does not match topology");
  EstimationStats s;
  s.noise_mw = noise_mw;
  s.sigma_hat2 = noise_mw / p_t_mw;
  const int num_i = topo.num_rrh(), num_k = topo.num_ue();
  s.omega.resize(num_i, num_k);
  s.delta.resize(num_i, num_k);
  for (int k = 0; k < num_k; ++k) {
    for (int i = 0; i < num_i; ++i) {
      const double a = topo.alpha(i, k);
      const double other = foreign_power(topo, pa, i, k) + s.sigma_hat2;
      const double tot = a + other;
      s.omega(i, k) = a * a / tot;
      s.delta(i, k) = a * other / tot;
    }
  }
  return s;
}

ChannelDraw sample_channels(const Topology& topo, const EstimationStats& stats, Rng& rng) {
  ChannelDraw d = empty_draw(topo);
  const int m = topo.antennas;
  for (int i = 0; i < d.num_rrh; ++i) {
    for (int k = 0; k < d.num_ue; ++k) {
      const int idx = d.index(i, k);
      if (topo.in_cluster(i, k)) {
        d.h_hat[idx] = sample_cn(rng, m, stats.omega(i, k));
        d.e[idx] = stats.delta(i, k) > 0.0 ? sample_cn(rng, m, stats.delta(i, k)) : CVec(CVec::Zero(m));
        d.h[idx] = d.h_hat[idx] + d.e[idx];
      } else {
        d.h[idx] = sample_cn(rng, m, topo.alpha(i, k));
      }
    }
  }
  return d;
}

ChannelDraw estimate_from_pilots(const Topology& topo, const PilotAssignment& pa, double p_t_mw, double noise_mw,
                                 Rng& rng) {
  ChannelDraw d = empty_draw(topo);
  const int m = topo.antennas;
  const double sp = std::sqrt(p_t_mw);
  const double sigma_hat2 = noise_mw / p_t_mw;
  for (int i = 0; i < d.num_rrh; ++i)
    for (int k = 0; k < d.num_ue; ++k) d.h[d.index(i, k)] = sample_cn(rng, m, topo.alpha(i, k));

  std::vector<CMat> x(d.num_rrh);
  for (int i = 0; i < d.num_rrh; ++i) x[i] = pilot_matrix(pa, i, m);

  for (int k = 0; k < d.num_ue; ++k) {
    // Conjugate transpose of the received training row: sum_i sqrt(p) X_i h_ik + n^H.
    CVec y = noise_mw > 0.0 ? sample_cn(rng, pa.tau, noise_mw) : CVec(CVec::Zero(pa.tau));
    for (int i = 0; i < d.num_rrh; ++i) y += sp * x[i] * d.h[d.index(i, k)];
    for (int i : topo.clusters[k]) {
      const int idx = d.index(i, k);
      const double gain = topo.alpha(i, k) / (contaminated_power(topo, pa, i, k) + sigma_hat2);
      d.h_hat[idx] = (gain / sp) * (x[i].adjoint() * y);
      d.e[idx] = d.h[idx] - d.h_hat[idx];
    }
  }
  return d;
}

}  // namespace udcran
