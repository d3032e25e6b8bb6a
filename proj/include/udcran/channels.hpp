// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#pragma once

#include "udcran/common.hpp"
#include "udcran/pilots.hpp"
#include "udcran/topology.hpp"

#include <vector>

namespace udcran {

/// Per-pair MMSE estimate variance (omega) and error variance (delta), per antenna.
struct EstimationStats {
  RMat omega;
  RMat delta;
  double sigma_hat2 = 0.0;  // noise / pilot power
  double noise_mw = 0.0;
};

/// Channel realisation. Vectors are indexed by i * K + k; h_hat and e are
/// empty for pairs outside the cluster of k.
struct ChannelDraw {
  int num_rrh = 0;
  int num_ue = 0;
  std::vector<CVec> h;
  std::vector<CVec> h_hat;
  std::vector<CVec> e;

  int index(int i, int k) const { return i * num_ue + k; }
  const CVec& true_channel(int i, int k) const { return h[index(i, k)]; }
  const CVec& estimate(int i, int k) const { return h_hat[index(i, k)]; }
  const CVec& error(int i, int k) const { return e[index(i, k)]; }
};

EstimationStats estimation_stats(const Topology& topo, const PilotAssignment& pa, double p_t_mw, double noise_mw);

/// Draws (h_hat, e) independently from their Gaussian laws inside clusters and
/// h ~ CN(0, alpha I) outside.
ChannelDraw sample_channels(const Topology& topo, const EstimationStats& stats, Rng& rng);

/// Simulates the received training block at every UE with explicit pilot
/// matrices and applies the linear MMSE estimator.
ChannelDraw estimate_from_pilots(const Topology& topo, const PilotAssignment& pa, double p_t_mw, double noise_mw,
                                 Rng& rng);

}  // namespace udcran
