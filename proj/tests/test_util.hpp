// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#pragma once

#include "udcran/common.hpp"
#include "udcran/harness.hpp"

#include <vector>

namespace udcran::testing {

inline CMat random_psd(Rng& rng, int n, int rank) {
  CMat g(n, rank);
  for (int c = 0; c < rank; ++c) g.col(c) = sample_cn(rng, n, 1.0);
  return g * g.adjoint();
}

inline double min_eigenvalue(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double hermitian_defect(const CMat& a) { return (a - a.adjoint()).norm() / std::max(a.norm(), 1e-300); }

/// A StatSet with hand-set matrices: every UE has the given cluster and all
/// matrices start at zero.
inline StatSet blank_statset(int antennas, int num_rrh, std::vector<std::vector<int>> clusters, double noise) {
  StatSet s;
  s.antennas = antennas;
  s.num_rrh = num_rrh;
  s.num_ue = static_cast<int>(clusters.size());
  s.noise_mw = noise;
  s.clusters = std::move(clusters);
  for (int k = 0; k < s.num_ue; ++k) {
    s.A_kk.push_back(CMat::Zero(s.dim(k), s.dim(k)));
    s.E_kk.push_back(CMat::Zero(s.dim(k), s.dim(k)));
    s.seed_dir.push_back(CVec::Zero(s.dim(k)));
  }
  for (int l = 0; l < s.num_ue; ++l)
    for (int k = 0; k < s.num_ue; ++k) s.interference.push_back(CMat::Zero(s.dim(l), s.dim(l)));
  return s;
}

inline CMat& interference_at(StatSet& s, int l, int k) {
  return s.interference[static_cast<std::size_t>(l) * s.num_ue + k];
}

inline Scenario small_scenario(int trial, double r_min = 3.0) {
  ExperimentConfig cfg;
  cfg.r_min = r_min;
  return build_scenario(cfg, trial_seed(cfg.base_seed, trial));
}

}  // namespace udcran::testing
