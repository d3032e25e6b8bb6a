// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#pragma once

#include "udcran/channels.hpp"
#include "udcran/common.hpp"
#include "udcran/feedback.hpp"
#include "udcran/topology.hpp"

#include <cstdint>
#include <string>
#include <vector>

// Monte Carlo oracles for the channel, feedback and statistics modules. None of
// them calls the closed-form constants they are compared against.
namespace udcran {

struct OracleResult {
  std::string module;
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double error = 0.0;  // relative unless the name says otherwise
  double tolerance = 0.0;
  bool pass = false;
};

struct OracleOptions {
  long stat_draws = 1'000'000;     // conditional sampler and RVQ codebook draws
  long channel_draws = 100'000;
  std::uint64_t seed = 2026;
  std::vector<int> b_cdi{1, 2, 4};
  std::vector<int> b_pa{0, 1, 2};
  std::vector<int> cluster_sizes{1, 2, 3};
};

/// E{a} and E{sqrt(1 - a)} with a fresh isotropic 2^b codebook and channel per draw.
struct RvqMoments {
  double mean_error = 0.0;
  double mean_amplitude = 0.0;
};
RvqMoments rvq_moments_mc(int antennas, int b_cdi, long draws, Rng& rng);

/// Sample means of the stacked second moments of UE k's channel given the
/// feedback: desired (estimate part over I_k), estimation error over I_k, and
/// the channel seen through UE l's cluster for each l in `interferers`.
struct ConditionalMoments {
  CMat A_kk;
  CMat E_kk;
  std::vector<CMat> A_lk;
};
ConditionalMoments conditional_moments_mc(const Topology& topo, const EstimationStats& est, const FeedbackState& fb,
                                          int k, const std::vector<int>& interferers, long draws, Rng& rng);

/// ||X - Y||_F / ||Y||_F (absolute when Y is zero).
double frobenius_relative(const CMat& x, const CMat& y);

/// Kolmogorov-Smirnov distance of samples against U[lo, hi].
double ks_uniform_distance(std::vector<double> samples, double lo, double hi);

std::vector<OracleResult> channel_oracles(const OracleOptions& opt);
std::vector<OracleResult> feedback_oracles(const OracleOptions& opt);
/// Closed-form A_kk, E_kk and A_lk against the conditional sampler on the
/// grid b_cdi x b_pa x cluster_sizes (M = 2), plus rho and Omega against
/// explicit-codebook sampling.
std::vector<OracleResult> statistics_oracles(const OracleOptions& opt);
std::vector<OracleResult> run_all_oracles(const OracleOptions& opt);

}  // namespace udcran
