// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#pragma once

#include "udcran/channels.hpp"
#include "udcran/common.hpp"
#include "udcran/feedback.hpp"
#include "udcran/topology.hpp"

#include <optional>
#include <string>
#include <vector>

namespace udcran {

/// E{a}: mean CDI quantization error of a 2^b RVQ codebook, N * B(N, M/(M-1)).
double cdi_error_mean(int antennas, int b_cdi);

/// E{e^{j phi_err}} for a uniform phase error of a b-bit quantizer; 0 for b = 0.
double pa_phase_gain(int b_pa);

/// E{||h_hat||} for h_hat ~ CN(0, omega I_M).
double mean_estimate_norm(double omega, int antennas);

/// E{sqrt(1 - a)} via the finite alternating series, evaluated in extended
/// precision. Memoised per (M, b). Codebooks above 2^10 entries use
/// cdi_amplitude_mean_quadrature instead.
double cdi_amplitude_mean(int antennas, int b_cdi);

/// E{sqrt(1 - a)} = 1 - int_0^1 (1 - (1 - s^2)^{M-1})^N ds by adaptive quadrature.
double cdi_amplitude_mean_quadrature(int antennas, int b_cdi);

struct LemmaConstants {
  double rho = 0.0;
  double xi = 0.0;
  double varsigma = 0.0;
  double omega_big = 0.0;
  CMat O;  // (I - q q^H) / (M - 1)
};

LemmaConstants lemma_constants(double omega, int b_cdi, int b_pa, const CVec& q, int antennas);

enum class BeliefModel { FullRobust, QuantOnly, EstimOnly, CdiOnly, NonRobust, PerfectCsi };

std::string to_string(BeliefModel b);
BeliefModel belief_from_string(const std::string& s);
/// The four mis-specified designs compared against FullRobust.
std::vector<BeliefModel> baseline_beliefs();

/// Per-pair statistics as assumed by a design: second moment S, mean m and
/// error variance d of the believed channel.
struct PairBelief {
  CMat second;
  CVec mean;
  double delta = 0.0;
};

/// Design-time statistics for every UE. A_lk(l, k) is the interference
/// second moment of UE l's stacked beam at UE k (size M |I_l|).
struct StatSet {
  BeliefModel belief = BeliefModel::FullRobust;
  int antennas = 2;
  int num_rrh = 0;
  int num_ue = 0;
  double noise_mw = 0.0;
  std::vector<std::vector<int>> clusters;
  std::vector<CMat> A_kk;
  std::vector<CMat> E_kk;
  std::vector<CMat> interference;
  /// Per UE, stacked unit-norm slices along the believed channel direction
  /// (e^{j phi_hat} q); used to seed beamformers.
  std::vector<CVec> seed_dir;

  const CMat& A_lk(int l, int k) const { return interference[static_cast<std::size_t>(l) * num_ue + k]; }
  int dim(int k) const { return antennas * static_cast<int>(clusters[k].size()); }
};

/// Belief of one intra-cluster pair under the given model. PerfectCsi needs the draw.
PairBelief pair_belief(BeliefModel belief, const FeedbackState& fb, const EstimationStats& est, const Topology& topo,
                       int i, int k, const ChannelDraw* draw = nullptr);

/// Desired-signal second moment of UE k from per-pair beliefs.
CMat desired_matrix(const Topology& topo, const std::vector<PairBelief>& beliefs, int k);

/// Interference second moment of UE l's beam at UE k, l != k.
CMat interference_matrix(const Topology& topo, const std::vector<PairBelief>& beliefs, int l, int k);

StatSet build_statset(BeliefModel belief, const FeedbackState& fb, const EstimationStats& est, const Topology& topo,
                      const ChannelDraw* draw = nullptr);

}  // namespace udcran
