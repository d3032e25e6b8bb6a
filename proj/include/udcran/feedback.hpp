// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#pragma once

#include "udcran/channels.hpp"
#include "udcran/common.hpp"
#include "udcran/topology.hpp"

#include <cstdint>
#include <vector>

namespace udcran {

struct FeedbackConfig {
  int b_cdi = 4;
  int b_pa = 2;
  std::uint64_t codebook_seed = 7;
  /// Reference mode: the BBU receives the exact phase (phi_hat = phi).
  bool perfect_pa = false;

  void validate() const;
};

/// Codebooks indexed i * K + k; each is M x 2^B with unit-norm columns.
/// Pairs outside the cluster of k hold an empty matrix.
struct CodebookSet {
  int num_ue = 0;
  std::vector<CMat> books;

  const CMat& at(int i, int k) const { return books[static_cast<std::size_t>(i) * num_ue + k]; }
};

struct CdiQuantization {
  int index = 0;
  CVec q;
  double a = 0.0;
  /// Phase of q^H h_dir, in [0, 2 pi). With this convention
  /// h_dir = sqrt(1 - a) e^{j phi} q + sqrt(a) u and q^H u = 0.
  double phi = 0.0;
};

/// Per intra-cluster pair feedback as seen by the BBU, plus the realised
/// quantities kept for validation. Indexed i * K + k.
struct PairFeedback {
  bool valid = false;
  int b_cdi = 0;
  int b_pa = 0;
  int index = 0;
  CVec q;
  double a = 0.0;
  double phi = 0.0;
  double phi_hat = 0.0;
};

struct FeedbackState {
  int num_rrh = 0;
  int num_ue = 0;
  bool perfect_pa = false;
  std::vector<PairFeedback> pairs;

  const PairFeedback& at(int i, int k) const { return pairs[static_cast<std::size_t>(i) * num_ue + k]; }
};

/// Nearest codeword in |h_dir^H c|, lowest index on ties. Throws NumericalError
/// for a zero vector.
CdiQuantization quantize_cdi(const CVec& h_hat, const CMat& codebook);

/// Centre of the uniform cell of width 2 pi / 2^b containing phi; 0 when b = 0.
double quantize_pa(double phi, int b_pa);

/// 2^B isotropic unit vectors per intra-cluster pair.
CodebookSet generate_codebooks(const FeedbackConfig& cfg, const Topology& topo, Rng& rng);

/// Quantizes every intra-cluster estimate. Pairs with a zero estimate are marked invalid.
FeedbackState apply_feedback(const FeedbackConfig& cfg, const Topology& topo, const ChannelDraw& draw,
                             const CodebookSet& books);

}  // namespace udcran
