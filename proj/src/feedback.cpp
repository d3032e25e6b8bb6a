// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/feedback.hpp"

#include <algorithm>
#include <cmath>

namespace udcran {

void FeedbackConfig::validate() const {
  if (b_cdi < 1 || b_cdi > 16) throw ConfigError("b_cdi must be in [1, 16]");
  if (b_pa < 0 || b_pa > 30) throw ConfigError("b_pa must be in [0, 30]");
}

CdiQuantization quantize_cdi(const CVec& h_hat, const CMat& codebook) {
  const double nrm = h_hat.norm();
  if (!(nrm > 0.0)) throw NumericalError("zero channel estimate cannot be quantized");
  if (codebook.cols() == 0 || codebook.rows() != h_hat.size()) throw ConfigError("codebook shape mismatch");
  const CVec dir = h_hat / nrm;
  CdiQuantization out;
  double best = -1.0;
  for (int n = 0; n < codebook.cols(); ++n) {
    const double g = std::abs(dir.dot(codebook.col(n)));
    if (g > best) {
      best = g;
      out.index = n;
    }
  }
  out.q = codebook.col(out.index);
  const cd proj = out.q.dot(dir);  // q^H h_dir
  out.a = std::clamp(1.0 - std::norm(proj), 0.0, 1.0);
  out.phi = std::abs(proj) > 0.0 ? wrap_angle(std::arg(proj)) : 0.0;
  return out;
}

double quantize_pa(double phi, int b_pa) {
  if (b_pa <= 0) return 0.0;
  const double cells = std::ldexp(1.0, b_pa);
  const double width = kTwoPi / cells;
  double c = std::floor(wrap_angle(phi) / width);
  c = std::clamp(c, 0.0, cells - 1.0);
  return (c + 0.5) * width;
}

CodebookSet generate_codebooks(const FeedbackConfig& cfg, const Topology& topo, Rng& rng) {
  cfg.validate();
  CodebookSet set;
  set.num_ue = topo.num_ue();
  set.books.resize(static_cast<std::size_t>(topo.num_rrh()) * topo.num_ue());
  const int size = 1 << cfg.b_cdi;
  for (int k = 0; k < topo.num_ue(); ++k) {
    for (int i : topo.clusters[k]) {
      CMat book(topo.antennas, size);
      for (int n = 0; n < size; ++n) book.col(n) = sample_unit(rng, topo.antennas);
      set.books[static_cast<std::size_t>(i) * set.num_ue + k] = std::move(book);
    }
  }
  return set;
}

FeedbackState apply_feedback(const FeedbackConfig& cfg, const Topology& topo, const ChannelDraw& draw,
                             const CodebookSet& books) {
  cfg.validate();
  FeedbackState fb;
  fb.num_rrh = topo.num_rrh();
  fb.num_ue = topo.num_ue();
  fb.perfect_pa = cfg.perfect_pa;
  fb.pairs.resize(static_cast<std::size_t>(fb.num_rrh) * fb.num_ue);
  for (int k = 0; k < fb.num_ue; ++k) {
    for (int i : topo.clusters[k]) {
      auto& p = fb.pairs[static_cast<std::size_t>(i) * fb.num_ue + k];
      p.b_cdi = cfg.b_cdi;
      p.b_pa = cfg.b_pa;
      const CVec& est = draw.estimate(i, k);
      if (!(est.norm() > 0.0)) continue;
      const CdiQuantization cq = quantize_cdi(est, books.at(i, k));
      p.valid = true;
      p.index = cq.index;
      p.q = cq.q;
      p.a = cq.a;
      p.phi = cq.phi;
      p.phi_hat = cfg.perfect_pa ? cq.phi : quantize_pa(cq.phi, cfg.b_pa);
    }
  }
  return fb;
}

}  // namespace udcran
