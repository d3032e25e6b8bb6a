// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/common.hpp"

#include <cmath>

namespace udcran {

CVec sample_cn(Rng& rng, int n, double var) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(var / 2.0));
  CVec v(n);
  for (int j = 0; j < n; ++j) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(j) = cd(re, im);
  }
  return v;
}

CVec sample_unit(Rng& rng, int n) {
  CVec v = sample_cn(rng, n, 1.0);
  double nrm = v.norm();
  while (nrm == 0.0) {
    v = sample_cn(rng, n, 1.0);
    nrm = v.norm();
  }
  return v / nrm;
}

std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double noise_power_mw(double bandwidth_hz, double density_dbm_per_hz) {
  return db_to_linear(density_dbm_per_hz + 10.0 * std::log10(bandwidth_hz));
}

double wrap_angle(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

}  // namespace udcran
