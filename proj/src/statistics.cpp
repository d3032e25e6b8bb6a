// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/statistics.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace udcran {
namespace {

using Wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<360>>;

constexpr int kMaxSeriesBits = 10;

// The alternating binomial sum cancels roughly N * log10(2) digits.
double amplitude_series(int antennas, int b_cdi) {
  const long n = 1L << b_cdi;
  const int step = antennas - 1;
  const Wide half_sqrt_pi = boost::math::constants::root_pi<Wide>() / 2;
  // ratio(a) = Gamma(a + 3/2) / Gamma(a), advanced a -> a + 1 by (a + 3/2) / a.
  Wide ratio = 3 * boost::math::constants::root_pi<Wide>() / 4;
  long a = 1;
  Wide binom = 1;
  Wide sum = 0;
  for (long m = 1; m <= n; ++m) {
    binom = binom * (n - m + 1) / m;
    const long target = m * step;
    while (a < target) {
      ratio = ratio * (Wide(a) + Wide(3) / 2) / a;
      ++a;
    }
    const Wide term = binom * target * (half_sqrt_pi / ratio);
    if (m % 2 == 1)
      sum += term;
    else
      sum -= term;
  }
  return sum.convert_to<double>();
}

}  // namespace

double cdi_error_mean(int antennas, int b_cdi) {
  if (antennas < 2) throw ConfigError("antennas must be >= 2");
  const double n = std::ldexp(1.0, b_cdi);
  return n * boost::math::beta(n, static_cast<double>(antennas) / (antennas - 1));
}

double pa_phase_gain(int b_pa) {
  if (b_pa <= 0) return 0.0;
  const double n = std::ldexp(1.0, b_pa);
  return n / kPi * std::sin(kPi / n);
}

double mean_estimate_norm(double omega, int antennas) {
  return std::sqrt(omega) / boost::math::tgamma_delta_ratio(static_cast<double>(antennas), 0.5);
}

double cdi_amplitude_mean(int antennas, int b_cdi) {
  if (antennas < 2) throw ConfigError("antennas must be >= 2");
  if (b_cdi < 0) throw ConfigError("b_cdi must be non-negative");
  if (b_cdi > kMaxSeriesBits) return cdi_amplitude_mean_quadrature(antennas, b_cdi);
  static std::mutex mu;
  static std::map<std::pair<int, int>, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({antennas, b_cdi});
  if (it != cache.end()) return it->second;
  const double v = amplitude_series(antennas, b_cdi);
  cache.emplace(std::make_pair(antennas, b_cdi), v);
  return v;
}

double cdi_amplitude_mean_quadrature(int antennas, int b_cdi) {
  const double n = std::ldexp(1.0, b_cdi);
  const int p = antennas - 1;
  auto f = [&](double s) {
    const double base = std::pow(1.0 - s * s, p);
    return std::exp(n * std::log1p(-base));
  };
  double err = 0.0;
  const double tail = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 20, 1e-14, &err);
  return 1.0 - tail;
}

LemmaConstants lemma_constants(double omega, int b_cdi, int b_pa, const CVec& q, int antennas) {
  LemmaConstants c;
  c.rho = cdi_error_mean(antennas, b_cdi);
  c.xi = pa_phase_gain(b_pa);
  c.varsigma = mean_estimate_norm(omega, antennas);
  c.omega_big = cdi_amplitude_mean(antennas, b_cdi);
  c.O = (CMat::Identity(antennas, antennas) - q * q.adjoint()) / static_cast<double>(antennas - 1);
  return c;
}

std::string to_string(BeliefModel b) {
  switch (b) {
    case BeliefModel::FullRobust: return "full_robust";
    case BeliefModel::QuantOnly: return "quant_only";
    case BeliefModel::EstimOnly: return "estim_only";
    case BeliefModel::CdiOnly: return "cdi_only";
    case BeliefModel::NonRobust: return "non_robust";
    case BeliefModel::PerfectCsi: return "perfect_csi";
  }
  return "unknown";
}

BeliefModel belief_from_string(const std::string& s) {
  for (auto b : {BeliefModel::FullRobust, BeliefModel::QuantOnly, BeliefModel::EstimOnly, BeliefModel::CdiOnly,
                 BeliefModel::NonRobust, BeliefModel::PerfectCsi})
    if (to_string(b) == s) return b;
  throw ConfigError("unknown belief model: " + s);
}

std::vector<BeliefModel> baseline_beliefs() {
  return {BeliefModel::QuantOnly, BeliefModel::EstimOnly, BeliefModel::CdiOnly, BeliefModel::NonRobust};
}

PairBelief pair_belief(BeliefModel belief, const FeedbackState& fb, const EstimationStats& est, const Topology& topo,
                       int i, int k, const ChannelDraw* draw) {
  const int m = topo.antennas;
  PairBelief pb;
  pb.second = CMat::Zero(m, m);
  pb.mean = CVec::Zero(m);
  pb.delta = est.delta(i, k);

  if (belief == BeliefModel::PerfectCsi) {
    if (draw == nullptr) throw ConfigError("perfect CSI belief requires the channel draw");
    const CVec& h = draw->true_channel(i, k);
    pb.second = h * h.adjoint();
    pb.mean = h;
    pb.delta = 0.0;
    return pb;
  }

  const PairFeedback& p = fb.at(i, k);
  if (!p.valid) return pb;
  const int b_pa = fb.perfect_pa ? 0 : p.b_pa;
  LemmaConstants c = lemma_constants(est.omega(i, k), p.b_cdi, b_pa, p.q, m);
  if (fb.perfect_pa) c.xi = 1.0;
  const cd phase = std::polar(1.0, p.phi_hat);

  switch (belief) {
    case BeliefModel::FullRobust:
    case BeliefModel::QuantOnly: {
      const double scale = est.omega(i, k) * m;
      pb.second = scale * ((1.0 - c.rho) * (p.q * p.q.adjoint()) + c.rho * c.O);
      pb.mean = (c.varsigma * c.omega_big * c.xi) * phase * p.q;
      if (belief == BeliefModel::QuantOnly) pb.delta = 0.0;
      break;
    }
    case BeliefModel::CdiOnly: {
      // No phase information and the codeword taken as exact: zero mean, rank-one second moment.
      pb.second = (c.varsigma * c.varsigma) * (p.q * p.q.adjoint());
      break;
    }
    case BeliefModel::EstimOnly:
    case BeliefModel::NonRobust: {
      pb.mean = c.varsigma * phase * p.q;
      pb.second = pb.mean * pb.mean.adjoint();
      if (belief == BeliefModel::NonRobust) pb.delta = 0.0;
      break;
    }
    case BeliefModel::PerfectCsi:
      break;
  }
  return pb;
}

CMat desired_matrix(const Topology& topo, const std::vector<PairBelief>& beliefs, int k) {
  const int m = topo.antennas;
  const auto& cl = topo.clusters[k];
  const int n = static_cast<int>(cl.size());
  const int num_k = topo.num_ue();
  CMat a = CMat::Zero(m * n, m * n);
  for (int p = 0; p < n; ++p) {
    const PairBelief& bp = beliefs[static_cast<std::size_t>(cl[p]) * num_k + k];
    a.block(p * m, p * m, m, m) = bp.second;
    for (int r = p + 1; r < n; ++r) {
      const PairBelief& br = beliefs[static_cast<std::size_t>(cl[r]) * num_k + k];
      const CMat cross = bp.mean * br.mean.adjoint();
      a.block(p * m, r * m, m, m) = cross;
      a.block(r * m, p * m, m, m) = cross.adjoint();
    }
  }
  return a;
}

CMat interference_matrix(const Topology& topo, const std::vector<PairBelief>& beliefs, int l, int k) {
  const int m = topo.antennas;
  const auto& cl = topo.clusters[l];
  const int n = static_cast<int>(cl.size());
  const int num_k = topo.num_ue();
  CMat a = CMat::Zero(m * n, m * n);
  for (int p = 0; p < n; ++p) {
    const int i = cl[p];
    if (!topo.in_cluster(i, k)) {
      a.block(p * m, p * m, m, m) = topo.alpha(i, k) * CMat::Identity(m, m);
      continue;
    }
    const PairBelief& bp = beliefs[static_cast<std::size_t>(i) * num_k + k];
    a.block(p * m, p * m, m, m) = bp.second + bp.delta * CMat::Identity(m, m);
    for (int r = p + 1; r < n; ++r) {
      const int j = cl[r];
      if (!topo.in_cluster(j, k)) continue;
      const PairBelief& br = beliefs[static_cast<std::size_t>(j) * num_k + k];
      const CMat cross = bp.mean * br.mean.adjoint();
      a.block(p * m, r * m, m, m) = cross;
      a.block(r * m, p * m, m, m) = cross.adjoint();
    }
  }
  return a;
}

StatSet build_statset(BeliefModel belief, const FeedbackState& fb, const EstimationStats& est, const Topology& topo,
                      const ChannelDraw* draw) {
  const int num_i = topo.num_rrh(), num_k = topo.num_ue(), m = topo.antennas;
  std::vector<PairBelief> beliefs(static_cast<std::size_t>(num_i) * num_k);
  for (int k = 0; k < num_k; ++k)
    for (int i : topo.clusters[k])
      beliefs[static_cast<std::size_t>(i) * num_k + k] = pair_belief(belief, fb, est, topo, i, k, draw);

  StatSet s;
  s.belief = belief;
  s.antennas = m;
  s.num_rrh = num_i;
  s.num_ue = num_k;
  s.noise_mw = est.noise_mw;
  s.clusters = topo.clusters;
  s.A_kk.resize(num_k);
  s.E_kk.resize(num_k);
  s.seed_dir.resize(num_k);
  s.interference.resize(static_cast<std::size_t>(num_k) * num_k);
  for (int k = 0; k < num_k; ++k) {
    const auto& cl = topo.clusters[k];
    const int n = static_cast<int>(cl.size());
    s.A_kk[k] = desired_matrix(topo, beliefs, k);
    s.E_kk[k] = CMat::Zero(m * n, m * n);
    s.seed_dir[k] = CVec::Zero(m * n);
    for (int p = 0; p < n; ++p) {
      const int i = cl[p];
      const PairBelief& b = beliefs[static_cast<std::size_t>(i) * num_k + k];
      s.E_kk[k].block(p * m, p * m, m, m) = b.delta * CMat::Identity(m, m);
      CVec dir = CVec::Zero(m);
      if (belief == BeliefModel::PerfectCsi) {
        dir = b.mean;
      } else if (fb.at(i, k).valid) {
        const double phi = belief == BeliefModel::CdiOnly ? 0.0 : fb.at(i, k).phi_hat;
        dir = std::polar(1.0, phi) * fb.at(i, k).q;
      }
      const double nrm = dir.norm();
      if (nrm > 0.0) s.seed_dir[k].segment(p * m, m) = dir / nrm;
    }
    for (int l = 0; l < num_k; ++l)
      if (l != k) s.interference[static_cast<std::size_t>(l) * num_k + k] = interference_matrix(topo, beliefs, l, k);
  }
  return s;
}

}  // namespace udcran
