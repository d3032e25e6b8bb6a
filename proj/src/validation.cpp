// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/validation.hpp"

#include "udcran/pilots.hpp"
#include "udcran/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace udcran {
namespace {

OracleResult relative_check(std::string module, std::string name, double measured, double expected, double tol) {
  OracleResult r;
  r.module = std::move(module);
  r.name = std::move(name);
  r.measured = measured;
  r.expected = expected;
  r.error = expected != 0.0 ? std::abs(measured - expected) / std::abs(expected) : std::abs(measured);
  r.tolerance = tol;
  r.pass = r.error <= tol;
  return r;
}

OracleResult bound_check(std::string module, std::string name, double measured, double bound) {
  OracleResult r;
  r.module = std::move(module);
  r.name = std::move(name);
  r.measured = measured;
  r.expected = 0.0;
  r.error = measured;
  r.tolerance = bound;
  r.pass = measured <= bound;
  return r;
}

std::string label(const char* what, int b_cdi, int b_pa, int l) {
  std::ostringstream os;
  os << what << " b_cdi=" << b_cdi << " b_pa=" << b_pa << " L=" << l;
  return os.str();
}

// Synthetic layout with every interference case: UE 0 is the desired UE,
// UE 1 overlaps its cluster and UE 2 is disjoint. RRHs 4 and 5 reuse the
// pilots of 0 and 1, so the estimation error is not negligible.
struct OracleNetwork {
  Topology topo;
  PilotAssignment pilots;
  EstimationStats est;
};

OracleNetwork oracle_network(int cluster_size) {
  const int num_rrh = 6, num_ue = 3, m = 2;
  RMat alpha(num_rrh, num_ue);
  for (int i = 0; i < num_rrh; ++i)
    for (int k = 0; k < num_ue; ++k) alpha(i, k) = 1e-10 * (1.0 + 0.37 * i + 0.61 * k + 0.05 * i * k);
  const std::vector<std::vector<int>> full{{0, 1, 2}, {0, 3, 1}, {3, 4, 5}};
  std::vector<std::vector<int>> clusters;
  for (const auto& c : full) clusters.emplace_back(c.begin(), c.begin() + cluster_size);

  OracleNetwork net;
  net.topo = Topology::from_parts(m, alpha, clusters);
  net.pilots.color = {0, 1, 2, 3, 0, 1};
  net.pilots.num_colors = 4;
  net.pilots.tau = 4 * m;
  net.pilots.reuse_sets = {{0, 4}, {1, 5}, {2}, {3}};
  net.est = estimation_stats(net.topo, net.pilots, 200.0, noise_power_mw(20e6));
  return net;
}

// Draws the estimate of one intra-cluster pair given its feedback.
CVec conditional_estimate(const PairFeedback& p, double omega, bool perfect_pa, int m, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double norm = sample_cn(rng, m, omega).norm();  // scaled chi with 2M degrees of freedom
  const long n = 1L << p.b_cdi;
  double umin = 1.0;
  for (long c = 0; c < n; ++c) umin = std::min(umin, unit(rng));
  const double a = std::pow(umin, 1.0 / (m - 1));  // min over n Beta(M-1, 1) draws
  CVec v = sample_cn(rng, m, 1.0);
  v -= p.q * p.q.dot(v);
  const CVec u = v / v.norm();
  const double half = kPi / static_cast<double>(1L << p.b_pa);
  const double err = perfect_pa ? 0.0 : (2.0 * unit(rng) - 1.0) * half;
  return norm * (std::sqrt(1.0 - a) * std::polar(1.0, p.phi_hat + err) * p.q + std::sqrt(a) * u);
}

}  // namespace

double frobenius_relative(const CMat& x, const CMat& y) {
  const double ny = y.norm();
  const double d = (x - y).norm();
  return ny > 0.0 ? d / ny : d;
}

double ks_uniform_distance(std::vector<double> samples, double lo, double hi) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double f = std::clamp((samples[j] - lo) / (hi - lo), 0.0, 1.0);
    d = std::max({d, f - j / n, (j + 1) / n - f});
  }
  return d;
}

RvqMoments rvq_moments_mc(int antennas, int b_cdi, long draws, Rng& rng) {
  const long n = 1L << b_cdi;
  double sum_a = 0.0, sum_amp = 0.0;
  for (long t = 0; t < draws; ++t) {
    const CVec h = sample_unit(rng, antennas);
    double best = 0.0;
    for (long c = 0; c < n; ++c) best = std::max(best, std::norm(sample_unit(rng, antennas).dot(h)));
    const double a = std::max(0.0, 1.0 - best);
    sum_a += a;
    sum_amp += std::sqrt(1.0 - a);
  }
  return {sum_a / draws, sum_amp / draws};
}

ConditionalMoments conditional_moments_mc(const Topology& topo, const EstimationStats& est, const FeedbackState& fb,
                                          int k, const std::vector<int>& interferers, long draws, Rng& rng) {
  const int m = topo.antennas;
  const auto& ck = topo.clusters[k];
  const int dk = m * static_cast<int>(ck.size());
  ConditionalMoments out;
  out.A_kk = CMat::Zero(dk, dk);
  out.E_kk = CMat::Zero(dk, dk);
  for (int l : interferers) out.A_lk.push_back(CMat::Zero(topo.stacked_dim(l), topo.stacked_dim(l)));

  std::vector<int> rrhs(ck.begin(), ck.end());
  for (int l : interferers) rrhs.insert(rrhs.end(), topo.clusters[l].begin(), topo.clusters[l].end());
  std::sort(rrhs.begin(), rrhs.end());
  rrhs.erase(std::unique(rrhs.begin(), rrhs.end()), rrhs.end());

  std::vector<CVec> est_part(topo.num_rrh()), err_part(topo.num_rrh()), full(topo.num_rrh());
  CVec x(dk), e(dk);
  for (long t = 0; t < draws; ++t) {
    for (int i : rrhs) {
      if (topo.in_cluster(i, k)) {
        est_part[i] = conditional_estimate(fb.at(i, k), est.omega(i, k), fb.perfect_pa, m, rng);
        err_part[i] = sample_cn(rng, m, est.delta(i, k));
        full[i] = est_part[i] + err_part[i];
      } else {
        full[i] = sample_cn(rng, m, topo.alpha(i, k));
      }
    }
    for (std::size_t p = 0; p < ck.size(); ++p) {
      x.segment(p * m, m) = est_part[ck[p]];
      e.segment(p * m, m) = err_part[ck[p]];
    }
    out.A_kk.noalias() += x * x.adjoint();
    out.E_kk.noalias() += e * e.adjoint();
    for (std::size_t j = 0; j < interferers.size(); ++j) {
      const auto& cl = topo.clusters[interferers[j]];
      CVec y(m * cl.size());
      for (std::size_t p = 0; p < cl.size(); ++p) y.segment(p * m, m) = full[cl[p]];
      out.A_lk[j].noalias() += y * y.adjoint();
    }
  }
  const double inv = 1.0 / static_cast<double>(draws);
  out.A_kk *= inv;
  out.E_kk *= inv;
  for (auto& a : out.A_lk) a *= inv;
  return out;
}

std::vector<OracleResult> channel_oracles(const OracleOptions& opt) {
  std::vector<OracleResult> res;
  const OracleNetwork net = oracle_network(3);
  const Topology& topo = net.topo;
  const int m = topo.antennas;
  const long n = opt.channel_draws;
  const double noise = noise_power_mw(20e6);

  // Per intra-cluster pair: sums of h_hat h_hat^H, e e^H and h_hat e^H for both paths.
  struct Acc {
    CMat hh, ee, he;
    double p_sum = 0.0, p_sq = 0.0;  // ||h_hat||^2 moments for the two-sample test
  };
  auto run = [&](bool pilots, std::uint64_t stream) {
    std::vector<Acc> acc(static_cast<std::size_t>(topo.num_rrh()) * topo.num_ue());
    for (auto& a : acc) {
      a.hh = CMat::Zero(m, m);
      a.ee = CMat::Zero(m, m);
      a.he = CMat::Zero(m, m);
    }
    Rng rng(split_seed(opt.seed, stream));
    for (long t = 0; t < n; ++t) {
      const ChannelDraw d = pilots ? estimate_from_pilots(topo, net.pilots, 200.0, noise, rng)
                                   : sample_channels(topo, net.est, rng);
      for (int k = 0; k < topo.num_ue(); ++k)
        for (int i : topo.clusters[k]) {
          Acc& a = acc[d.index(i, k)];
          const CVec& h = d.estimate(i, k);
          const CVec& e = d.error(i, k);
          a.hh.noalias() += h * h.adjoint();
          a.ee.noalias() += e * e.adjoint();
          a.he.noalias() += h * e.adjoint();
          const double p = h.squaredNorm();
          a.p_sum += p;
          a.p_sq += p * p;
        }
    }
    return acc;
  };
  const auto direct = run(false, 11);
  const auto simulated = run(true, 12);

  double cov_direct = 0.0, err_direct = 0.0, cross_direct = 0.0;
  double cov_pilot = 0.0, err_pilot = 0.0, cross_pilot = 0.0, two_sample = 0.0;
  for (int k = 0; k < topo.num_ue(); ++k)
    for (int i : topo.clusters[k]) {
      const std::size_t idx = static_cast<std::size_t>(i) * topo.num_ue() + k;
      const CMat w = net.est.omega(i, k) * CMat::Identity(m, m);
      const CMat dl = net.est.delta(i, k) * CMat::Identity(m, m);
      const double norm_cross = std::sqrt(w.norm() * dl.norm());
      for (int path = 0; path < 2; ++path) {
        const Acc& a = (path == 0 ? direct : simulated)[idx];
        const double c = frobenius_relative(a.hh / n, w);
        const double ce = frobenius_relative(a.ee / n, dl);
        const double x = (a.he / n).norm() / norm_cross;
        (path == 0 ? cov_direct : cov_pilot) = std::max(path == 0 ? cov_direct : cov_pilot, c);
        (path == 0 ? err_direct : err_pilot) = std::max(path == 0 ? err_direct : err_pilot, ce);
        (path == 0 ? cross_direct : cross_pilot) = std::max(path == 0 ? cross_direct : cross_pilot, x);
      }
      // Two-sample test on the mean estimate power, in standard errors.
      const Acc& a = direct[idx];
      const Acc& b = simulated[idx];
      const double ma = a.p_sum / n, mb = b.p_sum / n;
      const double va = a.p_sq / n - ma * ma, vb = b.p_sq / n - mb * mb;
      two_sample = std::max(two_sample, std::abs(ma - mb) / std::sqrt((va + vb) / n));
    }
  res.push_back(bound_check("channels", "sampled estimate covariance vs omega I (worst pair)", cov_direct, 0.02));
  res.push_back(bound_check("channels", "sampled error covariance vs delta I (worst pair)", err_direct, 0.02));
  res.push_back(bound_check("channels", "sampled estimate/error cross-covariance (worst pair)", cross_direct, 0.02));
  res.push_back(bound_check("channels", "pilot-simulated estimate variance vs omega (worst pair)", cov_pilot, 0.02));
  res.push_back(bound_check("channels", "pilot-simulated error variance vs delta (worst pair)", err_pilot, 0.02));
  res.push_back(bound_check("channels", "pilot-simulated estimate/error cross-covariance (worst pair)", cross_pilot, 0.02));
  res.push_back(bound_check("channels", "two-sample estimate power, standard errors (worst pair)", two_sample, 3.0));
  return res;
}

std::vector<OracleResult> feedback_oracles(const OracleOptions& opt) {
  std::vector<OracleResult> res;
  const int m = 2;
  const long n = opt.stat_draws;
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);

  {
    Rng rng(split_seed(opt.seed, 21));
    double sum = 0.0;
    for (long t = 0; t < n; ++t) sum += std::norm(sample_unit(rng, m).dot(sample_unit(rng, m)));
    res.push_back(relative_check("feedback", "isotropy E|h^H c|^2 vs 1/M", sum / n, 1.0 / m, 0.01));
  }
  {
    Rng rng(split_seed(opt.seed, 22));
    const RvqMoments mom = rvq_moments_mc(m, 2, n, rng);
    res.push_back(relative_check("feedback", "E{a} at M=2 B=2 vs 1/(1+2^B)", mom.mean_error, 0.2, 0.01));
  }
  for (int b : {1, 2, 3}) {
    Rng rng(split_seed(opt.seed, 30 + b));
    const long ks_n = std::min<long>(n, 100'000);
    std::vector<double> errs(ks_n);
    double gain = 0.0;
    for (long t = 0; t < n; ++t) {
      const double phi = angle(rng);
      double d = phi - quantize_pa(phi, b);
      d = std::remainder(d, kTwoPi);
      if (t < ks_n) errs[t] = d;
      gain += std::cos(d);
    }
    const double half = kPi / static_cast<double>(1 << b);
    const double ks = ks_uniform_distance(errs, -half, half);
    std::ostringstream name;
    name << "phase error KS distance B_PA=" << b;
    res.push_back(bound_check("feedback", name.str(), ks, 1.628 / std::sqrt(static_cast<double>(ks_n))));
    std::ostringstream gname;
    gname << "phase gain E{cos err} B_PA=" << b << " vs closed form";
    res.push_back(relative_check("feedback", gname.str(), gain / n, pa_phase_gain(b), 0.01));
  }
  {
    Rng rng(split_seed(opt.seed, 29));
    double gain = 0.0;
    for (long t = 0; t < n; ++t) {
      const double phi = angle(rng);
      gain += std::cos(phi - quantize_pa(phi, 0));
    }
    OracleResult r = bound_check("feedback", "phase gain B_PA=0 (absolute)", std::abs(gain / n), 0.01);
    r.expected = pa_phase_gain(0);
    res.push_back(r);
  }
  return res;
}

std::vector<OracleResult> statistics_oracles(const OracleOptions& opt) {
  std::vector<OracleResult> res;
  const int m = 2;
  const long n = opt.stat_draws;

  for (int b : opt.b_cdi) {
    Rng rng(split_seed(opt.seed, 100 + b));
    const RvqMoments mom = rvq_moments_mc(m, b, n, rng);
    std::ostringstream rn, on;
    rn << "rho vs explicit codebooks B_CDI=" << b;
    on << "Omega vs explicit codebooks B_CDI=" << b;
    res.push_back(relative_check("statistics", rn.str(), mom.mean_error, cdi_error_mean(m, b), 0.01));
    res.push_back(relative_check("statistics", on.str(), mom.mean_amplitude, cdi_amplitude_mean(m, b), 0.01));
  }
  {
    Rng rng(split_seed(opt.seed, 120));
    double sum = 0.0;
    for (long t = 0; t < n; ++t) sum += sample_cn(rng, m, 1.0).norm();
    const CVec q = CVec::Unit(m, 0);
    res.push_back(relative_check("statistics", "mean estimate norm vs varsigma (omega=1)", sum / n,
                                 lemma_constants(1.0, 1, 1, q, m).varsigma, 0.01));
  }

  for (int l : opt.cluster_sizes) {
    const OracleNetwork net = oracle_network(l);
    for (int b_cdi : opt.b_cdi)
      for (int b_pa : opt.b_pa) {
        FeedbackConfig fc;
        fc.b_cdi = b_cdi;
        fc.b_pa = b_pa;
        fc.codebook_seed = opt.seed;
        Rng draw_rng(split_seed(opt.seed, 1000 + 100 * l + 10 * b_cdi + b_pa));
        const ChannelDraw draw = sample_channels(net.topo, net.est, draw_rng);
        const CodebookSet books = generate_codebooks(fc, net.topo, draw_rng);
        const FeedbackState fb = apply_feedback(fc, net.topo, draw, books);
        const StatSet closed = build_statset(BeliefModel::FullRobust, fb, net.est, net.topo);

        Rng rng(split_seed(opt.seed, 2000 + 100 * l + 10 * b_cdi + b_pa));
        const ConditionalMoments mc = conditional_moments_mc(net.topo, net.est, fb, 0, {1, 2}, n, rng);
        res.push_back(bound_check("statistics", label("A_kk", b_cdi, b_pa, l),
                                  frobenius_relative(mc.A_kk, closed.A_kk[0]), 0.02));
        res.push_back(bound_check("statistics", label("E_kk", b_cdi, b_pa, l),
                                  frobenius_relative(mc.E_kk, closed.E_kk[0]), 0.02));
        res.push_back(bound_check("statistics", label("A_lk overlapping", b_cdi, b_pa, l),
                                  frobenius_relative(mc.A_lk[0], closed.A_lk(1, 0)), 0.02));
        res.push_back(bound_check("statistics", label("A_lk disjoint", b_cdi, b_pa, l),
                                  frobenius_relative(mc.A_lk[1], closed.A_lk(2, 0)), 0.02));
      }
  }
  return res;
}

std::vector<OracleResult> run_all_oracles(const OracleOptions& opt) {
  std::vector<OracleResult> all = channel_oracles(opt);
  for (auto* f : {&feedback_oracles, &statistics_oracles}) {
    auto part = (*f)(opt);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

}  // namespace udcran
