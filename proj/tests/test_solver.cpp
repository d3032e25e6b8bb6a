// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/solver.hpp"

#include "doctest.h"
#include "test_util.hpp"

#include <cmath>
#include <numeric>

using namespace udcran;
using udcran::testing::blank_statset;
using udcran::testing::interference_at;

namespace {

DualState zero_dual(const StatSet& s) {
  DualState d;
  d.lambda = RVec::Zero(s.num_rrh);
  d.mu = RVec::Zero(s.num_rrh);
  d.upsilon = RVec::Zero(s.num_ue);
  return d;
}

// J_k rebuilt from its definition.
CMat reference_j(const DualState& d, const ScaState& sca, const StatSet& s, const RateConfig& cfg,
                 const std::vector<int>& ues, int k) {
  const int m = s.antennas;
  CMat J = CMat::Identity(s.dim(k), s.dim(k));
  for (int pos = 0; pos < static_cast<int>(s.clusters[k].size()); ++pos) {
    const int i = s.clusters[k][pos];
    for (int a = 0; a < m; ++a) J(pos * m + a, pos * m + a) += d.lambda(i) + d.mu(i) * sca.tau_lin[k](pos);
  }
  J += d.upsilon(k) * cfg.eta(k) * s.E_kk[k];
  for (int l : ues)
    if (l != k) J += d.upsilon(l) * cfg.eta(l) * s.A_lk(k, l);
  return J;
}

// One UE on two RRHs with a strong full-rank channel; every limit is slack.
struct SingleUe {
  StatSet stats = blank_statset(2, 2, {{0, 1}}, 1e-10);
  RateConfig cfg = RateConfig::uniform(2, 1, 200, 8, 2.0, 3.0, 100.0);
  BeamSet init;

  SingleUe() {
    Rng rng(17);
    stats.A_kk[0] = 1e-9 * testing::random_psd(rng, 4, 4);
    stats.E_kk[0] = 1e-12 * CMat::Identity(4, 4);
    init = BeamSet::zeros(stats);
    init.w[0] = CVec::Constant(4, cd(1.0, 0.0));
  }
};

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("Taylor bound: tangency, zero matrix and global validity") {
    Rng rng(1);
    for (int t = 0; t < 10'000; ++t) {
      const int n = 1 + t % 6;
      const CMat A = testing::random_psd(rng, n, 1 + t % n);
      const CVec w = sample_cn(rng, n, 1.0), w_prev = sample_cn(rng, n, 1.0);
      const double quad = std::real(w.dot(A * w));
      CHECK(taylor_signal_bound(A, w, w_prev) <= quad + 1e-10 * std::max(1.0, quad));
      if (t < 100) {
        const double at = std::real(w_prev.dot(A * w_prev));
        CHECK(taylor_signal_bound(A, w_prev, w_prev) == doctest::Approx(at).epsilon(1e-12));
        CHECK(taylor_signal_bound(CMat::Zero(n, n), w, w_prev) == 0.0);
      }
    }
  }

  TEST_CASE("smoothed indicator lies below its tangents") {
    Rng rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double theta : {1e-7, 1e-5, 1e-2})
      for (int t = 0; t < 10'000; ++t) {
        const double x0 = std::pow(10.0, -12.0 + 14.0 * u(rng)), x = std::pow(10.0, -12.0 + 14.0 * u(rng));
        const double tangent = smooth_indicator(x0, theta) + smooth_indicator_slope(x0, theta) * (x - x0);
        CHECK(smooth_indicator(x, theta) <= tangent + 1e-10);
      }
  }

  TEST_CASE("linearisation point keeps the previous iterate feasible") {
    const Scenario sc = testing::small_scenario(1, 2.0);
    const StatSet s = build_statset(BeliefModel::FullRobust, sc.feedback, sc.est, sc.topo);
    Rng rng(3);
    BeamSet w = BeamSet::zeros(s);
    for (auto& v : w.w) v = sample_cn(rng, static_cast<int>(v.size()), 1e-3);
    const double theta = 1e-5;
    const ScaState sca = make_sca_state(w, s, sc.rate, theta, 0);
    for (int i = 0; i < s.num_rrh; ++i) CHECK(sca.c_tilde(i) <= sc.rate.c_max[i] + 1e-12);
    const ResidualReport r = constraint_residuals(w, s, sc.rate, {}, theta);
    for (int i = 0; i < s.num_rrh; ++i) {
      double lin = 0.0;
      for (int k = 0; k < s.num_ue; ++k) {
        const int pos = sc.topo.position_in_cluster(i, k);
        if (pos >= 0) lin += sca.tau_lin[k](pos) * w.link_power(k, pos);
      }
      CHECK(lin - sca.c_tilde(i) == doctest::Approx(-r.fronthaul_smooth_margin(i)).epsilon(1e-9));
    }
    for (int k = 0; k < s.num_ue; ++k) {
      CHECK(sca.zeta(k) >= 0.0);
      for (int pos = 0; pos < sca.beta[k].size(); ++pos) CHECK(sca.beta[k](pos) > 0.0);
    }
  }

  TEST_CASE("inner beamformer with zero multipliers is zero") {
    const Scenario sc = testing::small_scenario(0);
    const StatSet s = build_statset(BeliefModel::FullRobust, sc.feedback, sc.est, sc.topo);
    BeamSet w = BeamSet::zeros(s);
    for (auto& v : w.w) v.setOnes();
    const ScaState sca = make_sca_state(w, s, sc.rate, 1e-5, 0);
    std::vector<int> ues(s.num_ue);
    std::iota(ues.begin(), ues.end(), 0);
    for (const auto& v : inner_beamformer(zero_dual(s), sca, s, sc.rate, ues).w) CHECK(v.norm() == 0.0);
  }

  TEST_CASE("inner beamformer scalar case") {
    StatSet s = blank_statset(1, 1, {{0}}, 1.0);
    const double a = 2.5, e = 0.3, w_prev = 0.8, ups = 0.7;
    s.A_kk[0](0, 0) = a;
    s.E_kk[0](0, 0) = e;
    const RateConfig cfg = RateConfig::uniform(1, 1, 200, 0, 1.0, 3.0, 100.0);
    BeamSet prev = BeamSet::zeros(s);
    prev.w[0](0) = w_prev;
    DualState d = zero_dual(s);
    d.upsilon(0) = ups;
    const BeamSet w = inner_beamformer(d, make_sca_state(prev, s, cfg, 1e-5, 0), s, cfg, {0});
    CHECK(w.w[0](0).real() == doctest::Approx(ups * a * w_prev / (1.0 + ups * cfg.eta(0) * e)).epsilon(1e-14));
  }

  TEST_CASE("inner beamformer is stationary and J dominates the identity") {
    Rng rng(5);
    std::exponential_distribution<double> ex(1.0);
    for (int trial = 0; trial < 5; ++trial) {
      const Scenario sc = testing::small_scenario(trial);
      const StatSet s = build_statset(BeliefModel::FullRobust, sc.feedback, sc.est, sc.topo);
      BeamSet w = BeamSet::zeros(s);
      for (auto& v : w.w) v = sample_cn(rng, static_cast<int>(v.size()), 1.0);
      const ScaState sca = make_sca_state(w, s, sc.rate, 1e-5, 0);
      DualState d = zero_dual(s);
      for (int i = 0; i < s.num_rrh; ++i) {
        d.lambda(i) = ex(rng);
        d.mu(i) = ex(rng);
      }
      for (int k = 0; k < s.num_ue; ++k) d.upsilon(k) = ex(rng) / s.noise_mw;
      std::vector<int> ues(s.num_ue);
      std::iota(ues.begin(), ues.end(), 0);
      const BeamSet out = inner_beamformer(d, sca, s, sc.rate, ues);
      for (int k : ues) {
        const CMat J = reference_j(d, sca, s, sc.rate, ues, k);
        CHECK(testing::min_eigenvalue(J) >= 1.0 - 1e-10);
        const CVec rhs = d.upsilon(k) * (s.A_kk[k] * w.w[k]);
        CHECK((2.0 * J * out.w[k] - 2.0 * rhs).norm() <= 1e-8 * std::max(rhs.norm(), 1e-300));
      }
    }
  }

  TEST_CASE("single UE: interior optimum meets the target with equality") {
    SingleUe p;
    const SolveReport r = fota_solve({0}, p.stats, p.cfg, p.init);
    REQUIRE(r.converged);
    CHECK(sinr(r.beams, p.stats, 0) == doctest::Approx(p.cfg.eta(0)).epsilon(1e-6));
    CHECK(r.dual.lambda.cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(r.dual.mu.cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(r.dual.upsilon(0) > 0.0);
    CHECK(r.kkt.max() < 1e-5);
  }

  TEST_CASE("dual subproblem has a zero duality gap") {
    for (int trial = 0; trial < 5; ++trial) {
      const Scenario sc = testing::small_scenario(trial, 1.0);
      const StatSet s = build_statset(BeliefModel::FullRobust, sc.feedback, sc.est, sc.topo);
      AdmissionOptions ao;
      std::vector<int> all(s.num_ue);
      std::iota(all.begin(), all.end(), 0);
      const AdmissionResult adm = successive_deletion(all, s, sc.topo, sc.rate, ao);
      if (adm.admitted.empty()) continue;
      const ScaState sca = make_sca_state(adm.warm_start, s, sc.rate, 1e-5, 0);
      const DualSolution d = solve_dual(sca, s, sc.rate, adm.admitted, SolverOptions{});
      CHECK(d.primal - d.dual_value <= 1e-5 * d.primal);
    }
  }

  TEST_CASE("power minimisation on the small scenario") {
    for (int trial = 0; trial < 8; ++trial) {
      const Scenario sc = testing::small_scenario(trial, 2.0);
      const StatSet s = build_statset(BeliefModel::FullRobust, sc.feedback, sc.est, sc.topo);
      std::vector<int> all(s.num_ue);
      std::iota(all.begin(), all.end(), 0);
      const AdmissionResult adm = successive_deletion(all, s, sc.topo, sc.rate, AdmissionOptions{});
      const SolveReport r = fota_solve(adm.admitted, s, sc.rate, adm.warm_start);
      INFO("trial " << trial);
      REQUIRE(r.converged);
      for (std::size_t t = 1; t < r.trace.size(); ++t) CHECK(r.trace[t] <= r.trace[t - 1] * (1.0 + 1e-8));
      for (int k : adm.admitted) CHECK(sinr(r.beams, s, k) >= sc.rate.eta(k) * (1.0 - 1e-6));
      const ResidualReport res = constraint_residuals(r.beams, s, sc.rate, adm.admitted, 1e-5);
      CHECK(res.max_relative_violation(sc.rate) <= 1e-6);
      CHECK(r.kkt.max() < 1e-5);
      CHECK(verify_kkt(r, s, sc.rate).max() < 1e-5);
      CHECK(r.objective <= r.initial_objective * (1.0 + 1e-8));
    }
  }

  TEST_CASE("ellipsoid and Newton dual methods agree") {
    const Scenario sc = testing::small_scenario(4, 2.0);
    const StatSet s = build_statset(BeliefModel::FullRobust, sc.feedback, sc.est, sc.topo);
    std::vector<int> all(s.num_ue);
    std::iota(all.begin(), all.end(), 0);
    const AdmissionResult adm = successive_deletion(all, s, sc.topo, sc.rate, AdmissionOptions{});
    REQUIRE_FALSE(adm.admitted.empty());
    const ScaState sca = make_sca_state(adm.warm_start, s, sc.rate, 1e-5, 0);
    SolverOptions ell;
    ell.method = DualMethod::Ellipsoid;
    const DualSolution a = solve_dual(sca, s, sc.rate, adm.admitted, SolverOptions{});
    const DualSolution b = solve_dual(sca, s, sc.rate, adm.admitted, ell);
    CHECK(b.primal == doctest::Approx(a.primal).epsilon(1e-4));
  }

  TEST_CASE("hand-built scalar KKT point") {
    StatSet s = blank_statset(1, 1, {{0}}, 1e-10);
    const double a = 4e-9;
    s.A_kk[0](0, 0) = a;
    const RateConfig cfg = RateConfig::uniform(1, 1, 200, 0, 1.0, 3.0, 100.0);
    const double w_star = std::sqrt(cfg.eta(0) * s.noise_mw / a);
    SolveReport r;
    r.ues = {0};
    r.beams = BeamSet::zeros(s);
    r.beams.w[0](0) = w_star;
    r.sca = make_sca_state(r.beams, s, cfg, 1e-5, 0);
    r.dual = zero_dual(s);
    r.dual.upsilon(0) = 1.0 / a;
    const KktResiduals k = verify_kkt(r, s, cfg);
    CHECK(k.primal < 1e-10);
    CHECK(k.dual < 1e-10);
    CHECK(k.stationarity < 1e-10);
    CHECK(k.complementarity < 1e-10);
  }

  TEST_CASE("zero beams with unreachable targets are flagged") {
    SingleUe p;
    SolveReport r;
    r.ues = {0};
    r.beams = BeamSet::zeros(p.stats);
    r.sca = make_sca_state(r.beams, p.stats, p.cfg, 1e-5, 0);
    r.dual = zero_dual(p.stats);
    CHECK(verify_kkt(r, p.stats, p.cfg).primal > 0.0);
  }

  TEST_CASE("weak links are pruned down to the fronthaul limit") {
    StatSet s = blank_statset(2, 1, {{0}, {0}, {0}, {0}}, 1e-10);
    const RateConfig cfg = RateConfig::uniform(1, 4, 200, 8, 2.0, 3.0, 100.0);
    BeamSet b = BeamSet::zeros(s);
    for (int k = 0; k < 4; ++k) b.w[k].setConstant(cd(1.0 + k, 0.0));
    b.w[0].setConstant(cd(1e-3, 0.0));
    LinkSupport support = full_support(s);
    CHECK(prune_weak_links(b, support, {0, 1, 2, 3}, s, cfg, 1e-5) == 0);  // last link of a UE is kept
    StatSet two = blank_statset(2, 2, {{0, 1}, {0}, {0}, {0}}, 1e-10);
    const RateConfig cfg2 = RateConfig::uniform(2, 4, 200, 8, 2.0, 3.0, 100.0);
    BeamSet c = BeamSet::zeros(two);
    c.w[0] << cd(1e-3, 0), cd(0, 0), cd(1, 0), cd(0, 0);
    for (int k = 1; k < 4; ++k) c.w[k].setConstant(cd(1.0, 0.0));
    LinkSupport sup2 = full_support(two);
    CHECK(prune_weak_links(c, sup2, {0, 1, 2, 3}, two, cfg2, 1e-5) == 1);
    CHECK(sup2[0][0] == 0);
    CHECK(c.w[0].head(2).norm() == 0.0);
  }
}
