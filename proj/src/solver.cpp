// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace udcran {
namespace {

constexpr double kPruneChange = 1e-1;

double power_reference(const RateConfig& cfg) { return *std::max_element(cfg.p_max.begin(), cfg.p_max.end()); }

DualOptions dual_options(const SolverOptions& opt) {
  DualOptions d;
  d.method = opt.method;
  if (opt.method == DualMethod::Ellipsoid) {
    d.tol_feas = 0.1 * opt.tol_feas;
    d.tol_gap = 0.1 * opt.tol_cs;
  }
  return d;
}

BeamSet restrict_to(const BeamSet& b, const std::vector<int>& ues) {
  BeamSet out = b;
  std::vector<char> keep(b.w.size(), 0);
  for (int k : ues) keep[k] = 1;
  for (std::size_t k = 0; k < out.w.size(); ++k)
    if (!keep[k]) out.w[k].setZero();
  return out;
}

}  // namespace

double KktResiduals::max() const { return std::max({primal, dual, stationarity, complementarity}); }

double taylor_signal_bound(const CMat& A, const CVec& w, const CVec& w_prev) {
  const CVec Aw = A * w_prev;
  return 2.0 * std::real(Aw.dot(w)) - std::real(w_prev.dot(Aw));
}

namespace {

// J_k and its right-hand side upsilon_k A_kk w_k(t) in mW units.
std::pair<CMat, CVec> inner_system(const DualState& dual, const ScaState& sca, const StatSet& stats,
                                   const RateConfig& cfg, const std::vector<int>& ues, int k) {
  const int m = stats.antennas;
  const int n = stats.dim(k);
  CMat J = CMat::Identity(n, n);
  const auto& cl = stats.clusters[k];
  for (int pos = 0; pos < static_cast<int>(cl.size()); ++pos) {
    const int i = cl[pos];
    J.diagonal().segment(pos * m, m).array() += dual.lambda(i) + dual.mu(i) * sca.tau_lin[k](pos);
  }
  J += dual.upsilon(k) * cfg.eta(k) * stats.E_kk[k];
  for (int l : ues)
    if (l != k) J += dual.upsilon(l) * cfg.eta(l) * stats.A_lk(k, l);
  CVec rhs = dual.upsilon(k) * (stats.A_kk[k] * sca.w_prev.w[k]);
  return {std::move(J), std::move(rhs)};
}

}  // namespace

BeamSet inner_beamformer(const DualState& dual, const ScaState& sca, const StatSet& stats, const RateConfig& cfg,
                         const std::vector<int>& ues) {
  BeamSet out = BeamSet::zeros(stats);
  for (int k : ues) {
    auto [J, rhs] = inner_system(dual, sca, stats, cfg, ues, k);
    Eigen::LLT<CMat> llt(J);
    if (llt.info() != Eigen::Success) throw NumericalError("inner system is not positive definite");
    out.w[k] = llt.solve(rhs);
  }
  return out;
}

DualSolution solve_dual(const ScaState& sca, const StatSet& stats, const RateConfig& cfg, const std::vector<int>& ues,
                        const SolverOptions& opt, const DualState* warm) {
  const double omega = 1.0 / power_reference(cfg);
  LinearizedProblem prob(stats, cfg, sca, ues, SubproblemKind::PowerMin, omega);
  RVec x0 = RVec::Zero(prob.size());
  if (warm != nullptr && warm->lambda.size() == stats.num_rrh && warm->upsilon.size() == stats.num_ue)
    x0 = prob.from_dual_state(*warm);
  const DualResult dr = maximize_dual(prob, x0, dual_options(opt));
  DualSolution s;
  s.beams = prob.to_beams(dr.eval, BeamSet::zeros(stats));
  s.dual = prob.to_dual_state(dr.x);
  s.iterations = dr.iterations;
  s.primal = s.beams.total_power();
  s.dual_value = dr.eval.dual / omega;
  return s;
}

int reseed_zero_beams(BeamSet& beams, const std::vector<int>& ues, const StatSet& stats, const RateConfig& cfg,
                      double fraction, const LinkSupport* support) {
  const int m = stats.antennas;
  std::vector<double> load(stats.num_rrh, 0.0);
  for (int k : ues)
    for (int pos = 0; pos < static_cast<int>(stats.clusters[k].size()); ++pos)
      if (beams.link_power(k, pos) > kLinkPowerFloor) load[stats.clusters[k][pos]] += cfg.r_min[k];

  int reseeded = 0;
  for (int k : ues) {
    if (beams.w[k].squaredNorm() > 0.0) continue;
    const auto& cl = stats.clusters[k];
    std::vector<int> allowed;
    for (int pos = 0; pos < static_cast<int>(cl.size()); ++pos) {
      if (support != nullptr && !(*support)[k][pos]) continue;
      if (load[cl[pos]] + cfg.r_min[k] <= cfg.c_max[cl[pos]] * (1.0 + 1e-12)) allowed.push_back(pos);
    }
    if (allowed.empty()) continue;
    const int n = static_cast<int>(allowed.size()) * m;
    CMat sub(n, n);
    for (int a = 0; a < static_cast<int>(allowed.size()); ++a)
      for (int b = 0; b < static_cast<int>(allowed.size()); ++b)
        sub.block(a * m, b * m, m, m) = stats.A_kk[k].block(allowed[a] * m, allowed[b] * m, m, m);
    Eigen::SelfAdjointEigenSolver<CMat> es(sub);
    CVec dir = es.eigenvectors().col(n - 1);
    if (!(es.eigenvalues()(n - 1) > 0.0)) continue;
    double pmax = cfg.p_max[cl[allowed[0]]];
    for (int pos : allowed) pmax = std::min(pmax, cfg.p_max[cl[pos]]);
    dir *= std::sqrt(fraction * pmax);
    for (int a = 0; a < static_cast<int>(allowed.size()); ++a) {
      beams.slice(k, allowed[a]) = dir.segment(a * m, m);
      load[cl[allowed[a]]] += cfg.r_min[k];
    }
    ++reseeded;
  }
  return reseeded;
}

int prune_weak_links(BeamSet& beams, LinkSupport& support, const std::vector<int>& ues, const StatSet& stats,
                     const RateConfig& cfg, double theta) {
  struct Link {
    int k, pos;
    double power;
  };
  std::vector<std::vector<Link>> at_rrh(stats.num_rrh);
  std::vector<double> load(stats.num_rrh, 0.0);
  std::vector<int> live(stats.num_ue, 0);
  for (int k : ues)
    for (int pos = 0; pos < static_cast<int>(stats.clusters[k].size()); ++pos) {
      const double p = beams.link_power(k, pos);
      if (!support[k][pos] || !(p > kLinkPowerFloor)) continue;
      const int i = stats.clusters[k][pos];
      at_rrh[i].push_back({k, pos, p});
      load[i] += cfg.r_min[k];
      ++live[k];
    }
  int dropped = 0;
  auto drop = [&](const Link& l) {
    if (live[l.k] <= 1) return false;
    support[l.k][l.pos] = 0;
    beams.slice(l.k, l.pos).setZero();
    --live[l.k];
    ++dropped;
    return true;
  };
  for (int i = 0; i < stats.num_rrh; ++i) {
    if (load[i] <= cfg.c_max[i] * (1.0 + 1e-9)) continue;
    auto& links = at_rrh[i];
    std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) { return a.power < b.power; });
    bool any = false;
    for (const Link& l : links)
      if (l.power < theta) any = drop(l) || any;
    if (!any)
      for (const Link& l : links)
        if (drop(l)) break;
  }
  return dropped;
}

SolveReport fota_solve(const std::vector<int>& ues_in, const StatSet& stats, const RateConfig& cfg,
                       const BeamSet& init, const SolverOptions& opt) {
  std::vector<int> ues = ues_in;
  std::sort(ues.begin(), ues.end());
  SolveReport rep;
  rep.ues = ues;
  BeamSet w = restrict_to(init, ues);
  rep.initial_objective = w.total_power();
  const double omega = 1.0 / power_reference(cfg);
  const DualOptions dopt = dual_options(opt);

  RVec x;
  double prev = rep.initial_objective;
  LinkSupport support = full_support(stats);
  int prune_rounds = 0;
  for (int t = 0; t < opt.max_outer; ++t) {
    ScaState sca = make_sca_state(w, stats, cfg, opt.theta, t);
    LinearizedProblem prob(stats, cfg, sca, ues, SubproblemKind::PowerMin, omega, &support);
    if (x.size() != prob.size()) x.resize(0);
    DualResult dr;
    try {
      dr = maximize_dual(prob, x, dopt);
    } catch (const DualConvergenceError& e) {
      std::ostringstream os;
      os << e.what() << " (outer iteration " << t << ")";
      throw DualConvergenceError(os.str(), e.best());
    }
    x = dr.x;
    w = prob.to_beams(dr.eval, w);
    rep.dual_iterations += dr.iterations;
    const double obj = w.total_power();
    rep.trace.push_back(obj);
    rep.iterations = t + 1;
    rep.sca = std::move(sca);
    rep.dual = prob.to_dual_state(x);
    rep.support = support;
    const double change = std::abs(prev - obj) / std::max(prev, 1e-300);
    // Links that the smoothed fronthaul count tolerates but the exact count does not are
    // pruned once the objective has settled, early enough for the descent to absorb the cost.
    if (change <= std::max(opt.delta_tol, kPruneChange) && prune_rounds < kMaxPruneRounds) {
      const int dropped = prune_weak_links(w, support, ues, stats, cfg, opt.theta);
      if (dropped > 0) {
        ++prune_rounds;
        rep.pruned_links += dropped;
        rep.restarts.push_back(rep.iterations);
        prev = obj;
        continue;
      }
    }
    if (change <= opt.delta_tol) {
      rep.converged = true;
      break;
    }
    prev = obj;
  }
  rep.beams = std::move(w);
  rep.objective = rep.beams.total_power();
  rep.rrh_power = rep.beams.rrh_power(stats.clusters, stats.num_rrh);
  if (rep.iterations > 0) rep.kkt = verify_kkt(rep, stats, cfg, opt);
  return rep;
}

KktResiduals verify_kkt(const SolveReport& report, const StatSet& stats, const RateConfig& cfg,
                        const SolverOptions& opt) {
  (void)opt;
  KktResiduals r;
  const double omega = 1.0 / power_reference(cfg);
  const LinkSupport support = report.support.empty() ? full_support(stats) : report.support;
  LinearizedProblem prob(stats, cfg, report.sca, report.ues, SubproblemKind::PowerMin, omega, &support);
  const std::vector<CVec> w = prob.gather(report.beams);
  RVec mag;
  const RVec c = prob.constraint_values(w, &mag);
  const RVec x = prob.from_dual_state(report.dual);

  for (int j = 0; j < c.size(); ++j) r.primal = std::max(r.primal, c(j) / mag(j));
  for (const RVec* v : {&report.dual.lambda, &report.dual.mu, &report.dual.upsilon})
    if (v->size() > 0) r.dual = std::max(r.dual, -v->minCoeff());

  double obj = 0.0;
  for (const auto& v : w) obj += v.squaredNorm();
  obj *= omega;
  const double lagrangian_scale = std::max(obj + x.cwiseAbs().dot(mag), 1e-300);
  for (int j = 0; j < c.size(); ++j)
    r.complementarity = std::max(r.complementarity, std::abs(x(j) * c(j)) / lagrangian_scale);

  const int m = stats.antennas;
  for (std::size_t u = 0; u < report.ues.size(); ++u) {
    const int k = report.ues[u];
    auto [J, rhs] = inner_system(report.dual, report.sca, stats, cfg, report.ues, k);
    std::vector<int> rows;
    for (int pos : prob.positions(static_cast<int>(u)))
      for (int a = 0; a < m; ++a) rows.push_back(pos * m + a);
    const int n = static_cast<int>(rows.size());
    CMat Js(n, n);
    CVec rs(n);
    for (int a = 0; a < n; ++a) {
      rs(a) = rhs(rows[a]);
      for (int b = 0; b < n; ++b) Js(a, b) = J(rows[a], rows[b]);
    }
    const double scale = std::max({rs.norm(), w[u].norm(), 1e-300});
    r.stationarity = std::max(r.stationarity, (Js * w[u] - rs).norm() / scale);
  }
  return r;
}

}  // namespace udcran
