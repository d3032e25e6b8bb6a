// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

// Acceptance suite: prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. Pass a list of criterion numbers to run a subset.

#include "udcran/harness.hpp"
#include "udcran/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

using namespace udcran;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string format(const char* fmt, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

std::vector<int> all_ues(int k) {
  std::vector<int> v(k);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

bool violates(const TrialRecord& r, double r_min) {
  return std::any_of(r.rates.begin(), r.rates.end(), [&](double x) { return x < r_min - 1e-3; });
}

// Closed-form statistics against the conditional sampler (2%) and rho/Omega
// against explicit codebooks (1%), 10^6 draws, under two minutes.
Outcome criterion1() {
  const auto t0 = Clock::now();
  OracleOptions opt;
  opt.stat_draws = 1'000'000;
  const auto results = statistics_oracles(opt);
  const double t = seconds_since(t0);
  int failed = 0;
  double worst = 0.0;
  for (const auto& r : results) {
    failed += r.pass ? 0 : 1;
    worst = std::max(worst, r.error / r.tolerance);
    if (!r.pass) std::printf("    failed: %s error %.3e tolerance %.1e\n", r.name.c_str(), r.error, r.tolerance);
  }
  return {failed == 0 && t < 120.0,
          format("%zu checks, %d failed, worst error/tolerance %.2f, %.1f s (limit 120 s)", results.size(), failed,
                 worst, t)};
}

// Tangent bounds over 10^4 random instances.
Outcome criterion2() {
  Rng rng(20260101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int taylor_bad = 0, smooth_bad = 0;
  double worst_taylor = -1e300, worst_smooth = -1e300;
  for (int t = 0; t < 10'000; ++t) {
    const int n = 1 + t % 6;
    CMat g(n, 1 + t % n);
    for (int c = 0; c < g.cols(); ++c) g.col(c) = sample_cn(rng, n, 1.0);
    const CMat A = g * g.adjoint();
    const CVec w = sample_cn(rng, n, 1.0), w_prev = sample_cn(rng, n, 1.0);
    const double gap = taylor_signal_bound(A, w, w_prev) - std::real(w.dot(A * w));
    worst_taylor = std::max(worst_taylor, gap);
    taylor_bad += gap > 1e-10 ? 1 : 0;

    const double theta = std::pow(10.0, -8.0 + 6.0 * u(rng));
    const double x0 = std::pow(10.0, -12.0 + 14.0 * u(rng)), x = std::pow(10.0, -12.0 + 14.0 * u(rng));
    const double over = smooth_indicator(x, theta) -
                        (smooth_indicator(x0, theta) + smooth_indicator_slope(x0, theta) * (x - x0));
    worst_smooth = std::max(worst_smooth, over);
    smooth_bad += over > 1e-10 ? 1 : 0;
  }
  return {taylor_bad == 0 && smooth_bad == 0,
          format("quadratic bound violations %d (max excess %.2e), indicator tangent violations %d (max excess %.2e)",
                 taylor_bad, worst_taylor, smooth_bad, worst_smooth)};
}

// Solver correctness on 100 small-scenario trials.
Outcome criterion3() {
  ExperimentConfig cfg;  // small scenario, R_min = 3
  const int trials = 100;
  int converged = 0, fast = 0, infeasible = 0, kkt_bad = 0, non_monotone = 0, slow_wall = 0, errors = 0;
  double worst_violation = 0.0, worst_kkt = 0.0, worst_wall = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto t0 = Clock::now();
    try {
      const Scenario sc = build_scenario(cfg, trial_seed(cfg.base_seed, t));
      const StatSet s = build_statset(BeliefModel::FullRobust, sc.feedback, sc.est, sc.topo);
      const AdmissionResult adm = successive_deletion(all_ues(s.num_ue), s, sc.topo, sc.rate,
                                                      admission_options(cfg, trial_seed(cfg.base_seed, t)));
      const SolveReport rep = fota_solve(adm.admitted, s, sc.rate, adm.warm_start, cfg.solver);
      const double wall = seconds_since(t0);
      worst_wall = std::max(worst_wall, wall);
      slow_wall += wall >= 1.0 ? 1 : 0;
      if (!rep.converged && !adm.admitted.empty()) continue;
      ++converged;
      fast += rep.iterations <= 15 ? 1 : 0;
      const double v = constraint_residuals(rep.beams, s, sc.rate, adm.admitted, cfg.solver.theta)
                           .max_relative_violation(sc.rate);
      worst_violation = std::max(worst_violation, v);
      infeasible += v > 1e-6 ? 1 : 0;
      const double kkt = verify_kkt(rep, s, sc.rate, cfg.solver).max();
      worst_kkt = std::max(worst_kkt, kkt);
      kkt_bad += kkt < 1e-5 ? 0 : 1;
      for (std::size_t j = 1; j < rep.trace.size(); ++j)
        if (rep.trace[j] > rep.trace[j - 1] * (1.0 + 1e-8)) {
          ++non_monotone;
          break;
        }
    } catch (const std::exception& e) {
      ++errors;
      std::printf("    trial %d: %s\n", t, e.what());
    }
  }
  const bool pass = errors == 0 && infeasible == 0 && kkt_bad == 0 && non_monotone == 0 && fast >= 95 &&
                    slow_wall == 0;
  return {pass, format("converged %d/%d, <=15 iterations %d/%d (need 95), max violation %.1e, max KKT %.1e, "
                       "non-monotone %d, errors %d, slowest trial %.3f s",
                       converged, trials, fast, trials, worst_violation, worst_kkt, non_monotone, errors, worst_wall)};
}

// Records of the robustness comparison, shared by criteria 4 and 5.
const std::vector<TrialRecord>& robustness_records() {
  static const std::vector<TrialRecord> recs = [] {
    ExperimentConfig cfg;
    cfg.r_min = 2.0;
    cfg.trials = 50;
    cfg.beliefs = {BeliefModel::FullRobust, BeliefModel::QuantOnly, BeliefModel::EstimOnly, BeliefModel::CdiOnly,
                   BeliefModel::NonRobust};
    return run_sweep(cfg);
  }();
  return recs;
}

Outcome criterion4() {
  const double r_min = 2.0;
  const int trials = 50;
  std::map<BeliefModel, int> violated, not_ok;
  int robust_bad_ues = 0, robust_ues = 0;
  for (const auto& r : robustness_records()) {
    if (!r.ok) ++not_ok[r.belief];
    if (r.belief == BeliefModel::FullRobust) {
      if (!r.ok) continue;
      robust_ues += static_cast<int>(r.rates.size());
      for (double x : r.rates) robust_bad_ues += x < r_min - 1e-3 ? 1 : 0;
      continue;
    }
    // Records that did not converge count as non-violating.
    if (r.ok && violates(r, r_min)) ++violated[r.belief];
  }
  bool pass = robust_bad_ues == 0 && not_ok[BeliefModel::FullRobust] == 0;
  std::string detail = format("full_robust: %d/%d admitted UEs below target, %d not ok;", robust_bad_ues, robust_ues,
                              not_ok[BeliefModel::FullRobust]);
  for (BeliefModel b : baseline_beliefs()) {
    const double frac = static_cast<double>(violated[b]) / trials;
    pass = pass && frac >= 0.6;
    detail += format(" %s %d/%d (%d not ok)", to_string(b).c_str(), violated[b], trials, not_ok[b]);
  }
  return {pass, detail + " (need >= 60%)"};
}

Outcome criterion5() {
  const auto beliefs = std::vector<BeliefModel>{BeliefModel::FullRobust, BeliefModel::QuantOnly,
                                                BeliefModel::EstimOnly, BeliefModel::CdiOnly, BeliefModel::NonRobust};
  std::map<int, std::map<BeliefModel, const TrialRecord*>> by_trial;
  for (const auto& r : robustness_records()) by_trial[r.trial][r.belief] = &r;
  std::map<BeliefModel, double> sum;
  int n = 0;
  for (const auto& [t, m] : by_trial) {
    bool all = m.size() == beliefs.size();
    for (const auto& [b, r] : m) all = all && r->ok && r->admitted.size() == 8;
    if (!all) continue;
    ++n;
    for (const auto& [b, r] : m) sum[b] += r->power_mw;
  }
  auto mean = [&](BeliefModel b) { return n > 0 ? sum[b] / n : 0.0; };
  const double fr = mean(BeliefModel::FullRobust), eo = mean(BeliefModel::EstimOnly),
               qo = mean(BeliefModel::QuantOnly), nr = mean(BeliefModel::NonRobust);
  const bool pass = n > 0 && fr >= eo && fr >= qo && qo >= nr;
  return {pass, format("%d trials with all 8 admitted by every belief; mean design power mW: full_robust %.3f, "
                       "estim_only %.3f, quant_only %.3f, non_robust %.3f, cdi_only %.3f",
                       n, fr, eo, qo, nr, mean(BeliefModel::CdiOnly))};
}

Outcome criterion6() {
  ExperimentConfig cfg;
  cfg.trials = 50;
  cfg.methods = {AdmissionMethod::Successive, AdmissionMethod::Bisection, AdmissionMethod::Exhaustive};
  cfg.sweep_axis = SweepAxis::RMin;
  cfg.sweep_values = {1, 2, 3, 4, 5, 6, 7, 8};
  const auto recs = run_sweep(cfg);

  std::map<std::pair<double, int>, std::map<AdmissionMethod, int>> count;
  std::map<double, std::map<AdmissionMethod, double>> mean;
  int max_bis_after_sort = 0, errors = 0;
  for (const auto& r : recs) {
    const int n = static_cast<int>(r.admitted.size());
    count[{r.sweep_value, r.trial}][r.method] = n;
    mean[r.sweep_value][r.method] += static_cast<double>(n) / cfg.trials;
    if (r.method == AdmissionMethod::Bisection) max_bis_after_sort = std::max(max_bis_after_sort, r.p8_solves - 1);
    if (!r.ok && !r.error.empty() && r.error != "outer iteration limit reached") ++errors;
  }
  int order_bad = 0;
  for (auto& [key, m] : count)
    if (!(m[AdmissionMethod::Exhaustive] >= m[AdmissionMethod::Successive] &&
          m[AdmissionMethod::Successive] >= m[AdmissionMethod::Bisection]))
      ++order_bad;
  bool monotone = true;
  double worst_gap = 0.0;
  std::string means;
  double prev_suc = 1e9, prev_bis = 1e9, prev_exh = 1e9;
  for (auto& [v, m] : mean) {
    const double s = m[AdmissionMethod::Successive], b = m[AdmissionMethod::Bisection],
                 e = m[AdmissionMethod::Exhaustive];
    monotone = monotone && s <= prev_suc + 1e-12 && b <= prev_bis + 1e-12 && e <= prev_exh + 1e-12;
    prev_suc = s;
    prev_bis = b;
    prev_exh = e;
    if (v >= 6.0) worst_gap = std::max(worst_gap, e - s);
    means += format(" R%.0f:%.2f/%.2f/%.2f", v, s, b, e);
  }
  const bool pass = monotone && order_bad == 0 && worst_gap <= 1.0 && max_bis_after_sort <= 5 && errors == 0;
  return {pass, format("order violations %d, means non-increasing %s, worst Exh-Suc gap at R>=6 %.2f, max bisection "
                       "solves after sort %d, errors %d; mean Suc/Bis/Exh%s",
                       order_bad, monotone ? "yes" : "no", worst_gap, max_bis_after_sort, errors, means.c_str())};
}

Outcome criterion7() {
  const auto t0 = Clock::now();
  ExperimentConfig base = ExperimentConfig::large_scenario();
  base.trials = 50;
  auto mean_admitted = [](const ExperimentConfig& c) {
    double s = 0.0;
    const auto recs = run_sweep(c);
    for (const auto& r : recs) s += static_cast<double>(r.admitted.size());
    return s / static_cast<double>(recs.size());
  };
  ExperimentConfig c6 = base, c8 = base, pa1 = base, perfect = base;
  c6.feedback.b_cdi = 6;
  c8.feedback.b_cdi = 8;
  pa1.feedback.b_pa = 1;
  perfect.feedback.perfect_pa = true;
  const double m6 = mean_admitted(c6), m8 = mean_admitted(c8), m1 = mean_admitted(pa1), mref = mean_admitted(perfect);
  const double t = seconds_since(t0);
  const bool pass = std::abs(m6 - m8) <= 1.0 && m1 >= 0.9 * mref && t <= 1800.0;
  return {pass, format("I=42 K=24, 50 trials: B_CDI=6 %.2f vs B_CDI=8 %.2f; B_PA=1 %.2f vs exact phase %.2f (%.1f%%); "
                       "%.0f s",
                       m6, m8, m1, mref, mref > 0 ? 100.0 * m1 / mref : 0.0, t)};
}

Outcome criterion8() {
  ExperimentConfig cfg;
  int improper = 0, overfull = 0, too_long = 0, max_tau = 0;
  for (int t = 0; t < 100; ++t) {
    NetworkConfig net = cfg.network;
    net.seed = trial_seed(cfg.base_seed, t);
    const Topology topo = generate_topology(net);
    const ConflictGraph g = build_conflict_graph(topo);
    const PilotAssignment pa = dsatur_color(g, 2, net.antennas);
    for (const auto& [i, j] : g.edges) improper += pa.color[i] == pa.color[j] ? 1 : 0;
    for (const auto& set : pa.reuse_sets) overfull += set.size() > 2 ? 1 : 0;
    too_long += pa.tau >= cfg.frame_slots ? 1 : 0;
    max_tau = std::max(max_tau, pa.tau);
  }
  return {improper == 0 && overfull == 0 && too_long == 0,
          format("100 topologies: improper edges %d, colour classes over n_max=2 %d, tau >= T %d, max tau %d",
                 improper, overfull, too_long, max_tau)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"closed-form statistics vs Monte Carlo oracle", criterion1},
      {"Taylor and smoothed-indicator tangent bounds", criterion2},
      {"solver correctness on the small scenario", criterion3},
      {"robustness of full-robust designs vs baselines", criterion4},
      {"design power ordering across beliefs", criterion5},
      {"admission trends and method ordering", criterion6},
      {"feedback-bit saturation (large scenario)", criterion7},
      {"pilot allocation validity", criterion8},
  };
  std::set<int> selected;
  for (int a = 1; a < argc; ++a) selected.insert(std::atoi(argv[a]));

  int failed = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const int id = static_cast<int>(c) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[c].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %d %s: %s [%s] (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", criteria[c].first,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
