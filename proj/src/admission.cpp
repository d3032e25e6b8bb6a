// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/admission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace udcran {
namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::uint64_t subset_hash(const std::vector<int>& s) {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (int k : s) h = split_seed(h, static_cast<std::uint64_t>(k));
  return h;
}

AdmissionResult accept(AdmissionMethod method, const SlackSolution& s, int count) {
  AdmissionResult r;
  r.method = method;
  r.admitted = s.candidates;
  r.slacks = s.slacks;
  r.warm_start = s.beams;
  r.p8_solve_count = count;
  return r;
}

AdmissionResult empty_result(AdmissionMethod method, const StatSet& stats, int count) {
  AdmissionResult r;
  r.method = method;
  r.slacks = RVec::Zero(stats.num_ue);
  r.warm_start = BeamSet::zeros(stats);
  r.p8_solve_count = count;
  return r;
}

}  // namespace

std::string to_string(InitScheme s) { return s == InitScheme::Cm ? "cm" : "rand"; }

std::string to_string(AdmissionMethod m) {
  switch (m) {
    case AdmissionMethod::Successive: return "successive";
    case AdmissionMethod::Bisection: return "bisection";
    case AdmissionMethod::Exhaustive: return "exhaustive";
  }
  return "unknown";
}

InitScheme init_scheme_from_string(const std::string& s) {
  if (s == "cm") return InitScheme::Cm;
  if (s == "rand") return InitScheme::Rand;
  throw ConfigError("unknown init scheme: " + s);
}

AdmissionMethod admission_method_from_string(const std::string& s) {
  for (auto m : {AdmissionMethod::Successive, AdmissionMethod::Bisection, AdmissionMethod::Exhaustive})
    if (to_string(m) == s) return m;
  throw ConfigError("unknown admission method: " + s);
}

BeamSet initial_beams(const std::vector<int>& candidates, const StatSet& stats, const Topology& topo,
                      const RateConfig& cfg, InitScheme scheme, std::uint64_t seed) {
  BeamSet w = BeamSet::zeros(stats);
  const int m = stats.antennas;
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < stats.num_rrh; ++i) {
    std::vector<int> ues;
    for (int k : candidates)
      if (topo.in_cluster(i, k)) ues.push_back(k);
    std::stable_sort(ues.begin(), ues.end(), [&](int a, int b) { return topo.alpha(i, a) > topo.alpha(i, b); });
    std::vector<int> chosen;
    double load = 0.0;
    for (int k : ues) {
      const int pos = topo.position_in_cluster(i, k);
      if (stats.seed_dir[k].segment(pos * m, m).squaredNorm() == 0.0) continue;
      if (load + cfg.r_min[k] > cfg.c_max[i] * (1.0 + 1e-12)) continue;
      load += cfg.r_min[k];
      chosen.push_back(k);
    }
    if (chosen.empty()) continue;
    const double share = cfg.p_max[i] / static_cast<double>(chosen.size());
    for (int k : chosen) {
      const int pos = topo.position_in_cluster(i, k);
      if (scheme == InitScheme::Cm) {
        w.slice(k, pos) = std::sqrt(share) * stats.seed_dir[k].segment(pos * m, m);
      } else {
        const double p = share * (1.0 - unit(rng));  // (0, share]
        w.slice(k, pos) = std::sqrt(p) * sample_unit(rng, m);
      }
    }
  }
  return w;
}

SlackSolution solve_p8(const std::vector<int>& cand_in, const StatSet& stats, const Topology& topo,
                       const RateConfig& cfg, const AdmissionOptions& opt) {
  SlackSolution sol;
  sol.candidates = sorted_unique(cand_in);
  sol.slacks = RVec::Zero(stats.num_ue);
  sol.beams = BeamSet::zeros(stats);
  if (sol.candidates.empty()) {
    sol.all_zero = true;
    return sol;
  }
  const auto& so = opt.solver;
  const double pref = *std::max_element(cfg.p_max.begin(), cfg.p_max.end());
  const double omega = so.slack_power_weight / pref;
  DualOptions dopt;
  dopt.method = so.method;
  if (so.method == DualMethod::Ellipsoid) {
    dopt.tol_feas = 0.1 * so.tol_feas;
    dopt.tol_gap = 0.1 * so.tol_cs;
  }

  BeamSet w = initial_beams(sol.candidates, stats, topo, cfg, opt.init, split_seed(opt.init_seed, subset_hash(sol.candidates)));
  LinkSupport support = full_support(stats);
  int prune_rounds = 0;
  std::optional<SlackSolution> unpruned;  // zero-slack point found before pruning
  RVec x;
  double prev = std::numeric_limits<double>::infinity();
  for (int t = 0; t < so.max_outer; ++t) {
    reseed_zero_beams(w, sol.candidates, stats, cfg, so.reseed_fraction, &support);
    const ScaState sca = make_sca_state(w, stats, cfg, so.theta, t);
    LinearizedProblem prob(stats, cfg, sca, sol.candidates, SubproblemKind::SlackMin, omega, &support);
    if (x.size() != prob.size()) x.resize(0);
    const DualResult dr = maximize_dual(prob, x, dopt);
    x = dr.x;
    w = prob.to_beams(dr.eval, w);
    double worst = 0.0;
    for (int u = 0; u < prob.num_sinr(); ++u) {
      const double s = prob.slack(dr.eval, u);
      sol.slacks(sol.candidates[u]) = s;
      worst = std::max(worst, s);
    }
    const double obj = dr.eval.primal;
    sol.trace.push_back(obj);
    sol.iterations = t + 1;
    if (worst <= so.slack_tol) {
      // The warm start must also meet the exact fronthaul count.
      if (prune_rounds < kMaxPruneRounds) {
        BeamSet pruned = w;
        if (prune_weak_links(pruned, support, sol.candidates, stats, cfg, so.theta) > 0) {
          if (!unpruned) {
            unpruned = sol;
            unpruned->beams = w;
            unpruned->all_zero = true;
          }
          ++prune_rounds;
          w = std::move(pruned);
          prev = std::numeric_limits<double>::infinity();
          continue;
        }
      }
      sol.all_zero = true;
      break;
    }
    if (std::abs(prev - obj) <= so.delta_tol * std::max(std::abs(prev), 1e-300)) break;
    prev = obj;
  }
  if (!sol.all_zero && unpruned) {
    const int iters = sol.iterations;
    const auto trace = sol.trace;
    sol = std::move(*unpruned);
    sol.iterations = iters;
    sol.trace = trace;
    return sol;
  }
  sol.beams = std::move(w);
  return sol;
}

AdmissionResult successive_deletion(const std::vector<int>& candidates, const StatSet& stats, const Topology& topo,
                                    const RateConfig& cfg, const AdmissionOptions& opt) {
  std::vector<int> cur = sorted_unique(candidates);
  int count = 0;
  while (!cur.empty()) {
    const SlackSolution s = solve_p8(cur, stats, topo, cfg, opt);
    ++count;
    if (s.all_zero) return accept(AdmissionMethod::Successive, s, count);
    int drop = cur.front();
    for (int k : cur)
      if (s.slacks(k) > s.slacks(drop)) drop = k;
    cur.erase(std::find(cur.begin(), cur.end(), drop));
  }
  return empty_result(AdmissionMethod::Successive, stats, count);
}

AdmissionResult bisection_selection(const std::vector<int>& candidates, const StatSet& stats, const Topology& topo,
                                    const RateConfig& cfg, const AdmissionOptions& opt) {
  const std::vector<int> all = sorted_unique(candidates);
  if (all.empty()) return empty_result(AdmissionMethod::Bisection, stats, 0);
  const SlackSolution first = solve_p8(all, stats, topo, cfg, opt);
  int count = 1;
  if (first.all_zero) return accept(AdmissionMethod::Bisection, first, count);

  std::vector<int> order = all;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return first.slacks(a) > first.slacks(b); });
  const int n = static_cast<int>(order.size());
  int lo = 0, hi = n;  // tail(lo) is infeasible, tail(hi) feasible
  SlackSolution best;
  bool have = false;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    const std::vector<int> tail(order.begin() + mid, order.end());
    SlackSolution s = solve_p8(tail, stats, topo, cfg, opt);
    ++count;
    if (s.all_zero) {
      hi = mid;
      best = std::move(s);
      have = true;
    } else {
      lo = mid;
    }
  }
  if (!have) return empty_result(AdmissionMethod::Bisection, stats, count);
  return accept(AdmissionMethod::Bisection, best, count);
}

AdmissionResult exhaustive_selection(const std::vector<int>& candidates, const StatSet& stats, const Topology& topo,
                                     const RateConfig& cfg, const AdmissionOptions& opt) {
  std::vector<int> pool = sorted_unique(candidates);
  if (static_cast<int>(pool.size()) > opt.exhaustive_limit)
    throw ConfigError("exhaustive search refuses more than " + std::to_string(opt.exhaustive_limit) + " candidates");
  int count = 0;
  if (opt.exhaustive_prune_singletons && pool.size() > 1) {
    std::vector<int> kept;
    for (int k : pool) {
      ++count;
      if (solve_p8({k}, stats, topo, cfg, opt).all_zero) kept.push_back(k);
    }
    pool = std::move(kept);
  }
  const int n = static_cast<int>(pool.size());
  for (int size = n; size >= 1; --size) {
    // Lexicographic enumeration of size-combinations of pool.
    std::vector<int> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<int> subset(size);
      for (int a = 0; a < size; ++a) subset[a] = pool[idx[a]];
      const SlackSolution s = solve_p8(subset, stats, topo, cfg, opt);
      ++count;
      if (s.all_zero) return accept(AdmissionMethod::Exhaustive, s, count);
      int a = size - 1;
      while (a >= 0 && idx[a] == n - size + a) --a;
      if (a < 0) break;
      ++idx[a];
      for (int b = a + 1; b < size; ++b) idx[b] = idx[b - 1] + 1;
    }
  }
  return empty_result(AdmissionMethod::Exhaustive, stats, count);
}

AdmissionResult select_users(AdmissionMethod method, const std::vector<int>& candidates, const StatSet& stats,
                             const Topology& topo, const RateConfig& cfg, const AdmissionOptions& opt) {
  switch (method) {
    case AdmissionMethod::Successive: return successive_deletion(candidates, stats, topo, cfg, opt);
    case AdmissionMethod::Bisection: return bisection_selection(candidates, stats, topo, cfg, opt);
    case AdmissionMethod::Exhaustive: return exhaustive_selection(candidates, stats, topo, cfg, opt);
  }
  throw ConfigError("unknown admission method");
}

}  // namespace udcran
