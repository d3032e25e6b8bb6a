// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#pragma once

#include "udcran/common.hpp"
#include "udcran/dual.hpp"
#include "udcran/ratemodel.hpp"
#include "udcran/statistics.hpp"

#include <string>
#include <vector>

namespace udcran {

struct SolverOptions {
  double theta = 1e-5;      // smoothing constant of the link indicator, mW
  double delta_tol = 1e-5;  // relative objective change that ends the outer loop
  double tol_feas = 1e-6;
  double tol_cs = 1e-5;
  int max_outer = 50;
  DualMethod method = DualMethod::ProjectedNewton;
  /// Power given to a UE whose beam collapsed to zero, as a fraction of P_max.
  double reseed_fraction = 1e-3;
  /// Weight of total power in the slack objective, relative to 1 / P_max.
  double slack_power_weight = 1e-3;
  /// Slack below which a UE counts as satisfied (noise-normalised units).
  double slack_tol = 1e-6;
};

struct KktResiduals {
  double primal = 0.0;          // largest relative constraint violation
  double dual = 0.0;            // largest negative multiplier
  double stationarity = 0.0;    // relative inner optimality residual
  double complementarity = 0.0; // largest |multiplier * constraint| / objective
  double max() const;
};

struct SolveReport {
  std::vector<int> ues;
  BeamSet beams;
  double objective = 0.0;          // total power, mW
  double initial_objective = 0.0;  // power of the starting point
  std::vector<double> trace;       // objective after each outer iteration
  int iterations = 0;
  int dual_iterations = 0;
  bool converged = false;
  KktResiduals kkt;
  ScaState sca;    // linearisation point of the last subproblem
  DualState dual;  // its multipliers
  LinkSupport support;  // links allowed to carry power in the last subproblem
  int pruned_links = 0;
  /// Iteration counts after which links were pruned; the objective is
  /// non-increasing between consecutive restarts.
  std::vector<int> restarts;
  RVec rrh_power;
};

/// Tangent lower bound 2 Re(w_prev^H A w) - w_prev^H A w_prev of w^H A w.
double taylor_signal_bound(const CMat& A, const CVec& w, const CVec& w_prev);

/// Closed-form Lagrangian minimiser w_k = upsilon_k J_k^{-1} A_kk w_k(t) for the served UEs.
BeamSet inner_beamformer(const DualState& dual, const ScaState& sca, const StatSet& stats, const RateConfig& cfg,
                         const std::vector<int>& ues);

struct DualSolution {
  BeamSet beams;
  DualState dual;
  int iterations = 0;
  double primal = 0.0;  // total power, mW
  double dual_value = 0.0;  // dual function in mW
};

/// Maximises the dual of the power-minimisation subproblem at sca.
DualSolution solve_dual(const ScaState& sca, const StatSet& stats, const RateConfig& cfg, const std::vector<int>& ues,
                        const SolverOptions& opt, const DualState* warm = nullptr);

/// Outer successive convex approximation loop for power minimisation.
SolveReport fota_solve(const std::vector<int>& ues, const StatSet& stats, const RateConfig& cfg, const BeamSet& init,
                       const SolverOptions& opt = {});

/// Audits the last subproblem of a report.
KktResiduals verify_kkt(const SolveReport& report, const StatSet& stats, const RateConfig& cfg,
                        const SolverOptions& opt = {});

/// Rounds of link pruning fota_solve and the slack problem may run.
inline constexpr int kMaxPruneRounds = 4;

/// Enforces the exact fronthaul count. At every RRH whose count of links above
/// the power floor exceeds its limit, drops the links below theta (or, if there
/// are none, the weakest link) from the support and zeroes them in beams. A UE
/// never loses its last link. Returns the number of links dropped.
int prune_weak_links(BeamSet& beams, LinkSupport& support, const std::vector<int>& ues, const StatSet& stats,
                     const RateConfig& cfg, double theta);

/// Puts a UE with a zero beam back on its dominant believed direction at
/// fraction * P_max, using only RRHs whose fronthaul can take another link.
/// Returns the number of UEs reseeded.
int reseed_zero_beams(BeamSet& beams, const std::vector<int>& ues, const StatSet& stats, const RateConfig& cfg,
                      double fraction, const LinkSupport* support = nullptr);

}  // namespace udcran
