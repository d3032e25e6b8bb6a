// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#pragma once

#include "udcran/common.hpp"
#include "udcran/ratemodel.hpp"
#include "udcran/statistics.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace udcran {

/// Linearisation point of one outer iteration.
struct ScaState {
  int t = 0;
  BeamSet w_prev;
  std::vector<RVec> beta;     // per UE, per cluster position: f_theta'(||w_ik(t)||^2)
  std::vector<RVec> tau_lin;  // beta * R_k
  RVec c_tilde;               // per RRH
  RVec zeta;                  // per UE: w_k(t)^H A_kk w_k(t), mW
};

ScaState make_sca_state(const BeamSet& w_prev, const StatSet& stats, const RateConfig& cfg, double theta, int t);

/// Per UE, per cluster position: whether the link may carry power.
using LinkSupport = std::vector<std::vector<char>>;

LinkSupport full_support(const StatSet& stats);

enum class SubproblemKind {
  PowerMin,      // minimise total power subject to SINR targets
  SlackMin,      // minimise the sum of SINR slacks (plus a small power term)
};

/// Multipliers of the convexified subproblem, in the Lagrangian's natural
/// units (power, fronthaul and SINR constraints written in mW).
struct DualState {
  RVec lambda;   // per RRH
  RVec mu;       // per RRH
  RVec upsilon;  // per UE
  /// Multipliers of the normalised constraints, layout of LinearizedProblem.
  RVec scaled;
  /// Ellipsoid centre and shape over the normalised multipliers (ellipsoid method only).
  RVec center;
  RMat shape;
};

/// The convex subproblem at a linearisation point, normalised so the noise
/// power is one and every constraint is relative to its limit:
///   power_i:     (sum_k ||w_ik||^2 - P_i) / P_i <= 0
///   fronthaul_i: (sum_k tau_ik ||w_ik||^2 - C~_i) / C_i <= 0
///   sinr_k:      w_k^H E w_k + sum_l w_l^H A_lk w_l + 1 - (2 Re(b_k^H w_k) - zeta_k) / eta_k <= s_k
/// with objective weight * sum ||w||^2 (+ sum eta_k s_k for SlackMin).
/// Links outside the support are held at zero; beam vectors passed to and
/// returned by the problem only hold the supported slices.
class LinearizedProblem {
 public:
  LinearizedProblem(const StatSet& stats, const RateConfig& cfg, const ScaState& sca, std::vector<int> ues,
                    SubproblemKind kind, double power_weight, const LinkSupport* support = nullptr);

  int size() const { return n_; }
  int num_power() const { return static_cast<int>(pow_rrh_.size()); }
  int num_fronthaul() const { return static_cast<int>(fh_rrh_.size()); }
  int num_sinr() const { return static_cast<int>(ues_.size()); }
  const std::vector<int>& ues() const { return ues_; }
  const std::vector<int>& power_rrhs() const { return pow_rrh_; }
  const std::vector<int>& fronthaul_rrhs() const { return fh_rrh_; }
  SubproblemKind kind() const { return kind_; }
  double power_weight() const { return omega_p_; }
  /// Upper bound of each multiplier (infinite except SINR multipliers of SlackMin).
  const RVec& upper() const { return upper_; }

  struct Eval {
    std::vector<CVec> w;  // per served UE (position in ues())
    RVec c;               // normalised constraint values (without slack)
    double dual = 0.0;    // Lagrangian at the minimiser
    double primal = 0.0;  // objective of w, slacks set to the smallest feasible value
    /// Largest constraint value relative to the magnitude of its terms.
    double max_violation = 0.0;
    RVec scale;               // per constraint: magnitude of its terms
    double gap_scale = 0.0;   // |primal| + sum |x_j| scale_j
  };

  /// Minimises the Lagrangian over w for multipliers x. With hessian != nullptr
  /// also fills the (negative semidefinite) Hessian of the dual function.
  Eval evaluate(const RVec& x, RMat* hessian = nullptr) const;

  /// Normalised constraint values at explicit beams (per served UE position).
  /// magnitude receives the size of the terms each value is a difference of.
  RVec constraint_values(const std::vector<CVec>& w, RVec* magnitude = nullptr) const;

  /// Normalised slack eta_k * max(0, c_k) for the served UE at position u; shortfalls
  /// below 1e-9 of the constraint's term magnitude are treated as zero.
  double slack(const Eval& ev, int u) const;

  /// Converts normalised multipliers to mW-unit multipliers.
  DualState to_dual_state(const RVec& x) const;
  /// Inverse of to_dual_state (ignores RRHs/UEs outside the problem).
  RVec from_dual_state(const DualState& d) const;

  BeamSet to_beams(const Eval& ev, const BeamSet& shape) const;
  /// Supported slices of the served UEs' beams, in problem layout.
  std::vector<CVec> gather(const BeamSet& beams) const;
  /// Cluster positions kept for the served UE at position u.
  const std::vector<int>& positions(int u) const { return data_[u].positions; }

  double noise() const { return noise_; }

 private:
  struct UeData {
    int k = 0;
    int dim = 0;
    std::vector<int> positions;  // supported cluster positions
    double eta = 0.0;
    double zeta = 0.0;  // normalised
    CVec b;             // A_kk w_k(t) / noise
    CMat E;             // E_kk / noise
    std::vector<CMat> cross;  // A_{k, l} / noise for every served l (empty at self)
    std::vector<int> pow_idx;  // per cluster position: multiplier index or -1
    std::vector<int> fh_idx;
    std::vector<double> pow_scale;  // 1 / P_i
    std::vector<double> fh_scale;   // tau_ik / C_i
  };

  std::vector<int> ues_;
  std::vector<int> pow_rrh_;
  std::vector<int> fh_rrh_;
  std::vector<double> pow_limit_;
  std::vector<double> fh_limit_;
  std::vector<double> fh_ctilde_;
  std::vector<UeData> data_;
  RVec upper_;
  SubproblemKind kind_;
  double omega_p_ = 1.0;
  double noise_ = 1.0;
  int antennas_ = 2;
  int n_ = 0;
  int lambda_size_ = 0;
  int upsilon_size_ = 0;
  double cond_limit_ = 1e16;
};

/// Raised when the dual iteration stops before the tolerances are met. Carries the best iterate.
class DualConvergenceError : public std::runtime_error {
 public:
  DualConvergenceError(const std::string& what, RVec best) : std::runtime_error(what), best_(std::move(best)) {}
  const RVec& best() const { return best_; }

 private:
  RVec best_;
};

enum class DualMethod { ProjectedNewton, Ellipsoid };

struct DualOptions {
  DualMethod method = DualMethod::ProjectedNewton;
  double tol_feas = 1e-10;  // normalised constraint violation
  double tol_gap = 1e-10;   // (primal - dual) / gap_scale
  /// Looser tolerances accepted when the iteration can make no further progress.
  double stall_feas = 1e-8;
  double stall_gap = 1e-8;
  int max_newton_iter = 300;
  double ellipsoid_radius = 1e3;
  long max_ellipsoid_steps = -1;  // default 50 n^2
  int supergradient_steps = 10000;
};

struct DualResult {
  RVec x;
  LinearizedProblem::Eval eval;
  int iterations = 0;
  bool fallback_used = false;
};

DualResult maximize_dual(const LinearizedProblem& prob, const RVec& warm, const DualOptions& opt);

}  // namespace udcran
