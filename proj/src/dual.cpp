// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace udcran {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlackFloor = 1e-9;

RVec clamp_box(const RVec& x, const RVec& upper) {
  RVec y = x;
  for (int j = 0; j < y.size(); ++j) y(j) = std::clamp(y(j), 0.0, upper(j));
  return y;
}

bool meets(const LinearizedProblem::Eval& ev, double tol_feas, double tol_gap) {
  const double gap = ev.primal - ev.dual;
  return ev.max_violation <= tol_feas && gap <= tol_gap * std::max(ev.gap_scale, 1e-300);
}

// Lexicographic merit used to track the best iterate of a non-monotone method.
bool better(const LinearizedProblem::Eval& a, const LinearizedProblem::Eval& b) {
  const double sa = a.max_violation + std::max(0.0, a.primal - a.dual) / std::max(a.gap_scale, 1e-300);
  const double sb = b.max_violation + std::max(0.0, b.primal - b.dual) / std::max(b.gap_scale, 1e-300);
  return sa < sb;
}

std::vector<int> slice_rows(const std::vector<int>& positions, int m) {
  std::vector<int> rows;
  rows.reserve(positions.size() * m);
  for (int pos : positions)
    for (int a = 0; a < m; ++a) rows.push_back(pos * m + a);
  return rows;
}

CVec gather_rows(const CVec& v, const std::vector<int>& rows) {
  CVec out(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) out(r) = v(rows[r]);
  return out;
}

CMat gather_block(const CMat& a, const std::vector<int>& rows) {
  const int n = static_cast<int>(rows.size());
  CMat out(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out(r, c) = a(rows[r], rows[c]);
  return out;
}

}  // namespace

LinkSupport full_support(const StatSet& stats) {
  LinkSupport s(stats.num_ue);
  for (int k = 0; k < stats.num_ue; ++k) s[k].assign(stats.clusters[k].size(), 1);
  return s;
}

ScaState make_sca_state(const BeamSet& w_prev, const StatSet& stats, const RateConfig& cfg, double theta, int t) {
  ScaState s;
  s.t = t;
  s.w_prev = w_prev;
  s.beta.resize(stats.num_ue);
  s.tau_lin.resize(stats.num_ue);
  s.zeta = RVec::Zero(stats.num_ue);
  s.c_tilde = Eigen::Map<const RVec>(cfg.c_max.data(), stats.num_rrh);
  for (int k = 0; k < stats.num_ue; ++k) {
    const int n = static_cast<int>(stats.clusters[k].size());
    s.beta[k].resize(n);
    s.tau_lin[k].resize(n);
    for (int pos = 0; pos < n; ++pos) {
      const double x = w_prev.link_power(k, pos);
      const double b = smooth_indicator_slope(x, theta);
      s.beta[k](pos) = b;
      s.tau_lin[k](pos) = b * cfg.r_min[k];
      s.c_tilde(stats.clusters[k][pos]) -= (smooth_indicator(x, theta) - b * x) * cfg.r_min[k];
    }
    s.zeta(k) = std::max(0.0, std::real(w_prev.w[k].dot(stats.A_kk[k] * w_prev.w[k])));
  }
  return s;
}

LinearizedProblem::LinearizedProblem(const StatSet& stats, const RateConfig& cfg, const ScaState& sca,
                                     std::vector<int> ues, SubproblemKind kind, double power_weight,
                                     const LinkSupport* support)
    : ues_(std::move(ues)), kind_(kind), omega_p_(power_weight), noise_(stats.noise_mw), antennas_(stats.antennas) {
  std::sort(ues_.begin(), ues_.end());
  ues_.erase(std::unique(ues_.begin(), ues_.end()), ues_.end());
  if (!(omega_p_ > 0.0)) throw ConfigError("power weight must be positive");
  const int num_i = stats.num_rrh;
  lambda_size_ = num_i;
  upsilon_size_ = stats.num_ue;

  auto supported = [&](int k, int pos) { return support == nullptr || (*support)[k][pos] != 0; };
  std::vector<int> links(num_i, 0);
  std::vector<double> load(num_i, 0.0);
  for (int k : ues_)
    for (int pos = 0; pos < static_cast<int>(stats.clusters[k].size()); ++pos)
      if (supported(k, pos)) {
        const int i = stats.clusters[k][pos];
        ++links[i];
        load[i] += cfg.r_min[k];
      }
  std::vector<int> pow_index(num_i, -1), fh_index(num_i, -1);
  for (int i = 0; i < num_i; ++i)
    if (links[i] > 0) {
      pow_index[i] = static_cast<int>(pow_rrh_.size());
      pow_rrh_.push_back(i);
      pow_limit_.push_back(cfg.p_max[i]);
    }
  for (int i = 0; i < num_i; ++i)
    if (links[i] > 0 && load[i] > cfg.c_max[i]) {
      fh_index[i] = num_power() + static_cast<int>(fh_rrh_.size());
      fh_rrh_.push_back(i);
      fh_limit_.push_back(cfg.c_max[i]);
      fh_ctilde_.push_back(sca.c_tilde(i));
    }
  n_ = num_power() + num_fronthaul() + num_sinr();
  upper_ = RVec::Constant(n_, kInf);

  const int nu = num_sinr();
  data_.resize(nu);
  for (int u = 0; u < nu; ++u) {
    const int k = ues_[u];
    UeData& d = data_[u];
    d.k = k;
    const auto& cl = stats.clusters[k];
    for (int pos = 0; pos < static_cast<int>(cl.size()); ++pos)
      if (supported(k, pos)) d.positions.push_back(pos);
    const std::vector<int> rows = slice_rows(d.positions, antennas_);
    d.dim = static_cast<int>(rows.size());
    d.eta = cfg.eta(k);
    d.zeta = sca.zeta(k) / noise_;
    d.b = gather_rows(stats.A_kk[k] * sca.w_prev.w[k], rows) / noise_;
    d.E = gather_block(stats.E_kk[k], rows) / noise_;
    d.cross.resize(nu);
    for (int v = 0; v < nu; ++v)
      if (v != u) d.cross[v] = gather_block(stats.A_lk(k, ues_[v]), rows) / noise_;
    for (int pos : d.positions) {
      const int i = cl[pos];
      d.pow_idx.push_back(pow_index[i]);
      d.pow_scale.push_back(1.0 / cfg.p_max[i]);
      d.fh_idx.push_back(fh_index[i]);
      d.fh_scale.push_back(fh_index[i] >= 0 ? sca.tau_lin[k](pos) / cfg.c_max[i] : 0.0);
    }
    if (kind_ == SubproblemKind::SlackMin) upper_(num_power() + num_fronthaul() + u) = d.eta;
  }
}

LinearizedProblem::Eval LinearizedProblem::evaluate(const RVec& x, RMat* hessian) const {
  const int nu = num_sinr();
  const int s0 = num_power() + num_fronthaul();
  const int m = antennas_;
  Eval ev;
  ev.w.resize(nu);
  std::vector<Eigen::LLT<CMat>> factors(nu);

  double power = 0.0;
  for (int u = 0; u < nu; ++u) {
    const UeData& d = data_[u];
    CMat J = omega_p_ * CMat::Identity(d.dim, d.dim);
    for (std::size_t pos = 0; pos < d.pow_idx.size(); ++pos) {
      double diag = 0.0;
      if (d.pow_idx[pos] >= 0) diag += x(d.pow_idx[pos]) * d.pow_scale[pos];
      if (d.fh_idx[pos] >= 0) diag += x(d.fh_idx[pos]) * d.fh_scale[pos];
      if (diag != 0.0) J.diagonal().segment(static_cast<int>(pos) * m, m).array() += diag;
    }
    const double xs = x(s0 + u);
    if (xs != 0.0) J += xs * d.E;
    for (int v = 0; v < nu; ++v)
      if (v != u && x(s0 + v) != 0.0) J += x(s0 + v) * d.cross[v];

    const double tr = J.trace().real() / omega_p_;
    if (tr > cond_limit_) {
      Eigen::SelfAdjointEigenSolver<CMat> es(J, Eigen::EigenvaluesOnly);
      const double cond = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
      if (!(cond <= cond_limit_)) throw NumericalError("inner system is too ill-conditioned");
    }
    factors[u].compute(J);
    if (factors[u].info() != Eigen::Success) throw NumericalError("inner system is not positive definite");
    ev.w[u] = factors[u].solve(((xs / d.eta) * d.b).eval());
    power += ev.w[u].squaredNorm();
  }

  ev.c = constraint_values(ev.w, &ev.scale);

  ev.dual = omega_p_ * power + x.dot(ev.c);
  ev.primal = omega_p_ * power;
  ev.max_violation = 0.0;
  for (int j = 0; j < s0; ++j) ev.max_violation = std::max(ev.max_violation, ev.c(j) / ev.scale(j));
  for (int u = 0; u < nu; ++u) {
    if (kind_ == SubproblemKind::SlackMin)
      ev.primal += slack(ev, u);
    else
      ev.max_violation = std::max(ev.max_violation, ev.c(s0 + u) / ev.scale(s0 + u));
  }
  ev.gap_scale = std::abs(ev.primal) + x.cwiseAbs().dot(ev.scale);

  if (hessian != nullptr) {
    RMat& H = *hessian;
    H = RMat::Zero(n_, n_);
    std::vector<int> cols;
    for (int u = 0; u < nu; ++u) {
      const UeData& d = data_[u];
      cols.clear();
      const int npos = static_cast<int>(d.pow_idx.size());
      CMat R = CMat::Zero(d.dim, 2 * npos + nu);
      int c = 0;
      for (int pos = 0; pos < npos; ++pos) {
        if (d.pow_idx[pos] >= 0) {
          R.col(c).segment(pos * m, m) = d.pow_scale[pos] * ev.w[u].segment(pos * m, m);
          cols.push_back(d.pow_idx[pos]);
          ++c;
        }
        if (d.fh_idx[pos] >= 0) {
          R.col(c).segment(pos * m, m) = d.fh_scale[pos] * ev.w[u].segment(pos * m, m);
          cols.push_back(d.fh_idx[pos]);
          ++c;
        }
      }
      for (int v = 0; v < nu; ++v) {
        if (v == u)
          R.col(c) = d.E * ev.w[u] - d.b / d.eta;
        else
          R.col(c) = d.cross[v] * ev.w[u];
        cols.push_back(s0 + v);
        ++c;
      }
      const CMat Rc = R.leftCols(c);
      const CMat Z = factors[u].solve(Rc);
      const RMat blk = -2.0 * (Rc.adjoint() * Z).real();
      for (int a = 0; a < c; ++a)
        for (int b = 0; b < c; ++b) H(cols[a], cols[b]) += blk(a, b);
    }
    H = 0.5 * (H + H.transpose()).eval();
  }
  return ev;
}

RVec LinearizedProblem::constraint_values(const std::vector<CVec>& w, RVec* magnitude) const {
  const int nu = num_sinr();
  const int s0 = num_power() + num_fronthaul();
  const int m = antennas_;
  RVec out = RVec::Zero(n_);
  RVec mag = RVec::Zero(n_);
  for (int j = 0; j < num_power(); ++j) {
    out(j) = -1.0;
    mag(j) = 1.0;
  }
  for (int f = 0; f < num_fronthaul(); ++f) {
    out(num_power() + f) = -fh_ctilde_[f] / fh_limit_[f];
    mag(num_power() + f) = std::max(1.0, std::abs(out(num_power() + f)));
  }
  for (int u = 0; u < nu; ++u) {
    const UeData& d = data_[u];
    for (std::size_t pos = 0; pos < d.pow_idx.size(); ++pos) {
      const double p = w[u].segment(static_cast<int>(pos) * m, m).squaredNorm();
      if (d.pow_idx[pos] >= 0) {
        out(d.pow_idx[pos]) += p * d.pow_scale[pos];
        mag(d.pow_idx[pos]) += p * d.pow_scale[pos];
      }
      if (d.fh_idx[pos] >= 0) {
        out(d.fh_idx[pos]) += p * d.fh_scale[pos];
        mag(d.fh_idx[pos]) += p * d.fh_scale[pos];
      }
    }
    double load = 1.0 + std::real(w[u].dot(d.E * w[u]));
    for (int v = 0; v < nu; ++v)
      if (v != u) load += std::real(w[v].dot(data_[v].cross[u] * w[v]));
    const double signal = 2.0 * std::real(d.b.dot(w[u]));
    out(s0 + u) = load - (signal - d.zeta) / d.eta;
    mag(s0 + u) = load + (std::abs(signal) + d.zeta) / d.eta;
  }
  if (magnitude != nullptr) *magnitude = std::move(mag);
  return out;
}

double LinearizedProblem::slack(const Eval& ev, int u) const {
  // Shortfalls below the rounding level of the constraint's terms count as met.
  const int j = num_power() + num_fronthaul() + u;
  return data_[u].eta * std::max(0.0, ev.c(j) - kSlackFloor * ev.scale(j));
}

DualState LinearizedProblem::to_dual_state(const RVec& x) const {
  DualState d;
  d.lambda = RVec::Zero(lambda_size_);
  d.mu = RVec::Zero(lambda_size_);
  d.upsilon = RVec::Zero(upsilon_size_);
  for (int j = 0; j < num_power(); ++j) d.lambda(pow_rrh_[j]) = x(j) / (omega_p_ * pow_limit_[j]);
  for (int f = 0; f < num_fronthaul(); ++f) d.mu(fh_rrh_[f]) = x(num_power() + f) / (omega_p_ * fh_limit_[f]);
  const int s0 = num_power() + num_fronthaul();
  for (int u = 0; u < num_sinr(); ++u) d.upsilon(ues_[u]) = x(s0 + u) / (omega_p_ * data_[u].eta * noise_);
  d.scaled = x;
  return d;
}

RVec LinearizedProblem::from_dual_state(const DualState& d) const {
  RVec x = RVec::Zero(n_);
  for (int j = 0; j < num_power(); ++j) x(j) = d.lambda(pow_rrh_[j]) * omega_p_ * pow_limit_[j];
  for (int f = 0; f < num_fronthaul(); ++f) x(num_power() + f) = d.mu(fh_rrh_[f]) * omega_p_ * fh_limit_[f];
  const int s0 = num_power() + num_fronthaul();
  for (int u = 0; u < num_sinr(); ++u) x(s0 + u) = d.upsilon(ues_[u]) * omega_p_ * data_[u].eta * noise_;
  return x;
}

BeamSet LinearizedProblem::to_beams(const Eval& ev, const BeamSet& shape) const {
  BeamSet b = shape;
  for (auto& v : b.w) v.setZero();
  const int m = antennas_;
  for (int u = 0; u < num_sinr(); ++u) {
    const auto& pos = data_[u].positions;
    for (std::size_t a = 0; a < pos.size(); ++a) b.slice(ues_[u], pos[a]) = ev.w[u].segment(static_cast<int>(a) * m, m);
  }
  return b;
}

std::vector<CVec> LinearizedProblem::gather(const BeamSet& beams) const {
  std::vector<CVec> out(num_sinr());
  for (int u = 0; u < num_sinr(); ++u) out[u] = gather_rows(beams.w[ues_[u]], slice_rows(data_[u].positions, antennas_));
  return out;
}

namespace {

DualResult projected_newton(const LinearizedProblem& prob, const RVec& warm, const DualOptions& opt) {
  const int n = prob.size();
  const RVec& ub = prob.upper();
  DualResult res;
  RVec x = clamp_box(warm.size() == n ? warm : RVec(RVec::Zero(n)), ub);
  RMat H;
  LinearizedProblem::Eval ev;
  try {
    ev = prob.evaluate(x, &H);
  } catch (const NumericalError&) {
    if (x.isZero()) throw;
    x.setZero();  // the warm start belongs to a different linearisation
    ev = prob.evaluate(x, &H);
  }
  RVec best_x = x;
  auto best_ev = ev;

  for (int it = 0; it < opt.max_newton_iter; ++it) {
    res.iterations = it;
    if (better(ev, best_ev)) {
      best_ev = ev;
      best_x = x;
    }
    if (meets(ev, opt.tol_feas, opt.tol_gap)) {
      res.x = x;
      res.eval = std::move(ev);
      return res;
    }
    const RVec& g = ev.c;
    const RVec pg = clamp_box(x + g, ub) - x;
    const double eps = std::min(1e-6, pg.norm());

    std::vector<int> free_set, active_set;
    for (int j = 0; j < n; ++j) {
      const bool at_lo = x(j) <= eps && g(j) < 0.0;
      const bool at_hi = x(j) >= ub(j) - eps && g(j) > 0.0;
      (at_lo || at_hi ? active_set : free_set).push_back(j);
    }

    RVec d = RVec::Zero(n);
    const RMat negH = -H;
    for (int j : active_set) d(j) = g(j) / std::max(negH(j, j), 1e-300);
    if (!free_set.empty()) {
      const int nf = static_cast<int>(free_set.size());
      RMat M(nf, nf);
      RVec rhs(nf);
      for (int a = 0; a < nf; ++a) {
        rhs(a) = g(free_set[a]);
        for (int b = 0; b < nf; ++b) M(a, b) = negH(free_set[a], free_set[b]);
      }
      // Jacobi scaling: multiplier curvatures differ by many orders of magnitude.
      RVec dscale(nf);
      for (int a = 0; a < nf; ++a) dscale(a) = 1.0 / std::sqrt(std::max(M(a, a), 1e-300));
      const RMat Ms = dscale.asDiagonal() * M * dscale.asDiagonal();
      const RVec rs = dscale.cwiseProduct(rhs);
      double reg = 1e-14;
      RVec df;
      for (int attempt = 0; attempt < 12; ++attempt) {
        RMat Mr = Ms;
        Mr.diagonal().array() += reg;
        Eigen::LLT<RMat> llt(Mr);
        if (llt.info() == Eigen::Success) {
          df = dscale.cwiseProduct(llt.solve(rs));
          if (df.allFinite()) break;
        }
        reg *= 100.0;
        df.resize(0);
      }
      if (df.size() == 0) df = dscale.cwiseProduct(rs);
      for (int a = 0; a < nf; ++a) d(free_set[a]) = df(a);
    }

    bool accepted = false;
    for (int pass = 0; pass < 2 && !accepted; ++pass) {
      if (pass == 1) {
        // Fall back to a scaled projected gradient direction.
        for (int j = 0; j < n; ++j) d(j) = g(j) / std::max(negH(j, j), 1e-300);
      }
      double s = 1.0;
      for (int ls = 0; ls < 60; ++ls, s *= 0.5) {
        const RVec xn = clamp_box(x + s * d, ub);
        const double pred = g.dot(xn - x);
        if ((xn.array() == x.array()).all()) break;  // multipliers can be tiny; compare exactly
        RMat Hn;
        LinearizedProblem::Eval evn;
        try {
          evn = prob.evaluate(xn, &Hn);
        } catch (const NumericalError&) {
          continue;
        }
        const bool ascent = evn.dual >= ev.dual + 1e-4 * std::max(pred, 0.0) && (evn.dual > ev.dual || pred <= 0.0);
        // Near the optimum the dual changes by less than its rounding error; judge by the residuals instead.
        const bool flat = std::abs(evn.dual - ev.dual) <= 1e-13 * std::max(ev.gap_scale, 1e-300) && better(evn, ev);
        if (ascent || flat) {
          x = xn;
          ev = std::move(evn);
          H = std::move(Hn);
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) break;
  }
  if (better(ev, best_ev)) {
    best_ev = ev;
    best_x = x;
  }
  if (meets(best_ev, opt.stall_feas, opt.stall_gap)) {
    res.x = best_x;
    res.eval = std::move(best_ev);
    return res;
  }
  throw DualConvergenceError("projected Newton dual ascent stalled", best_x);
}

DualResult ellipsoid(const LinearizedProblem& prob, const RVec& warm, const DualOptions& opt) {
  const int n = prob.size();
  const RVec& ub = prob.upper();
  const long max_steps = opt.max_ellipsoid_steps > 0 ? opt.max_ellipsoid_steps : 50L * n * n;
  DualResult res;
  RVec c = warm.size() == n ? warm : RVec(RVec::Zero(n));
  RMat P = RMat::Identity(n, n) * (opt.ellipsoid_radius * opt.ellipsoid_radius);

  RVec best_x = clamp_box(c, ub);
  LinearizedProblem::Eval best_ev = prob.evaluate(best_x);
  double best_dual = -kInf;
  if (meets(best_ev, opt.tol_feas, opt.tol_gap)) {
    res.x = best_x;
    res.eval = best_ev;
    return res;
  }

  long step = 0;
  for (; step < max_steps; ++step) {
    RVec a = RVec::Zero(n);
    double depth = 0.0;
    int coord = -1;
    for (int j = 0; j < n; ++j) {
      if (c(j) < 0.0) {
        coord = j;
        a(j) = -1.0;
        depth = -c(j);
        break;
      }
      if (c(j) > ub(j)) {
        coord = j;
        a(j) = 1.0;
        depth = c(j) - ub(j);
        break;
      }
    }
    if (coord < 0) {
      auto ev = prob.evaluate(c);
      if (ev.dual > best_dual) best_dual = ev.dual;
      if (better(ev, best_ev)) {
        best_ev = ev;
        best_x = c;
      }
      if (meets(ev, opt.tol_feas, opt.tol_gap)) {
        res.x = c;
        res.eval = std::move(ev);
        res.iterations = static_cast<int>(step);
        return res;
      }
      a = -ev.c;
      depth = best_dual - ev.dual;
    }
    const RVec Pa = P * a;
    const double aPa = a.dot(Pa);
    if (!(aPa > 1e-300)) break;
    const double sq = std::sqrt(aPa);
    const double alpha = depth / sq;
    if (alpha >= 1.0) break;
    if (n == 1) {
      const double r = std::sqrt(P(0, 0));
      double lo = c(0) - r, hi = c(0) + r;
      if (a(0) > 0.0)
        hi = std::min(hi, c(0) - depth / a(0));
      else
        lo = std::max(lo, c(0) + depth / -a(0));
      if (!(hi > lo)) break;
      c(0) = 0.5 * (lo + hi);
      P(0, 0) = 0.25 * (hi - lo) * (hi - lo);
      continue;
    }
    const RVec g = Pa / sq;
    const double nn = static_cast<double>(n);
    c -= (1.0 + nn * alpha) / (nn + 1.0) * g;
    P = (nn * nn / (nn * nn - 1.0)) * (1.0 - alpha * alpha) *
        (P - (2.0 * (1.0 + nn * alpha) / ((nn + 1.0) * (1.0 + alpha))) * (g * g.transpose()));
    P = 0.5 * (P + P.transpose()).eval();
  }

  // Stall guard: projected supergradient ascent with diminishing steps.
  res.fallback_used = true;
  RVec x = best_x;
  for (int s = 1; s <= opt.supergradient_steps; ++s) {
    auto ev = prob.evaluate(x);
    if (better(ev, best_ev)) {
      best_ev = ev;
      best_x = x;
    }
    if (meets(ev, opt.tol_feas, opt.tol_gap)) {
      res.x = x;
      res.eval = std::move(ev);
      res.iterations = static_cast<int>(step) + s;
      return res;
    }
    const double gn = ev.c.norm();
    if (!(gn > 0.0)) break;
    x = clamp_box(x + (1.0 / std::sqrt(static_cast<double>(s))) * ev.c / gn, ub);
  }
  if (meets(best_ev, opt.stall_feas, opt.stall_gap)) {
    res.x = best_x;
    res.eval = std::move(best_ev);
    res.iterations = static_cast<int>(step) + opt.supergradient_steps;
    return res;
  }
  throw DualConvergenceError("ellipsoid dual ascent did not reach tolerance", best_x);
}

}  // namespace

DualResult maximize_dual(const LinearizedProblem& prob, const RVec& warm, const DualOptions& opt) {
  if (prob.size() == 0) {
    DualResult r;
    r.x = RVec::Zero(0);
    r.eval = prob.evaluate(r.x);
    return r;
  }
  return opt.method == DualMethod::Ellipsoid ? ellipsoid(prob, warm, opt) : projected_newton(prob, warm, opt);
}

}  // namespace udcran
