// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

namespace udcran {
namespace {

// Independent random streams of one trial.
enum Stream : std::uint64_t { kTopology = 1, kChannel = 2, kCodebook = 3, kInit = 4 };

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::None: return "none";
    case SweepAxis::RMin: return "r_min";
    case SweepAxis::BCdi: return "b_cdi";
    case SweepAxis::BPa: return "b_pa";
  }
  return "none";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
  for (auto a : {SweepAxis::None, SweepAxis::RMin, SweepAxis::BCdi, SweepAxis::BPa})
    if (to_string(a) == s) return a;
  throw ConfigError("unknown sweep axis: " + s);
}

ExperimentConfig ExperimentConfig::small_scenario() { return ExperimentConfig{}; }

ExperimentConfig ExperimentConfig::large_scenario() {
  ExperimentConfig c;
  c.network = NetworkConfig::large_scenario();
  c.n_max = 3;
  return c;
}

double ExperimentConfig::noise_mw() const { return noise_power_mw(bandwidth_hz, noise_density_dbm_hz); }

void ExperimentConfig::validate() const {
  network.validate();
  feedback.validate();
  if (frame_slots < 2) throw ConfigError("frame_slots must be at least 2");
  if (!(r_min > 0.0) || !std::isfinite(r_min)) throw ConfigError("r_min must be positive");
  if (!(c_max_norm > 0.0) || !std::isfinite(c_max_norm)) throw ConfigError("c_max_norm must be positive");
  if (!(p_max_mw > 0.0) || !std::isfinite(p_max_mw)) throw ConfigError("p_max_mw must be positive");
  if (!(pilot_power_mw > 0.0)) throw ConfigError("pilot_power_mw must be positive");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth_hz must be positive");
  if (n_max < 1) throw ConfigError("n_max must be at least 1");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (sweep_axis != SweepAxis::None && sweep_values.empty()) throw ConfigError("sweep axis given without values");
  for (double v : sweep_values) {
    if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");
    if (sweep_axis == SweepAxis::None) continue;
    if ((sweep_axis == SweepAxis::BCdi || sweep_axis == SweepAxis::BPa) && v != std::round(v))
      throw ConfigError("bit sweeps take integer values");
    ExperimentConfig point = with_sweep_value(*this, v);
    point.sweep_axis = SweepAxis::None;
    point.sweep_values.clear();
    point.validate();
  }
  if (methods.empty()) throw ConfigError("no admission method selected");
  if (beliefs.empty()) throw ConfigError("no belief model selected");
  if (threads < 0) throw ConfigError("threads must be non-negative");
}

ExperimentConfig with_sweep_value(const ExperimentConfig& cfg, double value) {
  ExperimentConfig c = cfg;
  switch (cfg.sweep_axis) {
    case SweepAxis::None: break;
    case SweepAxis::RMin: c.r_min = value; break;
    case SweepAxis::BCdi: c.feedback.b_cdi = static_cast<int>(std::lround(value)); break;
    case SweepAxis::BPa: c.feedback.b_pa = static_cast<int>(std::lround(value)); break;
  }
  return c;
}

std::uint64_t trial_seed(std::uint64_t base, int trial) { return split_seed(base, static_cast<std::uint64_t>(trial)); }

Scenario build_scenario(const ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Scenario sc;
  NetworkConfig net = cfg.network;
  net.seed = split_seed(seed, kTopology);
  sc.topo = generate_topology(net);
  sc.graph = build_conflict_graph(sc.topo);
  sc.pilots = dsatur_color(sc.graph, cfg.n_max, net.antennas);
  if (sc.pilots.tau >= cfg.frame_slots)
    throw ConfigError("pilot length " + std::to_string(sc.pilots.tau) + " leaves no data slots");
  const double noise = cfg.noise_mw();
  sc.est = estimation_stats(sc.topo, sc.pilots, cfg.pilot_power_mw, noise);
  Rng chan(split_seed(seed, kChannel));
  sc.draw = cfg.simulate_pilots ? estimate_from_pilots(sc.topo, sc.pilots, cfg.pilot_power_mw, noise, chan)
                                : sample_channels(sc.topo, sc.est, chan);
  Rng books(split_seed(split_seed(seed, kCodebook), cfg.feedback.codebook_seed));
  sc.books = generate_codebooks(cfg.feedback, sc.topo, books);
  sc.feedback = apply_feedback(cfg.feedback, sc.topo, sc.draw, sc.books);
  sc.rate = RateConfig::uniform(sc.topo.num_rrh(), sc.topo.num_ue(), cfg.frame_slots, sc.pilots.tau, cfg.r_min,
                                cfg.c_max_norm, cfg.p_max_mw);
  return sc;
}

AdmissionOptions admission_options(const ExperimentConfig& cfg, std::uint64_t seed) {
  AdmissionOptions ao;
  ao.solver = cfg.solver;
  ao.init = cfg.init;
  ao.init_seed = split_seed(seed, kInit);
  ao.exhaustive_limit = cfg.exhaustive_limit;
  return ao;
}

std::vector<TrialRecord> run_scenario(const ExperimentConfig& cfg, const Scenario& sc, std::uint64_t seed, int trial,
                                      double sweep_value) {
  std::vector<TrialRecord> out;
  const StatSet audit = build_statset(BeliefModel::FullRobust, sc.feedback, sc.est, sc.topo, &sc.draw);
  std::vector<int> all(sc.topo.num_ue());
  std::iota(all.begin(), all.end(), 0);

  for (BeliefModel belief : cfg.beliefs) {
    const StatSet stats = belief == BeliefModel::FullRobust
                              ? audit
                              : build_statset(belief, sc.feedback, sc.est, sc.topo, &sc.draw);
    for (AdmissionMethod method : cfg.methods) {
      TrialRecord r;
      r.seed = seed;
      r.trial = trial;
      r.sweep_axis = cfg.sweep_axis;
      r.sweep_value = sweep_value;
      r.method = method;
      r.belief = belief;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const AdmissionResult adm = select_users(method, all, stats, sc.topo, sc.rate, admission_options(cfg, seed));
        r.admitted = adm.admitted;
        r.p8_solves = adm.p8_solve_count;
        r.report = fota_solve(adm.admitted, stats, sc.rate, adm.warm_start, cfg.solver);
        r.power_mw = r.report.objective;
        r.iterations = r.report.iterations;
        for (int k : r.admitted) r.rates.push_back(net_rate(r.report.beams, audit, sc.rate, k));
        if (!r.rates.empty()) {
          r.min_rate = *std::min_element(r.rates.begin(), r.rates.end());
          r.mean_rate = std::accumulate(r.rates.begin(), r.rates.end(), 0.0) / static_cast<double>(r.rates.size());
        }
        r.ok = r.report.converged || r.admitted.empty();
        if (!r.ok) r.error = "outer iteration limit reached";
      } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
      }
      r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<TrialRecord> run_trial(const ExperimentConfig& cfg, int trial, double sweep_value) {
  const ExperimentConfig c = with_sweep_value(cfg, sweep_value);
  const std::uint64_t seed = trial_seed(cfg.base_seed, trial);
  Scenario sc;
  try {
    sc = build_scenario(c, seed);
  } catch (const std::exception& e) {
    std::vector<TrialRecord> out;
    for (BeliefModel b : c.beliefs)
      for (AdmissionMethod m : c.methods) {
        TrialRecord r;
        r.seed = seed;
        r.trial = trial;
        r.sweep_axis = c.sweep_axis;
        r.sweep_value = sweep_value;
        r.method = m;
        r.belief = b;
        r.error = e.what();
        out.push_back(std::move(r));
      }
    return out;
  }
  return run_scenario(c, sc, seed, trial, sweep_value);
}

std::vector<TrialRecord> run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<double> values = cfg.sweep_axis == SweepAxis::None ? std::vector<double>{0.0} : cfg.sweep_values;
  struct Job {
    double value;
    int trial;
  };
  std::vector<Job> jobs;
  for (double v : values)
    for (int t = 0; t < cfg.trials; ++t) jobs.push_back({v, t});
  std::vector<std::vector<TrialRecord>> results(jobs.size());

  int workers = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, static_cast<int>(jobs.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) results[j] = run_trial(cfg, jobs[j].trial, jobs[j].value);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::vector<TrialRecord> out;
  for (auto& r : results)
    for (auto& rec : r) out.push_back(std::move(rec));
  std::stable_sort(out.begin(), out.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return std::make_tuple(a.sweep_value, a.trial, static_cast<int>(a.method), static_cast<int>(a.belief)) <
           std::make_tuple(b.sweep_value, b.trial, static_cast<int>(b.method), static_cast<int>(b.belief));
  });
  return out;
}

std::string records_to_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.seed << ',' << to_string(r.sweep_axis) << ',' << fmt(r.sweep_value) << ',' << to_string(r.method) << ','
       << to_string(r.belief) << ',' << r.admitted.size() << ',' << fmt(r.power_mw) << ',' << fmt(r.min_rate) << ','
       << fmt(r.mean_rate) << ',' << r.iterations << ',' << (r.ok ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string summary_csv(const std::vector<TrialRecord>& records) {
  struct Acc {
    int n = 0, ok = 0;
    double adm = 0, adm2 = 0, pow = 0, pow2 = 0, minr = 0;
  };
  using Key = std::tuple<double, int, int>;
  std::map<Key, Acc> acc;
  SweepAxis axis = SweepAxis::None;
  for (const auto& r : records) {
    axis = r.sweep_axis;
    Acc& a = acc[{r.sweep_value, static_cast<int>(r.method), static_cast<int>(r.belief)}];
    ++a.n;
    if (!r.ok) continue;
    ++a.ok;
    const double n = static_cast<double>(r.admitted.size());
    a.adm += n;
    a.adm2 += n * n;
    a.pow += r.power_mw;
    a.pow2 += r.power_mw * r.power_mw;
    a.minr += r.min_rate;
  }
  auto sd = [](double s, double s2, int n) {
    if (n < 2) return 0.0;
    const double m = s / n;
    return std::sqrt(std::max(0.0, (s2 - n * m * m) / (n - 1)));
  };
  std::ostringstream os;
  os << "sweep_axis,sweep_value,method,belief,trials,ok,admitted_mean,admitted_std,power_mean,power_std,min_rate_mean\n";
  for (const auto& [key, a] : acc) {
    const auto [value, method, belief] = key;
    const double d = std::max(a.ok, 1);
    os << to_string(axis) << ',' << fmt(value) << ',' << to_string(static_cast<AdmissionMethod>(method)) << ','
       << to_string(static_cast<BeliefModel>(belief)) << ',' << a.n << ',' << a.ok << ',' << fmt(a.adm / d) << ','
       << fmt(sd(a.adm, a.adm2, a.ok)) << ',' << fmt(a.pow / d) << ',' << fmt(sd(a.pow, a.pow2, a.ok)) << ','
       << fmt(a.minr / d) << '\n';
  }
  return os.str();
}

}  // namespace udcran
