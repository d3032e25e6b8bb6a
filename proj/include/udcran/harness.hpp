// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#pragma once

#include "udcran/admission.hpp"
#include "udcran/channels.hpp"
#include "udcran/feedback.hpp"
#include "udcran/pilots.hpp"
#include "udcran/ratemodel.hpp"
#include "udcran/solver.hpp"
#include "udcran/statistics.hpp"
#include "udcran/topology.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace udcran {

enum class SweepAxis { None, RMin, BCdi, BPa };

std::string to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(const std::string& s);

struct ExperimentConfig {
  NetworkConfig network;
  FeedbackConfig feedback;
  int frame_slots = 200;
  double r_min = 3.0;        // bit/s/Hz
  double c_max_norm = 3.0;   // fronthaul limit in units of r_min
  double p_max_mw = 100.0;
  double pilot_power_mw = 200.0;
  double bandwidth_hz = 20e6;
  double noise_density_dbm_hz = -174.0;
  int n_max = 2;
  /// Draw channel estimates by simulating the training block instead of
  /// sampling their Gaussian law directly.
  bool simulate_pilots = false;
  int trials = 10;
  std::uint64_t base_seed = 1;
  SweepAxis sweep_axis = SweepAxis::None;
  std::vector<double> sweep_values;
  std::vector<AdmissionMethod> methods{AdmissionMethod::Successive};
  std::vector<BeliefModel> beliefs{BeliefModel::FullRobust};
  InitScheme init = InitScheme::Cm;
  SolverOptions solver;
  int exhaustive_limit = 12;
  int threads = 0;  // 0: hardware concurrency

  static ExperimentConfig small_scenario();
  static ExperimentConfig large_scenario();

  /// Throws ConfigError on invalid values.
  void validate() const;
  double noise_mw() const;
};

/// One realised network: everything up to the feedback the BBU receives.
struct Scenario {
  Topology topo;
  ConflictGraph graph;
  PilotAssignment pilots;
  EstimationStats est;
  ChannelDraw draw;
  CodebookSet books;
  FeedbackState feedback;
  RateConfig rate;
};

/// Applies a sweep value to a copy of cfg.
ExperimentConfig with_sweep_value(const ExperimentConfig& cfg, double value);

/// Seed of trial t, independent of every other trial.
std::uint64_t trial_seed(std::uint64_t base, int trial);

/// Throws ConfigError when the pilot length leaves no data slots.
Scenario build_scenario(const ExperimentConfig& cfg, std::uint64_t seed);

struct TrialRecord {
  std::uint64_t seed = 0;
  int trial = 0;
  SweepAxis sweep_axis = SweepAxis::None;
  double sweep_value = 0.0;
  AdmissionMethod method = AdmissionMethod::Successive;
  BeliefModel belief = BeliefModel::FullRobust;
  std::vector<int> admitted;
  int p8_solves = 0;
  double power_mw = 0.0;
  std::vector<double> rates;  // achieved rate of each admitted UE under full-robust statistics
  double min_rate = 0.0;
  double mean_rate = 0.0;
  int iterations = 0;
  bool ok = false;
  std::string error;
  double wall_seconds = 0.0;
  SolveReport report;
};

/// Admission options of a trial; the random initialisation draws from the trial's own stream.
AdmissionOptions admission_options(const ExperimentConfig& cfg, std::uint64_t seed);

/// Admission and power minimisation for every (method, belief) on one scenario.
std::vector<TrialRecord> run_scenario(const ExperimentConfig& cfg, const Scenario& sc, std::uint64_t seed, int trial,
                                      double sweep_value);

/// Builds the scenario of trial `trial` and runs it.
std::vector<TrialRecord> run_trial(const ExperimentConfig& cfg, int trial, double sweep_value = 0.0);

/// Every sweep value x trial, in parallel. Records are sorted by
/// (sweep value, trial, method, belief).
std::vector<TrialRecord> run_sweep(const ExperimentConfig& cfg);

inline constexpr const char* kCsvHeader =
    "seed,sweep_axis,sweep_value,method,belief,admitted,power_mw,min_rate,mean_rate,iters,ok";

std::string records_to_csv(const std::vector<TrialRecord>& records);

/// Mean and standard deviation per (sweep value, method, belief).
std::string summary_csv(const std::vector<TrialRecord>& records);

}  // namespace udcran
