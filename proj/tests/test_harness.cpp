// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/harness.hpp"
#include "udcran/io.hpp"

#include "doctest.h"

#include <sstream>

using namespace udcran;

TEST_SUITE("harness") {
  TEST_CASE("full robust designs meet every target under the audit statistics") {
    ExperimentConfig cfg;
    cfg.r_min = 2.0;
    cfg.beliefs = {BeliefModel::FullRobust};
    for (int trial = 0; trial < 5; ++trial)
      for (const TrialRecord& r : run_trial(cfg, trial)) {
        REQUIRE(r.ok);
        for (double rate : r.rates) CHECK(rate >= cfg.r_min - 1e-3);
      }
  }

  TEST_CASE("the naive design spends less power on the same users") {
    ExperimentConfig cfg;
    cfg.r_min = 2.0;
    cfg.beliefs = {BeliefModel::FullRobust, BeliefModel::NonRobust};
    int compared = 0;
    for (int trial = 0; trial < 8; ++trial) {
      const auto recs = run_trial(cfg, trial);
      REQUIRE(recs.size() == 2);
      if (!recs[0].ok || !recs[1].ok || recs[0].admitted != recs[1].admitted || recs[0].admitted.empty()) continue;
      ++compared;
      CHECK(recs[1].power_mw < recs[0].power_mw);
    }
    CHECK(compared > 0);
  }

  TEST_CASE("fixed seeds reproduce records exactly") {
    ExperimentConfig cfg;
    cfg.beliefs = {BeliefModel::FullRobust, BeliefModel::CdiOnly};
    cfg.methods = {AdmissionMethod::Successive, AdmissionMethod::Bisection};
    const auto a = run_trial(cfg, 3), b = run_trial(cfg, 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
      CHECK(a[j].seed == b[j].seed);
      CHECK(a[j].admitted == b[j].admitted);
      CHECK(a[j].power_mw == b[j].power_mw);
      CHECK(a[j].rates == b[j].rates);
      CHECK(a[j].report.trace == b[j].report.trace);
    }
    CHECK(records_to_csv(a) == records_to_csv(b));
    CHECK(io::records_to_json(a) == io::records_to_json(b));
  }

  TEST_CASE("sweep output is sorted and independent of the thread count") {
    ExperimentConfig cfg;
    cfg.trials = 3;
    cfg.sweep_axis = SweepAxis::RMin;
    cfg.sweep_values = {4.0, 1.0};
    cfg.threads = 1;
    const auto one = run_sweep(cfg);
    cfg.threads = 3;
    const auto three = run_sweep(cfg);
    CHECK(records_to_csv(one) == records_to_csv(three));
    REQUIRE(one.size() == 6);
    CHECK(one.front().sweep_value == 1.0);
    CHECK(one.back().sweep_value == 4.0);
  }

  TEST_CASE("CSV header and summary") {
    ExperimentConfig cfg;
    const auto recs = run_trial(cfg, 0);
    const std::string csv = records_to_csv(recs);
    CHECK(csv.rfind("seed,sweep_axis,sweep_value,method,belief,admitted,power_mw,min_rate,mean_rate,iters,ok\n", 0) ==
          0);
    std::istringstream is(csv);
    std::string line;
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 1 + static_cast<int>(recs.size()));
    CHECK(summary_csv(recs).find("none,0,successive,full_robust,1,1,") != std::string::npos);
  }

  TEST_CASE("sweep values reach the configuration") {
    ExperimentConfig cfg;
    cfg.sweep_axis = SweepAxis::BCdi;
    CHECK(with_sweep_value(cfg, 6.0).feedback.b_cdi == 6);
    cfg.sweep_axis = SweepAxis::BPa;
    CHECK(with_sweep_value(cfg, 1.0).feedback.b_pa == 1);
    cfg.sweep_axis = SweepAxis::RMin;
    CHECK(with_sweep_value(cfg, 2.5).r_min == 2.5);
  }

  TEST_CASE("invalid experiments are rejected") {
    ExperimentConfig cfg;
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = ExperimentConfig{};
    cfg.sweep_axis = SweepAxis::RMin;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.sweep_values = {1.0, -2.0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.sweep_axis = SweepAxis::BPa;
    cfg.sweep_values = {0.0, 1.0, 2.0};
    CHECK_NOTHROW(cfg.validate());
    cfg.sweep_values = {1.5};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.sweep_axis = SweepAxis::BCdi;
    cfg.sweep_values = {0.0};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }

  TEST_CASE("solver failures are recorded, not thrown") {
    ExperimentConfig cfg;
    cfg.frame_slots = 4;
    const auto recs = run_trial(cfg, 0);
    REQUIRE(recs.size() == 1);
    CHECK_FALSE(recs[0].ok);
    CHECK(recs[0].error.find("pilot length") != std::string::npos);
  }

  TEST_CASE("pilot allocation on random small topologies fits the frame") {
    ExperimentConfig cfg;
    for (int trial = 0; trial < 100; ++trial) {
      const Scenario sc = build_scenario(cfg, trial_seed(cfg.base_seed, trial));
      CHECK(count_pilot_violations(sc.graph, sc.pilots, cfg.n_max) == 0);
      CHECK(sc.pilots.tau < cfg.frame_slots);
    }
  }
}
