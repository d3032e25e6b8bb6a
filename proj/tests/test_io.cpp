// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/io.hpp"

#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"

using namespace udcran;
using Json = nlohmann::json;

TEST_SUITE("io") {
  TEST_CASE("topology round trip") {
    const Topology t = generate_topology(NetworkConfig::small_scenario());
    const Topology back = io::topology_from_json(io::to_json(t));
    CHECK(back.clusters == t.clusters);
    CHECK(back.served == t.served);
    CHECK(back.alpha == t.alpha);
    CHECK(back.rrh_pos[3].y == t.rrh_pos[3].y);
  }

  TEST_CASE("malformed topology documents are rejected") {
    CHECK_THROWS_AS(io::topology_from_json("{\"antennas\": 2}"), ConfigError);
    CHECK_THROWS_AS(io::topology_from_json("not json"), ConfigError);
  }

  TEST_CASE("pilot assignment round trip") {
    const Scenario sc = testing::small_scenario(0);
    const PilotAssignment back = io::pilots_from_json(io::to_json(sc.pilots));
    CHECK(back.color == sc.pilots.color);
    CHECK(back.tau == sc.pilots.tau);
    CHECK(back.reuse_sets == sc.pilots.reuse_sets);
  }

  TEST_CASE("statistics are row-major with interleaved parts") {
    const Scenario sc = testing::small_scenario(1);
    const StatSet s = build_statset(BeliefModel::FullRobust, sc.feedback, sc.est, sc.topo);
    const Json j = Json::parse(io::to_json(s));
    const Json& a = j["ues"][0]["A_kk"];
    const int rows = a["rows"], cols = a["cols"];
    REQUIRE(rows == s.dim(0));
    REQUIRE(cols == s.dim(0));
    const auto& data = a["data"];
    REQUIRE(static_cast<int>(data.size()) == 2 * rows * cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        CHECK(data[2 * (r * cols + c)].get<double>() == s.A_kk[0](r, c).real());
        CHECK(data[2 * (r * cols + c) + 1].get<double>() == s.A_kk[0](r, c).imag());
      }
  }

  TEST_CASE("configuration round trip, partial documents and unknown keys") {
    ExperimentConfig c = ExperimentConfig::large_scenario();
    c.methods = {AdmissionMethod::Bisection, AdmissionMethod::Exhaustive};
    c.beliefs = {BeliefModel::QuantOnly};
    c.sweep_axis = SweepAxis::BPa;
    c.sweep_values = {1, 2, 3};
    c.solver.method = DualMethod::Ellipsoid;
    CHECK(io::to_json(io::config_from_json(io::to_json(c))) == io::to_json(c));

    const ExperimentConfig p = io::config_from_json(R"({"r_min": 5, "network": {"num_ue": 4}})");
    CHECK(p.r_min == 5.0);
    CHECK(p.network.num_ue == 4);
    CHECK(p.network.num_rrh == 14);
    CHECK_THROWS_AS(io::config_from_json(R"({"rmin": 5})"), ConfigError);
    CHECK_THROWS_AS(io::config_from_json(R"({"trials": 0})"), ConfigError);
    CHECK_THROWS_AS(io::config_from_json(R"({"beliefs": ["robust"]})"), ConfigError);
  }

  TEST_CASE("solve report, admission and feedback documents") {
    ExperimentConfig cfg;
    cfg.r_min = 2.0;
    const auto recs = run_trial(cfg, 0);
    REQUIRE(recs[0].ok);
    const Json rep = Json::parse(io::to_json(recs[0].report));
    CHECK(rep["trace"].size() == recs[0].report.trace.size());
    CHECK(rep["rrh_power_mw"].size() == 14);
    CHECK(rep.contains("multipliers"));
    CHECK(rep["kkt"].contains("complementarity"));

    const Scenario sc = testing::small_scenario(0, 2.0);
    const Json fb = Json::parse(io::to_json(sc.feedback));
    CHECK(fb.dump().find("phi_hat") != std::string::npos);

    AdmissionResult a;
    a.admitted = {0, 2};
    a.slacks = RVec::Zero(3);
    a.slacks(1) = 0.5;
    a.p8_solve_count = 2;
    const std::string csv = io::admission_to_csv(a, 3);
    CHECK(csv == "ue,admitted,slack\n0,1,0\n1,0,0.5\n2,1,0\nsolves,2,\n");
  }
}
