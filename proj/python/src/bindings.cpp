// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

// Python extension. Configurations and results cross the boundary as JSON
// text; the package wrapper turns them into dicts.

#include "udcran/harness.hpp"
#include "udcran/io.hpp"
#include "udcran/validation.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <tuple>
#include <vector>

namespace py = pybind11;
using namespace udcran;

namespace {

ExperimentConfig parse(const std::string& cfg_json) { return io::config_from_json(cfg_json); }

Scenario scenario(const std::string& cfg_json, int trial) {
  const ExperimentConfig cfg = parse(cfg_json);
  return build_scenario(cfg, trial_seed(cfg.base_seed, trial));
}

// Admission with the first configured method and belief, then power minimisation.
std::string solve(const std::string& cfg_json, int trial) {
  ExperimentConfig cfg = parse(cfg_json);
  cfg.methods.resize(1);
  cfg.beliefs.resize(1);
  py::gil_scoped_release release;
  return io::records_to_json(run_trial(cfg, trial));
}

std::tuple<std::string, std::string> sweep(const std::string& cfg_json) {
  const ExperimentConfig cfg = parse(cfg_json);
  std::vector<TrialRecord> recs;
  {
    py::gil_scoped_release release;
    recs = run_sweep(cfg);
  }
  return {records_to_csv(recs), io::records_to_json(recs)};
}

py::list oracles(long draws, long channel_draws, std::uint64_t seed) {
  OracleOptions opt;
  opt.stat_draws = draws;
  opt.channel_draws = channel_draws;
  opt.seed = seed;
  std::vector<OracleResult> results;
  {
    py::gil_scoped_release release;
    results = run_all_oracles(opt);
  }
  py::list out;
  for (const auto& r : results) {
    py::dict d;
    d["module"] = r.module;
    d["name"] = r.name;
    d["measured"] = r.measured;
    d["expected"] = r.expected;
    d["error"] = r.error;
    d["tolerance"] = r.tolerance;
    d["pass"] = r.pass;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_udcran, m) {
  m.doc() = "Robust beamforming toolkit for FDD user-centric C-RAN";
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "default_config", [](bool large) {
        return io::to_json(large ? ExperimentConfig::large_scenario() : ExperimentConfig::small_scenario());
      },
      py::arg("large") = false);
  m.def(
      "normalize_config", [](const std::string& j) { return io::to_json(parse(j)); }, py::arg("config"),
      "Fills defaults and validates; raises ConfigError on bad input.");
  m.def(
      "topology", [](const std::string& j, int trial) { return io::to_json(scenario(j, trial).topo); },
      py::arg("config"), py::arg("trial") = 0);
  m.def(
      "gain_matrix", [](const std::string& j, int trial) { return scenario(j, trial).topo.alpha; }, py::arg("config"),
      py::arg("trial") = 0, "Linear gain alpha(i, k) from RRH i to UE k.");
  m.def(
      "pilots", [](const std::string& j, int trial) { return io::to_json(scenario(j, trial).pilots); },
      py::arg("config"), py::arg("trial") = 0);
  m.def(
      "color_topology",
      [](const std::string& topo_json, int n_max) {
        const Topology t = io::topology_from_json(topo_json);
        return io::to_json(dsatur_color(build_conflict_graph(t), n_max, t.antennas));
      },
      py::arg("topology"), py::arg("n_max"));
  m.def("solve", &solve, py::arg("config"), py::arg("trial") = 0,
        "Records JSON of the first configured method and belief.");
  m.def("sweep", &sweep, py::arg("config"), "Returns (CSV, records JSON).");
  m.def("oracles", &oracles, py::arg("draws") = 100'000, py::arg("channel_draws") = 100'000,
        py::arg("seed") = 2026);
  m.def("pathloss_db", &pathloss_db, py::arg("distance_m"), py::arg("intercept_db") = 148.1,
        py::arg("slope") = 37.6);
  m.def(
      "sinr_target",
      [](double r_min, int frame_slots, int tau) {
        return RateConfig::uniform(1, 1, frame_slots, tau, r_min, 1.0, 1.0).eta(0);
      },
      py::arg("r_min"), py::arg("frame_slots"), py::arg("tau"));
  m.attr("CSV_HEADER") = kCsvHeader;
}
