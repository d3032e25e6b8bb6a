// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

// Command-line driver: one subcommand per pipeline stage plus sweeps and the
// Monte Carlo oracles.

#include "udcran/harness.hpp"
#include "udcran/io.hpp"
#include "udcran/validation.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace {

using Json = nlohmann::ordered_json;
using namespace udcran;

struct ConfigFlags {
  std::string config_path;
  bool large = false;
  std::optional<int> trials, num_rrh, num_ue, antennas, cluster_size, n_max, b_cdi, b_pa, threads, frame_slots;
  std::optional<double> r_min, p_max, c_max_norm;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> init, dual_method, axis;
  std::vector<std::string> methods, beliefs, sets;
  std::vector<double> values;
  bool perfect_pa = false;
  bool simulate_pilots = false;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
    app->add_flag("--large", large, "start from the 42-RRH, 24-UE scenario");
    app->add_option("--trials", trials);
    app->add_option("--seed", seed, "base seed");
    app->add_option("--num-rrh", num_rrh);
    app->add_option("--num-ue", num_ue);
    app->add_option("--antennas", antennas);
    app->add_option("--cluster-size", cluster_size);
    app->add_option("--n-max", n_max, "maximum reuse of one pilot");
    app->add_option("--frame-slots", frame_slots);
    app->add_option("--b-cdi", b_cdi);
    app->add_option("--b-pa", b_pa);
    app->add_flag("--perfect-pa", perfect_pa, "feed back the exact phase");
    app->add_flag("--simulate-pilots", simulate_pilots, "estimate channels from a simulated training block");
    app->add_option("--r-min", r_min, "rate target, bit/s/Hz");
    app->add_option("--p-max", p_max, "per-RRH power limit, mW");
    app->add_option("--c-max", c_max_norm, "fronthaul limit in units of the rate target");
    app->add_option("--init", init, "cm or rand");
    app->add_option("--dual-method", dual_method, "newton or ellipsoid");
    app->add_option("--methods", methods, "successive, bisection, exhaustive");
    app->add_option("--beliefs", beliefs, "full_robust, quant_only, estim_only, cdi_only, non_robust, perfect_csi");
    app->add_option("--axis", axis, "sweep axis: r_min, b_cdi or b_pa");
    app->add_option("--values", values, "sweep values");
    app->add_option("--threads", threads);
    app->add_option("--set", sets, "override any config field, e.g. solver.max_outer=80");
  }

  ExperimentConfig resolve() const {
    Json j = Json::parse(io::to_json(large ? ExperimentConfig::large_scenario() : ExperimentConfig::small_scenario()));
    if (!config_path.empty()) j.merge_patch(Json::parse(io::read_file(config_path)));
    auto put = [&](const char* ptr, const auto& v) {
      if (v) j[Json::json_pointer(ptr)] = *v;
    };
    put("/trials", trials);
    put("/base_seed", seed);
    put("/network/num_rrh", num_rrh);
    put("/network/num_ue", num_ue);
    put("/network/antennas", antennas);
    put("/network/cluster_size", cluster_size);
    put("/n_max", n_max);
    put("/frame_slots", frame_slots);
    put("/feedback/b_cdi", b_cdi);
    put("/feedback/b_pa", b_pa);
    put("/r_min", r_min);
    put("/p_max_mw", p_max);
    put("/c_max_norm", c_max_norm);
    put("/init", init);
    put("/solver/dual_method", dual_method);
    put("/sweep/axis", axis);
    put("/threads", threads);
    if (perfect_pa) j["feedback"]["perfect_pa"] = true;
    if (simulate_pilots) j["simulate_pilots"] = true;
    if (!methods.empty()) j["methods"] = methods;
    if (!beliefs.empty()) j["beliefs"] = beliefs;
    if (!values.empty()) j["sweep"]["values"] = values;
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects path=value, got " + s);
      std::string path = "/" + s.substr(0, eq);
      for (auto& ch : path)
        if (ch == '.') ch = '/';
      const std::string raw = s.substr(eq + 1);
      Json v;
      try {
        v = Json::parse(raw);
      } catch (const Json::exception&) {
        v = raw;
      }
      j[Json::json_pointer(path)] = v;
    }
    return io::config_from_json(j.dump());
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text << (text.empty() || text.back() == '\n' ? "" : "\n");
  else
    io::write_file(path, text);
}

std::vector<int> all_ues(const Scenario& sc) {
  std::vector<int> v(sc.topo.num_ue());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust beamforming toolkit for FDD user-centric C-RAN"};
  app.require_subcommand(1);

  ConfigFlags flags;
  int trial = 0;
  std::string out, topo_in, residuals, dump_stats, dump_feedback, dump_channels, csv, sidecar, summary;

  auto* topo = app.add_subcommand("topo", "generate a deployment and print it as JSON");
  auto* pilots = app.add_subcommand("pilots", "colour the RRH conflict graph and print the pilot assignment");
  auto* solve = app.add_subcommand("solve", "admit users, minimise power and print the solve report");
  auto* admit = app.add_subcommand("admit", "run user admission and print the admitted set");
  auto* sweep = app.add_subcommand("sweep", "run seeded trials over a sweep axis and write CSV");
  auto* validate = app.add_subcommand("validate-stats", "run the Monte Carlo oracles and print pass/fail");

  for (auto* sub : {topo, pilots, solve, admit, sweep}) {
    flags.attach(sub);
    sub->add_option("-o,--out", out, "output file (stdout if omitted)");
  }
  for (auto* sub : {topo, pilots, solve, admit}) sub->add_option("--trial", trial, "trial index within the base seed");
  pilots->add_option("--topology", topo_in, "colour this topology JSON instead of generating one")
      ->check(CLI::ExistingFile);
  solve->add_option("--residuals", residuals, "constraint margins as CSV (ue,rrh,constraint,margin)");
  solve->add_option("--dump-stats", dump_stats, "design statistics as JSON");
  solve->add_option("--dump-feedback", dump_feedback, "feedback indices and realised quantization as JSON");
  solve->add_option("--dump-channels", dump_channels, "channel draw as JSON");
  admit->add_option("--csv", csv, "per-UE admission table as CSV");
  sweep->add_option("--json", sidecar, "sidecar with full solve reports (default: <out>.json)");
  sweep->add_option("--summary", summary, "mean/std per sweep value, method and belief");

  OracleOptions oracle;
  validate->add_option("--draws", oracle.stat_draws, "conditional sampler and codebook draws");
  validate->add_option("--channel-draws", oracle.channel_draws, "channel sampler draws");
  validate->add_option("--seed", oracle.seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      int failed = 0;
      for (const auto& r : run_all_oracles(oracle)) {
        std::printf("%s %-10s %-58s err=%.3e tol=%.1e\n", r.pass ? "PASS" : "FAIL", r.module.c_str(), r.name.c_str(),
                    r.error, r.tolerance);
        failed += r.pass ? 0 : 1;
      }
      std::printf("%d oracle check(s) failed\n", failed);
      return failed == 0 ? 0 : 1;
    }

    const ExperimentConfig cfg = flags.resolve();
    const std::uint64_t seed = trial_seed(cfg.base_seed, trial);

    if (sweep->parsed()) {
      const auto records = run_sweep(cfg);
      emit(out, records_to_csv(records));
      if (!out.empty() && out != "-") {
        io::write_file(sidecar.empty() ? out + ".json" : sidecar, io::records_to_json(records));
      } else if (!sidecar.empty()) {
        io::write_file(sidecar, io::records_to_json(records));
      }
      if (!summary.empty()) io::write_file(summary, summary_csv(records));
      int failed = 0;
      for (const auto& r : records) {
        if (r.ok) continue;
        ++failed;
        std::cerr << "seed " << r.seed << " " << to_string(r.method) << "/" << to_string(r.belief) << ": "
                  << r.error << "\n";
      }
      std::cerr << records.size() << " records, " << failed << " not ok\n";
      return 0;
    }

    if (pilots->parsed() && !topo_in.empty()) {
      const Topology t = io::topology_from_json(io::read_file(topo_in));
      const PilotAssignment pa = dsatur_color(build_conflict_graph(t), cfg.n_max, t.antennas);
      std::cerr << "colours " << pa.num_colors << ", tau " << pa.tau << "\n";
      emit(out, io::to_json(pa));
      return 0;
    }

    const Scenario sc = build_scenario(cfg, seed);
    if (topo->parsed()) {
      emit(out, io::to_json(sc.topo));
      return 0;
    }
    if (pilots->parsed()) {
      std::cerr << "colours " << sc.pilots.num_colors << ", tau " << sc.pilots.tau << ", violations "
                << count_pilot_violations(sc.graph, sc.pilots, cfg.n_max) << "\n";
      emit(out, io::to_json(sc.pilots));
      return 0;
    }

    const BeliefModel belief = cfg.beliefs.front();
    const AdmissionMethod method = cfg.methods.front();
    const StatSet stats = build_statset(belief, sc.feedback, sc.est, sc.topo, &sc.draw);
    const AdmissionResult adm = select_users(method, all_ues(sc), stats, sc.topo, sc.rate, admission_options(cfg, seed));

    if (admit->parsed()) {
      std::cerr << "admitted " << adm.admitted.size() << "/" << sc.topo.num_ue() << " after " << adm.p8_solve_count
                << " slack solves\n";
      emit(out, io::to_json(adm));
      if (!csv.empty()) io::write_file(csv, io::admission_to_csv(adm, sc.topo.num_ue()));
      return 0;
    }

    // solve
    const SolveReport rep = fota_solve(adm.admitted, stats, sc.rate, adm.warm_start, cfg.solver);
    std::cerr << "admitted " << adm.admitted.size() << "/" << sc.topo.num_ue() << ", power " << rep.objective
              << " mW, " << rep.iterations << " iterations, " << (rep.converged ? "converged" : "not converged")
              << "\n";
    emit(out, io::to_json(rep));
    if (!residuals.empty())
      io::write_file(residuals, residuals_to_csv(constraint_residuals(rep.beams, stats, sc.rate, adm.admitted,
                                                                      cfg.solver.theta)));
    if (!dump_stats.empty()) io::write_file(dump_stats, io::to_json(stats));
    if (!dump_feedback.empty()) io::write_file(dump_feedback, io::to_json(sc.feedback));
    if (!dump_channels.empty()) io::write_file(dump_channels, io::to_json(sc.draw));
    return rep.converged || adm.admitted.empty() ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
