// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#pragma once

#include "udcran/common.hpp"
#include "udcran/ratemodel.hpp"
#include "udcran/solver.hpp"
#include "udcran/statistics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace udcran {

enum class InitScheme { Cm, Rand };
enum class AdmissionMethod { Successive, Bisection, Exhaustive };

std::string to_string(InitScheme s);
std::string to_string(AdmissionMethod m);
InitScheme init_scheme_from_string(const std::string& s);
AdmissionMethod admission_method_from_string(const std::string& s);

struct AdmissionOptions {
  SolverOptions solver;
  InitScheme init = InitScheme::Cm;
  std::uint64_t init_seed = 0;  // Rand scheme; mixed with the candidate set
  int exhaustive_limit = 12;
  /// Exhaustive search drops UEs that cannot be served even alone.
  bool exhaustive_prune_singletons = true;
};

struct SlackSolution {
  std::vector<int> candidates;
  RVec slacks;  // per UE (noise-normalised SINR shortfall), zero outside candidates
  BeamSet beams;
  int iterations = 0;
  std::vector<double> trace;  // slack objective per outer iteration
  bool all_zero = false;
};

struct AdmissionResult {
  std::vector<int> admitted;
  RVec slacks;  // from the solve that accepted the admitted set
  BeamSet warm_start;
  AdmissionMethod method = AdmissionMethod::Successive;
  int p8_solve_count = 0;
};

/// Starting beams for the slack problem. Each RRH powers at most as many of its
/// candidate UEs (strongest gain first) as its fronthaul allows, splitting P_max equally.
BeamSet initial_beams(const std::vector<int>& candidates, const StatSet& stats, const Topology& topo,
                      const RateConfig& cfg, InitScheme scheme, std::uint64_t seed);

/// Minimises the sum of SINR slacks over the candidate set; stops early once all slacks vanish.
SlackSolution solve_p8(const std::vector<int>& candidates, const StatSet& stats, const Topology& topo,
                       const RateConfig& cfg, const AdmissionOptions& opt);

AdmissionResult successive_deletion(const std::vector<int>& candidates, const StatSet& stats, const Topology& topo,
                                    const RateConfig& cfg, const AdmissionOptions& opt);

AdmissionResult bisection_selection(const std::vector<int>& candidates, const StatSet& stats, const Topology& topo,
                                    const RateConfig& cfg, const AdmissionOptions& opt);

/// Throws ConfigError when the candidate set exceeds opt.exhaustive_limit.
AdmissionResult exhaustive_selection(const std::vector<int>& candidates, const StatSet& stats, const Topology& topo,
                                     const RateConfig& cfg, const AdmissionOptions& opt);

AdmissionResult select_users(AdmissionMethod method, const std::vector<int>& candidates, const StatSet& stats,
                             const Topology& topo, const RateConfig& cfg, const AdmissionOptions& opt);

}  // namespace udcran
