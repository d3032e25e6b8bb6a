// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#pragma once

#include "udcran/common.hpp"
#include "udcran/topology.hpp"

#include <limits>
#include <utility>
#include <vector>

namespace udcran {

/// RRH conflict graph: i and j are adjacent when some UE has both in its cluster.
struct ConflictGraph {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;  // i < j, sorted
  std::vector<std::vector<int>> adj;       // sorted neighbour lists

  bool has_edge(int i, int j) const;
  int degree(int i) const { return static_cast<int>(adj[i].size()); }

  static ConflictGraph from_edges(int num_vertices, const std::vector<std::pair<int, int>>& edges);
};

struct PilotAssignment {
  std::vector<int> color;
  int num_colors = 0;
  int tau = 0;
  std::vector<std::vector<int>> reuse_sets;  // RRHs per color, ascending

  /// RRHs sharing the pilot of RRH i (including i itself).
  const std::vector<int>& reuse_set_of(int i) const { return reuse_sets[color[i]]; }
};

inline constexpr int kUnlimitedReuse = std::numeric_limits<int>::max();

ConflictGraph build_conflict_graph(const Topology& topo);

/// Dsatur colouring where a colour whose class already holds n_max RRHs is
/// unavailable. Ties: saturation, then degree, then lowest index.
PilotAssignment dsatur_color(const ConflictGraph& g, int n_max, int antennas);

/// Number of colour conflicts plus reuse overflows; zero for a valid assignment.
int count_pilot_violations(const ConflictGraph& g, const PilotAssignment& pa, int n_max);

/// The tau x M training matrix of RRH i: columns [c_i M, (c_i + 1) M) of I_tau.
CMat pilot_matrix(const PilotAssignment& pa, int i, int antennas);

}  // namespace udcran
