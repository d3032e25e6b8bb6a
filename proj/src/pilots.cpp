// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/pilots.hpp"

#include <algorithm>
#include <set>

namespace udcran {

bool ConflictGraph::has_edge(int i, int j) const {
  return std::binary_search(adj[i].begin(), adj[i].end(), j);
}

ConflictGraph ConflictGraph::from_edges(int num_vertices, const std::vector<std::pair<int, int>>& edges) {
  std::set<std::pair<int, int>> uniq;
  for (auto [a, b] : edges) {
    if (a == b) continue;
    if (a < 0 || b < 0 || a >= num_vertices || b >= num_vertices) throw ConfigError("edge endpoint out of range");
    uniq.insert({std::min(a, b), std::max(a, b)});
  }
  ConflictGraph g;
  g.num_vertices = num_vertices;
  g.edges.assign(uniq.begin(), uniq.end());
  g.adj.assign(num_vertices, {});
  for (auto [a, b] : g.edges) {
    g.adj[a].push_back(b);
    g.adj[b].push_back(a);
  }
  for (auto& n : g.adj) std::sort(n.begin(), n.end());
  return g;
}

ConflictGraph build_conflict_graph(const Topology& topo) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& cl : topo.clusters)
    for (std::size_t a = 0; a < cl.size(); ++a)
      for (std::size_t b = a + 1; b < cl.size(); ++b) edges.emplace_back(cl[a], cl[b]);
  return ConflictGraph::from_edges(topo.num_rrh(), edges);
}

PilotAssignment dsatur_color(const ConflictGraph& g, int n_max, int antennas) {
  if (n_max < 1) throw ConfigError("n_max must be >= 1");
  const int n = g.num_vertices;
  PilotAssignment pa;
  pa.color.assign(n, -1);
  std::vector<std::set<int>> neighbour_colors(n);
  std::vector<int> class_size;

  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (pa.color[v] >= 0) continue;
      if (pick < 0) {
        pick = v;
        continue;
      }
      const auto sv = neighbour_colors[v].size(), sp = neighbour_colors[pick].size();
      if (sv > sp || (sv == sp && g.degree(v) > g.degree(pick))) pick = v;
    }
    int c = 0;
    while (c < static_cast<int>(class_size.size()) && (neighbour_colors[pick].count(c) || class_size[c] >= n_max)) ++c;
    if (c == static_cast<int>(class_size.size())) class_size.push_back(0);
    pa.color[pick] = c;
    ++class_size[c];
    for (int u : g.adj[pick]) neighbour_colors[u].insert(c);
  }

  pa.num_colors = static_cast<int>(class_size.size());
  pa.tau = antennas * pa.num_colors;
  pa.reuse_sets.assign(pa.num_colors, {});
  for (int v = 0; v < n; ++v) pa.reuse_sets[pa.color[v]].push_back(v);
  return pa;
}

int count_pilot_violations(const ConflictGraph& g, const PilotAssignment& pa, int n_max) {
  int bad = 0;
  for (auto [a, b] : g.edges)
    if (pa.color[a] == pa.color[b]) ++bad;
  for (const auto& s : pa.reuse_sets)
    if (static_cast<int>(s.size()) > n_max) ++bad;
  return bad;
}

CMat pilot_matrix(const PilotAssignment& pa, int i, int antennas) {
  CMat x = CMat::Zero(pa.tau, antennas);
  for (int m = 0; m < antennas; ++m) x(pa.color[i] * antennas + m, m) = 1.0;
  return x;
}

}  // namespace udcran
