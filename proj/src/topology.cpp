// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace udcran {

void NetworkConfig::validate() const {
  if (num_rrh < 1) throw ConfigError("num_rrh must be >= 1");
  if (num_ue < 1) throw ConfigError("num_ue must be >= 1");
  if (cluster_size < 1 || cluster_size > num_rrh) throw ConfigError("cluster_size must be in [1, num_rrh]");
  if (antennas < 2) throw ConfigError("antennas must be >= 2");
  if (!(area_side_m > 0.0)) throw ConfigError("area_side_m must be positive");
  if (shadow_std_db < 0.0) throw ConfigError("shadow_std_db must be non-negative");
}

NetworkConfig NetworkConfig::small_scenario() { return NetworkConfig{}; }

NetworkConfig NetworkConfig::large_scenario() {
  NetworkConfig c;
  c.area_side_m = 700.0;
  c.num_rrh = 42;
  c.num_ue = 24;
  return c;
}

int Topology::position_in_cluster(int i, int k) const {
  const auto& c = clusters[k];
  for (int p = 0; p < static_cast<int>(c.size()); ++p)
    if (c[p] == i) return p;
  return -1;
}

void Topology::rebuild_served() {
  const int num_i = static_cast<int>(alpha.rows());
  served.assign(num_i, {});
  for (int k = 0; k < static_cast<int>(clusters.size()); ++k) {
    if (clusters[k].empty()) throw ConfigError("empty cluster");
    for (int i : clusters[k]) {
      if (i < 0 || i >= num_i) throw ConfigError("cluster references unknown RRH");
      served[i].push_back(k);
    }
  }
}

Topology Topology::from_parts(int antennas, RMat alpha, std::vector<std::vector<int>> clusters) {
  Topology t;
  t.antennas = antennas;
  t.rrh_pos.resize(alpha.rows());
  t.ue_pos.resize(alpha.cols());
  t.alpha = std::move(alpha);
  t.clusters = std::move(clusters);
  if (static_cast<int>(t.clusters.size()) != t.alpha.cols()) throw ConfigError("one cluster per UE required");
  t.rebuild_served();
  return t;
}

double pathloss_db(double distance_m, double intercept_db, double slope) {
  const double d_km = std::max(distance_m, kMinDistanceM) / 1000.0;
  return intercept_db + slope * std::log10(d_km);
}

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Topology generate_topology(const NetworkConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  std::uniform_real_distribution<double> coord(0.0, cfg.area_side_m);
  std::normal_distribution<double> shadow(0.0, cfg.shadow_std_db);

  Topology t;
  t.antennas = cfg.antennas;
  t.rrh_pos.resize(cfg.num_rrh);
  t.ue_pos.resize(cfg.num_ue);
  for (auto& p : t.rrh_pos) {
    p.x = coord(rng);
    p.y = coord(rng);
  }
  for (auto& p : t.ue_pos) {
    p.x = coord(rng);
    p.y = coord(rng);
  }

  t.alpha.resize(cfg.num_rrh, cfg.num_ue);
  for (int k = 0; k < cfg.num_ue; ++k) {
    for (int i = 0; i < cfg.num_rrh; ++i) {
      const double pl = pathloss_db(distance(t.rrh_pos[i], t.ue_pos[k]), cfg.pathloss_intercept_db, cfg.pathloss_slope);
      const double s = cfg.shadow_std_db > 0.0 ? shadow(rng) : 0.0;
      t.alpha(i, k) = db_to_linear(-(pl + s));
    }
  }

  t.clusters.resize(cfg.num_ue);
  std::vector<int> order(cfg.num_rrh);
  for (int k = 0; k < cfg.num_ue; ++k) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return distance(t.rrh_pos[a], t.ue_pos[k]) < distance(t.rrh_pos[b], t.ue_pos[k]);
    });
    t.clusters[k].assign(order.begin(), order.begin() + cfg.cluster_size);
  }
  t.rebuild_served();
  return t;
}

}  // namespace udcran
