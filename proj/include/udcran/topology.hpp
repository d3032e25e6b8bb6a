// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#pragma once

#include "udcran/common.hpp"

#include <cstdint>
#include <vector>

namespace udcran {

/// Deployment parameters. Defaults are the 400 m x 400 m small scenario.
struct NetworkConfig {
  double area_side_m = 400.0;
  int num_rrh = 14;
  int num_ue = 8;
  int antennas = 2;
  int cluster_size = 3;
  double pathloss_intercept_db = 148.1;
  double pathloss_slope = 37.6;
  double shadow_std_db = 8.0;
  std::uint64_t seed = 1;

  /// Throws ConfigError unless I >= 1, K >= 1, 1 <= L <= I and M >= 2.
  void validate() const;

  static NetworkConfig small_scenario();
  static NetworkConfig large_scenario();
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// RRH/UE layout with large-scale gains and user-centric clusters.
///
/// alpha(i, k) is the linear power gain from RRH i to UE k. clusters[k] lists
/// the serving candidates of UE k, nearest first; served[i] is the inverse map.
struct Topology {
  int antennas = 2;
  std::vector<Point> rrh_pos;
  std::vector<Point> ue_pos;
  RMat alpha;
  std::vector<std::vector<int>> clusters;
  std::vector<std::vector<int>> served;

  int num_rrh() const { return static_cast<int>(rrh_pos.size()); }
  int num_ue() const { return static_cast<int>(ue_pos.size()); }
  int cluster_size(int k) const { return static_cast<int>(clusters[k].size()); }
  /// Length of the stacked beamformer of UE k, M * |I_k|.
  int stacked_dim(int k) const { return antennas * cluster_size(k); }
  /// Position of RRH i inside clusters[k], or -1.
  int position_in_cluster(int i, int k) const;
  bool in_cluster(int i, int k) const { return position_in_cluster(i, k) >= 0; }

  /// Builds the served sets from clusters and checks index ranges.
  void rebuild_served();

  /// Assembles a topology from explicit parts (positions may be empty).
  static Topology from_parts(int antennas, RMat alpha, std::vector<std::vector<int>> clusters);
};

inline constexpr double kMinDistanceM = 10.0;

/// 148.1 + 37.6 log10(d_km) style path loss, distance floored at 10 m.
double pathloss_db(double distance_m, double intercept_db = 148.1, double slope = 37.6);

double distance(const Point& a, const Point& b);

Topology generate_topology(const NetworkConfig& cfg);

}  // namespace udcran
