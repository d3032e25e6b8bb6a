// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The udcran Authors

#include "udcran/io.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace udcran::io {
namespace {

using Json = nlohmann::ordered_json;

Json complex_array(const CVec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    a.push_back(v(i).real());
    a.push_back(v(i).imag());
  }
  return a;
}

Json matrix(const CMat& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data.push_back(m(r, c).real());
      data.push_back(m(r, c).imag());
    }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Json matrix(const RMat& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

RMat real_matrix_from(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const Json& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols))
    throw ConfigError("matrix data does not match its shape");
  RMat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r * cols + c)].get<double>();
  return m;
}

Json vec(const RVec& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

Json points(const std::vector<Point>& ps) {
  Json a = Json::array();
  for (const auto& p : ps) a.push_back(Json::array({p.x, p.y}));
  return a;
}

std::vector<Point> points_from(const Json& a) {
  std::vector<Point> ps;
  for (const auto& p : a) ps.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return ps;
}

Json beams(const BeamSet& b) {
  Json a = Json::array();
  for (const auto& w : b.w) a.push_back(complex_array(w));
  return a;
}

Json report_json(const SolveReport& r) {
  Json kkt{{"primal", r.kkt.primal},
           {"dual", r.kkt.dual},
           {"stationarity", r.kkt.stationarity},
           {"complementarity", r.kkt.complementarity}};
  Json mult{{"power", vec(r.dual.lambda)}, {"fronthaul", vec(r.dual.mu)}, {"sinr", vec(r.dual.upsilon)}};
  return Json{{"ues", r.ues},
              {"objective_mw", r.objective},
              {"initial_objective_mw", r.initial_objective},
              {"trace", r.trace},
              {"iterations", r.iterations},
              {"dual_iterations", r.dual_iterations},
              {"converged", r.converged},
              {"restarts", r.restarts},
              {"pruned_links", r.pruned_links},
              {"rrh_power_mw", vec(r.rrh_power)},
              {"multipliers", std::move(mult)},
              {"kkt", std::move(kkt)},
              {"beams", beams(r.beams)}};
}

template <class T>
std::vector<std::string> names(const std::vector<T>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

// Applies the handlers of the keys present in obj; any other key is an error.
void read_object(const Json& obj, const std::string& where,
                 const std::map<std::string, std::function<void(const Json&)>>& handlers) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const auto h = handlers.find(it.key());
    if (h == handlers.end()) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    try {
      h->second(it.value());
    } catch (const Json::exception& e) {
      throw ConfigError("bad value for '" + it.key() + "' in " + where + ": " + e.what());
    }
  }
}

template <class T>
std::function<void(const Json&)> set(T& field) {
  return [&field](const Json& j) { field = j.get<T>(); };
}

}  // namespace

std::string to_string(DualMethod m) { return m == DualMethod::Ellipsoid ? "ellipsoid" : "newton"; }

DualMethod dual_method_from_string(const std::string& s) {
  if (s == "newton") return DualMethod::ProjectedNewton;
  if (s == "ellipsoid") return DualMethod::Ellipsoid;
  throw ConfigError("unknown dual method: " + s);
}

std::string to_json(const Topology& topo) {
  Json j{{"antennas", topo.antennas},
         {"rrh_positions_m", points(topo.rrh_pos)},
         {"ue_positions_m", points(topo.ue_pos)},
         {"alpha", matrix(topo.alpha)},
         {"clusters", topo.clusters}};
  return j.dump(2);
}

Topology topology_from_json(const std::string& text) {
  const Json j = parse(text);
  try {
    Topology t = Topology::from_parts(j.at("antennas").get<int>(), real_matrix_from(j.at("alpha")),
                                      j.at("clusters").get<std::vector<std::vector<int>>>());
    if (j.contains("rrh_positions_m")) t.rrh_pos = points_from(j.at("rrh_positions_m"));
    if (j.contains("ue_positions_m")) t.ue_pos = points_from(j.at("ue_positions_m"));
    if (t.num_rrh() != t.alpha.rows() || t.num_ue() != t.alpha.cols())
      throw ConfigError("position lists do not match the alpha matrix");
    return t;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed topology: ") + e.what());
  }
}

std::string to_json(const PilotAssignment& pa) {
  Json j{{"tau", pa.tau}, {"num_colors", pa.num_colors}, {"color", pa.color}, {"reuse_sets", pa.reuse_sets}};
  return j.dump(2);
}

PilotAssignment pilots_from_json(const std::string& text) {
  const Json j = parse(text);
  try {
    PilotAssignment pa;
    pa.tau = j.at("tau").get<int>();
    pa.num_colors = j.at("num_colors").get<int>();
    pa.color = j.at("color").get<std::vector<int>>();
    pa.reuse_sets = j.at("reuse_sets").get<std::vector<std::vector<int>>>();
    for (int c : pa.color)
      if (c < 0 || c >= pa.num_colors) throw ConfigError("pilot colour out of range");
    return pa;
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed pilot assignment: ") + e.what());
  }
}

std::string to_json(const ChannelDraw& draw) {
  Json pairs = Json::array();
  for (int i = 0; i < draw.num_rrh; ++i)
    for (int k = 0; k < draw.num_ue; ++k) {
      const int idx = draw.index(i, k);
      Json p{{"rrh", i}, {"ue", k}, {"h", complex_array(draw.h[idx])}};
      if (draw.h_hat[idx].size() > 0) {
        p["h_hat"] = complex_array(draw.h_hat[idx]);
        p["e"] = complex_array(draw.e[idx]);
      }
      pairs.push_back(std::move(p));
    }
  return Json{{"num_rrh", draw.num_rrh}, {"num_ue", draw.num_ue}, {"pairs", std::move(pairs)}}.dump(2);
}

std::string to_json(const FeedbackState& fb) {
  Json pairs = Json::array();
  for (int i = 0; i < fb.num_rrh; ++i)
    for (int k = 0; k < fb.num_ue; ++k) {
      const PairFeedback& p = fb.at(i, k);
      if (!p.valid) continue;
      pairs.push_back(Json{{"rrh", i},
                           {"ue", k},
                           {"b_cdi", p.b_cdi},
                           {"b_pa", p.b_pa},
                           {"index", p.index},
                           {"codeword", complex_array(p.q)},
                           {"a", p.a},
                           {"phi", p.phi},
                           {"phi_hat", p.phi_hat}});
    }
  return Json{{"num_rrh", fb.num_rrh}, {"num_ue", fb.num_ue}, {"perfect_pa", fb.perfect_pa}, {"pairs", std::move(pairs)}}
      .dump(2);
}

std::string to_json(const StatSet& s) {
  Json ues = Json::array();
  for (int k = 0; k < s.num_ue; ++k) {
    Json interference = Json::array();
    for (int l = 0; l < s.num_ue; ++l)
      if (l != k) interference.push_back(Json{{"from", l}, {"A", matrix(s.A_lk(l, k))}});
    ues.push_back(Json{{"ue", k},
                       {"cluster", s.clusters[k]},
                       {"A_kk", matrix(s.A_kk[k])},
                       {"E_kk", matrix(s.E_kk[k])},
                       {"seed_direction", complex_array(s.seed_dir[k])},
                       {"interference", std::move(interference)}});
  }
  return Json{{"belief", to_string(s.belief)},
              {"antennas", s.antennas},
              {"num_rrh", s.num_rrh},
              {"num_ue", s.num_ue},
              {"noise_mw", s.noise_mw},
              {"ues", std::move(ues)}}
      .dump(2);
}

std::string to_json(const SolveReport& report) { return report_json(report).dump(2); }

std::string to_json(const AdmissionResult& r) {
  return Json{{"method", to_string(r.method)},
              {"admitted", r.admitted},
              {"slacks", vec(r.slacks)},
              {"p8_solve_count", r.p8_solve_count}}
      .dump(2);
}

std::string admission_to_csv(const AdmissionResult& r, int num_ue) {
  std::ostringstream os;
  os.precision(17);
  os << "ue,admitted,slack\n";
  for (int k = 0; k < num_ue; ++k) {
    const bool in = std::find(r.admitted.begin(), r.admitted.end(), k) != r.admitted.end();
    os << k << ',' << (in ? 1 : 0) << ',' << (k < r.slacks.size() ? r.slacks(k) : 0.0) << '\n';
  }
  os << "solves," << r.p8_solve_count << ",\n";
  return os.str();
}

std::string to_json(const ExperimentConfig& c) {
  const NetworkConfig& n = c.network;
  const SolverOptions& s = c.solver;
  Json j{{"network",
          {{"area_side_m", n.area_side_m},
           {"num_rrh", n.num_rrh},
           {"num_ue", n.num_ue},
           {"antennas", n.antennas},
           {"cluster_size", n.cluster_size},
           {"pathloss_intercept_db", n.pathloss_intercept_db},
           {"pathloss_slope", n.pathloss_slope},
           {"shadow_std_db", n.shadow_std_db}}},
         {"feedback",
          {{"b_cdi", c.feedback.b_cdi},
           {"b_pa", c.feedback.b_pa},
           {"codebook_seed", c.feedback.codebook_seed},
           {"perfect_pa", c.feedback.perfect_pa}}},
         {"frame_slots", c.frame_slots},
         {"r_min", c.r_min},
         {"c_max_norm", c.c_max_norm},
         {"p_max_mw", c.p_max_mw},
         {"pilot_power_mw", c.pilot_power_mw},
         {"bandwidth_hz", c.bandwidth_hz},
         {"noise_density_dbm_hz", c.noise_density_dbm_hz},
         {"n_max", c.n_max},
         {"simulate_pilots", c.simulate_pilots},
         {"trials", c.trials},
         {"base_seed", c.base_seed},
         {"sweep", {{"axis", to_string(c.sweep_axis)}, {"values", c.sweep_values}}},
         {"methods", names(c.methods)},
         {"beliefs", names(c.beliefs)},
         {"init", to_string(c.init)},
         {"solver",
          {{"theta", s.theta},
           {"delta_tol", s.delta_tol},
           {"tol_feas", s.tol_feas},
           {"tol_cs", s.tol_cs},
           {"max_outer", s.max_outer},
           {"dual_method", to_string(s.method)},
           {"reseed_fraction", s.reseed_fraction},
           {"slack_power_weight", s.slack_power_weight},
           {"slack_tol", s.slack_tol}}},
         {"exhaustive_limit", c.exhaustive_limit},
         {"threads", c.threads}};
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  const Json j = parse(text);
  ExperimentConfig c;
  NetworkConfig& n = c.network;
  SolverOptions& s = c.solver;
  read_object(j, "config",
              {{"network",
                [&](const Json& v) {
                  read_object(v, "network",
                              {{"area_side_m", set(n.area_side_m)},
                               {"num_rrh", set(n.num_rrh)},
                               {"num_ue", set(n.num_ue)},
                               {"antennas", set(n.antennas)},
                               {"cluster_size", set(n.cluster_size)},
                               {"pathloss_intercept_db", set(n.pathloss_intercept_db)},
                               {"pathloss_slope", set(n.pathloss_slope)},
                               {"shadow_std_db", set(n.shadow_std_db)}});
                }},
               {"feedback",
                [&](const Json& v) {
                  read_object(v, "feedback",
                              {{"b_cdi", set(c.feedback.b_cdi)},
                               {"b_pa", set(c.feedback.b_pa)},
                               {"codebook_seed", set(c.feedback.codebook_seed)},
                               {"perfect_pa", set(c.feedback.perfect_pa)}});
                }},
               {"frame_slots", set(c.frame_slots)},
               {"r_min", set(c.r_min)},
               {"c_max_norm", set(c.c_max_norm)},
               {"p_max_mw", set(c.p_max_mw)},
               {"pilot_power_mw", set(c.pilot_power_mw)},
               {"bandwidth_hz", set(c.bandwidth_hz)},
               {"noise_density_dbm_hz", set(c.noise_density_dbm_hz)},
               {"n_max", set(c.n_max)},
               {"simulate_pilots", set(c.simulate_pilots)},
               {"trials", set(c.trials)},
               {"base_seed", set(c.base_seed)},
               {"sweep",
                [&](const Json& v) {
                  read_object(v, "sweep",
                              {{"axis", [&](const Json& a) { c.sweep_axis = sweep_axis_from_string(a.get<std::string>()); }},
                               {"values", set(c.sweep_values)}});
                }},
               {"methods",
                [&](const Json& v) {
                  c.methods.clear();
                  for (const auto& m : v) c.methods.push_back(admission_method_from_string(m.get<std::string>()));
                }},
               {"beliefs",
                [&](const Json& v) {
                  c.beliefs.clear();
                  for (const auto& b : v) c.beliefs.push_back(belief_from_string(b.get<std::string>()));
                }},
               {"init", [&](const Json& v) { c.init = init_scheme_from_string(v.get<std::string>()); }},
               {"solver",
                [&](const Json& v) {
                  read_object(v, "solver",
                              {{"theta", set(s.theta)},
                               {"delta_tol", set(s.delta_tol)},
                               {"tol_feas", set(s.tol_feas)},
                               {"tol_cs", set(s.tol_cs)},
                               {"max_outer", set(s.max_outer)},
                               {"dual_method", [&](const Json& m) { s.method = dual_method_from_string(m.get<std::string>()); }},
                               {"reseed_fraction", set(s.reseed_fraction)},
                               {"slack_power_weight", set(s.slack_power_weight)},
                               {"slack_tol", set(s.slack_tol)}});
                }},
               {"exhaustive_limit", set(c.exhaustive_limit)},
               {"threads", set(c.threads)}});
  c.validate();
  return c;
}

std::string records_to_json(const std::vector<TrialRecord>& records) {
  Json a = Json::array();
  for (const auto& r : records) {
    Json rec{{"seed", r.seed},
             {"trial", r.trial},
             {"sweep_axis", to_string(r.sweep_axis)},
             {"sweep_value", r.sweep_value},
             {"method", to_string(r.method)},
             {"belief", to_string(r.belief)},
             {"admitted", r.admitted},
             {"p8_solves", r.p8_solves},
             {"power_mw", r.power_mw},
             {"rates", r.rates},
             {"ok", r.ok}};
    if (!r.error.empty()) rec["error"] = r.error;
    if (r.report.iterations > 0) rec["report"] = report_json(r.report);
    a.push_back(std::move(rec));
  }
  return a.dump(1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
  if (!out) throw ConfigError("write failed for " + path);
}

}  // namespace udcran::io
