#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "formsim/estimator.hpp"
#include "formsim/formation.hpp"
#include "formsim/lyapunov.hpp"

namespace formsim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoiseParams {
  double d_std = 0.0;      // m
  double theta_std = 0.0;  // rad
  bool enabled() const { return d_std > 0.0 || theta_std > 0.0; }
};

// Full scenario description, loaded from a JSON config file.
struct ScenarioConfig {
  std::string name;
  double dt = 0.01;
  double duration = 0.0;
  double transient = -1.0;  // < 0: defaults to 20% of duration
  std::uint64_t seed = 0;
  ActuationLimits limits;
  double g_d = 0.0;
  double a_eff = -1.0;  // < 0: defaults to u_max
  NoiseParams noise;
  FormationGraph graph;

  double transient_time() const { return transient >= 0.0 ? transient : 0.2 * duration; }
  double a_eff_value() const { return a_eff > 0.0 ? a_eff : limits.u_max; }
  long step_count() const { return std::lround(duration / dt); }
};

namespace detail {

using nlohmann::json;

inline const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError("missing key '" + path + key + "'");
  return j.at(key);
}

inline double num(const json& j, const char* key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_number()) throw ConfigError("key '" + path + key + "' must be a number");
  return v.get<double>();
}

inline double num_or(const json& j, const char* key, const std::string& path, double fallback) {
  if (!j.contains(key)) return fallback;
  return num(j, key, path);
}

inline std::string str(const json& j, const char* key, const std::string& path) {
  const json& v = member(j, key, path);
  if (!v.is_string()) throw ConfigError("key '" + path + key + "' must be a string");
  return v.get<std::string>();
}

inline LeaderProfile parse_profile(const json& j, const std::string& path) {
  LeaderProfile p;
  const std::string kind = str(j, "kind", path);
  if (kind == "constant_velocity")
    p.kind = ProfileKind::constant_velocity;
  else if (kind == "circular")
    p.kind = ProfileKind::circular;
  else if (kind == "sinusoid_velocity")
    p.kind = ProfileKind::sinusoid_velocity;
  else if (kind == "sinusoid_acceleration")
    p.kind = ProfileKind::sinusoid_acceleration;
  else if (kind == "piecewise")
    p.kind = ProfileKind::piecewise;
  else
    throw ConfigError("key '" + path + "kind' has unknown profile kind '" + kind + "'");
  p.cruise_speed = num_or(j, "cruise_speed", path, 0.0);
  p.amplitude = num_or(j, "amplitude", path, 0.0);
  p.frequency = num_or(j, "frequency", path, 0.0);
  p.omega = num_or(j, "omega", path, 0.0);
  p.ramp_time = num_or(j, "ramp_time", path, 0.0);
  if (j.contains("interpolation")) {
    const std::string interp = str(j, "interpolation", path);
    if (interp == "linear")
      p.linear_interp = true;
    else if (interp == "step")
      p.linear_interp = false;
    else
      throw ConfigError("key '" + path + "interpolation' must be 'step' or 'linear'");
  }
  if (p.kind == ProfileKind::piecewise) {
    const json& pts = member(j, "points", path);
    if (!pts.is_array() || pts.empty())
      throw ConfigError("key '" + path + "points' must be a non-empty array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string ppath = path + "points[" + std::to_string(i) + "].";
      ProfilePoint pt;
      pt.t = num(pts[i], "t", ppath);
      pt.u = num_or(pts[i], "u", ppath, 0.0);
      pt.omega = num_or(pts[i], "omega", ppath, 0.0);
      if (!p.points.empty() && pt.t < p.points.back().t)
        throw ConfigError("key '" + path + "points' must have ascending times");
      p.points.push_back(pt);
    }
  } else if ((p.kind == ProfileKind::sinusoid_velocity ||
              p.kind == ProfileKind::sinusoid_acceleration) &&
             !(p.frequency > 0.0)) {
    throw ConfigError("key '" + path + "frequency' must be positive for sinusoid profiles");
  }
  return p;
}

inline EdgeControlParams parse_edge_params(const json& j, const std::string& path, EdgeKind kind) {
  EdgeControlParams p;
  p.d_s = num(j, "d_s", path);
  if (kind == EdgeKind::x_plus) {
    p.T = num(j, "T", path);
    p.d_star_x = num(j, "d_star_x", path);
    p.E_u = num(j, "E_u", path);
  } else {
    p.d_star_y = num(j, "d_star_y", path);
    p.E_omega = num(j, "E_omega", path);
  }
  return p;
}

}  // namespace detail

inline ScenarioConfig parse_scenario(const nlohmann::json& j) {
  using detail::member;
  using detail::num;
  using detail::num_or;
  using detail::str;

  ScenarioConfig cfg;
  cfg.name = j.contains("name") ? detail::str(j, "name", "") : "scenario";
  cfg.dt = num_or(j, "dt", "", 0.01);
  cfg.duration = num(j, "duration", "");
  cfg.transient = num_or(j, "transient", "", -1.0);
  if (j.contains("seed")) {
    const auto& s = j.at("seed");
    if (!s.is_number_integer()) throw ConfigError("key 'seed' must be an integer");
    cfg.seed = s.get<std::uint64_t>();
  }

  const auto& lim = member(j, "limits", "");
  cfg.limits.v_max = num(lim, "v_max", "limits.");
  cfg.limits.u_max = num(lim, "u_max", "limits.");
  cfg.limits.omega_max = num(lim, "omega_max", "limits.");

  cfg.g_d = num(member(j, "gains", ""), "g_d", "gains.");
  cfg.a_eff = num_or(j, "a_eff", "", -1.0);

  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    cfg.noise.d_std = num_or(n, "d_std", "noise.", 0.0);
    cfg.noise.theta_std = num_or(n, "theta_std", "noise.", 0.0);
  }

  const auto& agents = member(j, "agents", "");
  if (!agents.is_array()) throw ConfigError("key 'agents' must be an array");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string path = "agents[" + std::to_string(i) + "].";
    AgentSpec a;
    a.id = str(agents[i], "id", path);
    const auto& start = member(agents[i], "start", path);
    a.start.x = num(start, "x", path + "start.");
    a.start.y = num(start, "y", path + "start.");
    a.start.phi = num_or(start, "phi", path + "start.", 0.0);
    a.start.v = num_or(start, "v", path + "start.", 0.0);
    if (agents[i].contains("profile")) {
      a.profile = detail::parse_profile(agents[i].at("profile"), path + "profile.");
      a.profile->start_speed = a.start.v;
    }
    cfg.graph.agents.push_back(std::move(a));
  }

  auto parse_edges = [&](const char* key, EdgeKind kind, std::vector<ControlEdge>* out) {
    if (!j.contains(key)) return;
    const auto& arr = j.at(key);
    if (!arr.is_array()) throw ConfigError(std::string("key '") + key + "' must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = std::string(key) + "[" + std::to_string(i) + "].";
      ControlEdge e;
      e.follower = str(arr[i], "follower", path);
      e.predecessor = str(arr[i], "predecessor", path);
      e.params = detail::parse_edge_params(arr[i], path, kind);
      out->push_back(std::move(e));
    }
  };
  parse_edges("x_edges", EdgeKind::x_plus, &cfg.graph.x_edges);
  parse_edges("y_edges", EdgeKind::y, &cfg.graph.y_edges);

  if (j.contains("observer_edges")) {
    const auto& arr = j.at("observer_edges");
    if (!arr.is_array()) throw ConfigError("key 'observer_edges' must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "observer_edges[" + std::to_string(i) + "].";
      cfg.graph.observer_edges.push_back(
          {str(arr[i], "observer", path), str(arr[i], "target", path)});
    }
  }
  return cfg;
}

inline ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("parse error in '" + path + "': " + e.what());
  }
  return parse_scenario(j);
}

// Whole-config validation: temporal grid, limits, gain admissibility, the
// Hurwitz/Lyapunov certificate, and the graph constraints.
inline ValidationReport validate_scenario(const ScenarioConfig& cfg) {
  ValidationReport rep;
  auto err = [&rep](const std::string& m) { rep.errors.push_back(m); };

  if (!(cfg.dt > 0.0)) err("dt must be positive");
  if (!(cfg.duration > 0.0)) err("duration must be positive");
  if (cfg.dt > 0.0 && cfg.duration > 0.0) {
    const double steps = cfg.duration / cfg.dt;
    if (std::abs(steps - std::lround(steps)) > 1e-6)
      err("duration must be an integral number of dt steps");
  }
  if (cfg.transient >= 0.0 && cfg.transient > cfg.duration)
    err("transient window exceeds the duration");
  if (!cfg.limits.valid()) err("actuation limits must all be positive");
  if (cfg.noise.d_std < 0.0 || cfg.noise.theta_std < 0.0)
    err("noise standard deviations must be nonnegative");
  for (const auto& a : cfg.graph.agents) {
    if (!std::isfinite(a.start.x) || !std::isfinite(a.start.y) || !std::isfinite(a.start.phi) ||
        !std::isfinite(a.start.v))
      err("agent '" + a.id + "' has a non-finite start state");
    else if (a.start.v < 0.0 || a.start.v > cfg.limits.v_max)
      err("agent '" + a.id + "' starts outside the speed range [0, v_max]");
  }

  EstimatorGains gains;
  bool gains_ok = false;
  try {
    gains = derive_gains(cfg.g_d);
    gains_ok = true;
  } catch (const std::exception& e) {
    err(e.what());
  }
  if (gains_ok) {
    try {
      solve_lyapunov(error_matrix(gains, 0.0), Eigen::Matrix4d::Identity());
    } catch (const std::exception& e) {
      err(std::string("Lyapunov certificate failed: ") + e.what());
    }
    const auto graph_rep = validate(cfg.graph, gains);
    for (const auto& m : graph_rep.errors) rep.errors.push_back(m);
  }
  return rep;
}

}  // namespace formsim
