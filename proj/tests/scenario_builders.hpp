#pragma once

// Programmatic scenario builders shared by the harness and metrics tests.

#include "formsim/scenario.hpp"

namespace formsim::testing {

inline EdgeControlParams x_params(double d_s, double t_headway, double d_star, double budget) {
  EdgeControlParams p;
  p.d_s = d_s;
  p.T = t_headway;
  p.d_star_x = d_star;
  p.E_u = budget;
  return p;
}

inline EdgeControlParams y_params(double d_s, double d_star, double budget) {
  EdgeControlParams p;
  p.d_s = d_s;
  p.d_star_y = d_star;
  p.E_omega = budget;
  return p;
}

// Staggered diamond at straight-line cruise 0.5 m/s; followers start exactly
// on their setpoints unless offsets are supplied.
inline ScenarioConfig diamond_config(double duration, const LeaderProfile& leader_profile,
                                     double offset = 0.0) {
  ScenarioConfig cfg;
  cfg.name = "diamond";
  cfg.dt = 0.01;
  cfg.duration = duration;
  cfg.transient = 0.2 * duration;
  cfg.limits = {1.0, 0.5, 2.0};
  cfg.g_d = -15.0;
  cfg.a_eff = 0.5;

  LeaderProfile prof = leader_profile;
  prof.start_speed = 0.5;
  cfg.graph.agents.push_back({"L", {0.0, 0.0, 0.0, 0.5}, prof});
  cfg.graph.agents.push_back({"F1", {-0.5 - offset, 0.4 + offset, 0.0, 0.5}, std::nullopt});
  cfg.graph.agents.push_back({"F2", {-0.8 - offset, -0.4 - offset, 0.0, 0.5}, std::nullopt});
  cfg.graph.agents.push_back({"F3", {-1.3 - offset, 0.0 + offset, 0.0, 0.5}, std::nullopt});
  cfg.graph.x_edges.push_back({"F1", "L", x_params(0.3, 0.2, 0.4, 1.4)});
  cfg.graph.x_edges.push_back({"F2", "L", x_params(0.3, 0.2, 0.7, 1.4)});
  cfg.graph.x_edges.push_back({"F3", "F2", x_params(0.3, 0.2, 0.4, 1.4)});
  cfg.graph.y_edges.push_back({"F1", "L", y_params(-0.3, -0.4, 1.4)});
  cfg.graph.y_edges.push_back({"F2", "F1", y_params(0.3, 0.8, 1.4)});
  cfg.graph.y_edges.push_back({"F3", "F1", y_params(0.3, 0.4, 1.4)});
  return cfg;
}

// Two scripted agents; the observer watches the target through one estimator.
inline ScenarioConfig observer_pair_config(double duration, const LeaderProfile& observer_prof,
                                           const LeaderProfile& target_prof,
                                           bool observe_both = false) {
  ScenarioConfig cfg;
  cfg.name = "observer_pair";
  cfg.dt = 0.01;
  cfg.duration = duration;
  cfg.transient = 0.2 * duration;
  cfg.limits = {1.0, 0.5, 2.0};
  cfg.g_d = -15.0;
  cfg.a_eff = 0.5;
  cfg.graph.agents.push_back({"OBS", {0.0, 0.0, 0.0, 0.0}, observer_prof});
  cfg.graph.agents.push_back({"TGT", {1.5, 0.0, 0.0, 0.0}, target_prof});
  cfg.graph.observer_edges.push_back({"OBS", "TGT"});
  if (observe_both) cfg.graph.observer_edges.push_back({"TGT", "OBS"});
  return cfg;
}

inline LeaderProfile constant_profile() {
  LeaderProfile p;
  p.kind = ProfileKind::constant_velocity;
  return p;
}

inline LeaderProfile circular_profile(double omega) {
  LeaderProfile p;
  p.kind = ProfileKind::circular;
  p.omega = omega;
  return p;
}

inline LeaderProfile piecewise_profile(std::vector<ProfilePoint> points, bool linear = false) {
  LeaderProfile p;
  p.kind = ProfileKind::piecewise;
  p.points = std::move(points);
  p.linear_interp = linear;
  return p;
}

inline LeaderProfile velocity_sinusoid(double amplitude, double frequency) {
  LeaderProfile p;
  p.kind = ProfileKind::sinusoid_velocity;
  p.cruise_speed = 0.5;
  p.amplitude = amplitude;
  p.frequency = frequency;
  return p;
}

}  // namespace formsim::testing
