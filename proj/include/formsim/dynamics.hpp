#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "formsim/angles.hpp"
#include "formsim/integrate.hpp"

namespace formsim {

inline void require_finite(double value, const char* field) {
  if (!std::isfinite(value))
    throw std::invalid_argument(std::string("non-finite value in field '") + field + "'");
}

// Pose and forward speed of one unicycle agent, in the world frame.
struct AgentState {
  double x = 0.0;    // m
  double y = 0.0;    // m
  double phi = 0.0;  // heading, rad, kept in (-pi, pi]
  double v = 0.0;    // m/s, kept in [0, v_max]
};

struct ControlInput {
  double u = 0.0;      // forward acceleration, m/s^2
  double omega = 0.0;  // heading rate, rad/s
};

struct ActuationLimits {
  double v_max = 1.0;
  double u_max = 0.5;
  double omega_max = 2.0;
  // bound on the frame-projected acceleration components
  double a_max() const { return u_max + v_max * omega_max; }
  bool valid() const { return v_max > 0.0 && u_max > 0.0 && omega_max > 0.0; }
};

inline ControlInput clamp_input(const ControlInput& in, const ActuationLimits& lim) {
  return {std::clamp(in.u, -lim.u_max, lim.u_max),
          std::clamp(in.omega, -lim.omega_max, lim.omega_max)};
}

// Sensor view of a predecessor in the follower's body frame.
struct RelativeMeasurement {
  double d = 0.0;      // Euclidean distance, m
  double theta = 0.0;  // line-of-sight bearing in the body frame, rad
  double d_x = 0.0;    // d*cos(theta), m
  double d_y = 0.0;    // d*sin(theta), m
};

inline RelativeMeasurement measurement_from_polar(double d, double theta) {
  return {d, theta, d * std::cos(theta), d * std::sin(theta)};
}

// Ground-truth predecessor velocity and acceleration projected into the
// follower's frame. Verifier-side only; the control path never sees it.
struct TruthProjection {
  double v1x = 0.0;  // m/s
  double v1y = 0.0;  // m/s
  double a_x = 0.0;  // m/s^2
  double a_y = 0.0;  // m/s^2
};

inline std::array<double, 4> unicycle_rates(const std::array<double, 4>& s,
                                            const ControlInput& in) {
  return {s[3] * std::cos(s[2]), s[3] * std::sin(s[2]), in.omega, in.u};
}

// Advances one agent by a single RK4 step with the input held constant.
// Speed is clamped to [0, v_max] and the heading wrapped after the step.
inline AgentState step_agent(const AgentState& state, const ControlInput& input, double dt,
                             const ActuationLimits& limits) {
  require_finite(state.x, "state.x");
  require_finite(state.y, "state.y");
  require_finite(state.phi, "state.phi");
  require_finite(state.v, "state.v");
  require_finite(input.u, "input.u");
  require_finite(input.omega, "input.omega");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const std::array<double, 4> s0{state.x, state.y, state.phi, state.v};
  const std::array<double, 4> s =
      rk4_step(s0, dt, [&](const std::array<double, 4>& s_) { return unicycle_rates(s_, input); });
  AgentState out{s[0], s[1], wrap_angle(s[2]), std::clamp(s[3], 0.0, limits.v_max)};
  return out;
}

// Range/bearing measurement of `predecessor` as seen from `follower`.
inline RelativeMeasurement measure_relative(const AgentState& follower,
                                            const AgentState& predecessor) {
  require_finite(follower.x, "follower.x");
  require_finite(follower.y, "follower.y");
  require_finite(follower.phi, "follower.phi");
  require_finite(predecessor.x, "predecessor.x");
  require_finite(predecessor.y, "predecessor.y");
  const double dx_w = predecessor.x - follower.x;
  const double dy_w = predecessor.y - follower.y;
  const double d = std::hypot(dx_w, dy_w);
  if (d <= 0.0)
    throw std::domain_error("coincident agents: line-of-sight bearing undefined (d = 0)");
  const double theta = wrap_angle(std::atan2(dy_w, dx_w) - follower.phi);
  return measurement_from_polar(d, theta);
}

// Exact body-frame predecessor velocity and projected acceleration.
inline TruthProjection project_truth(const AgentState& follower, const AgentState& predecessor,
                                     const ControlInput& predecessor_input) {
  const double psi = angle_diff(predecessor.phi, follower.phi);
  const double v1x = predecessor.v * std::cos(psi);
  const double v1y = predecessor.v * std::sin(psi);
  const double u1 = predecessor_input.u;
  const double w1 = predecessor_input.omega;
  return {v1x, v1y, u1 * std::cos(psi) - v1y * w1, u1 * std::sin(psi) + v1x * w1};
}

}  // namespace formsim
