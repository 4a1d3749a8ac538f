#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "formsim/dynamics.hpp"

namespace formsim {

enum class ProfileKind {
  constant_velocity,
  circular,
  sinusoid_velocity,
  sinusoid_acceleration,
  piecewise,
};

struct ProfilePoint {
  double t = 0.0;
  double u = 0.0;
  double omega = 0.0;
};

// Scripted input generator for leader (and other non-controlled) agents.
struct LeaderProfile {
  ProfileKind kind = ProfileKind::constant_velocity;
  double cruise_speed = 0.0;  // m/s
  double amplitude = 0.0;     // m/s for velocity sinusoids, m/s^2 for acceleration
  double frequency = 0.0;     // rad/s
  double omega = 0.0;         // rad/s, circular kind
  double ramp_time = 0.0;     // s, acceleration ramp from start_speed to cruise_speed
  bool linear_interp = false;
  std::vector<ProfilePoint> points;  // piecewise kind, ascending t
  double start_speed = 0.0;          // bound from the agent's initial state at load

  ControlInput inputs_at(double t) const {
    switch (kind) {
      case ProfileKind::constant_velocity:
        return {ramp_u(t), 0.0};
      case ProfileKind::circular:
        return {ramp_u(t), omega};
      case ProfileKind::sinusoid_velocity:
        return {amplitude * frequency * std::cos(frequency * t), 0.0};
      case ProfileKind::sinusoid_acceleration:
        return {amplitude * std::sin(frequency * t), 0.0};
      case ProfileKind::piecewise:
        return piecewise_at(t);
    }
    return {};
  }

  double ramp_u(double t) const {
    if (ramp_time <= 0.0 || t >= ramp_time) return 0.0;
    return (cruise_speed - start_speed) / ramp_time;
  }

  ControlInput piecewise_at(double t) const {
    if (points.empty()) throw std::invalid_argument("piecewise profile has no points");
    if (t <= points.front().t) return {points.front().u, points.front().omega};
    if (t >= points.back().t) return {points.back().u, points.back().omega};
    std::size_t hi = 1;
    while (hi < points.size() && points[hi].t <= t) ++hi;
    const ProfilePoint& a = points[hi - 1];
    const ProfilePoint& b = points[hi];
    if (!linear_interp) return {a.u, a.omega};
    const double w = (t - a.t) / (b.t - a.t);
    return {a.u + w * (b.u - a.u), a.omega + w * (b.omega - a.omega)};
  }
};

}  // namespace formsim
