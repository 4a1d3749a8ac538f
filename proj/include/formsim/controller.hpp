#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "formsim/dynamics.hpp"
#include "formsim/estimator.hpp"

namespace formsim {

enum class EdgeKind { x_plus, y };

// Per-edge setpoints, safety parameters, and estimate-error budgets.
// X+ edges use d_s (> 0), T, d_star_x, E_u; Y edges use d_s (signed,
// nonzero), d_star_y, E_omega.
struct EdgeControlParams {
  double d_s = 0.0;       // safety distance, m
  double T = 0.0;         // time headway, s
  double d_star_x = 0.0;  // longitudinal setpoint, m
  double d_star_y = 0.0;  // lateral setpoint, m (sign = side)
  double E_u = 0.0;       // longitudinal estimate-error budget, m/s
  double E_omega = 0.0;   // lateral estimate-error budget, m/s

  // tuning constants that cancel the linear terms of the tracking Lyapunov
  // derivatives; both must be nonnegative for the setpoints to be feasible
  double x_c(const EstimatorGains& g) const { return -g.g_d * (d_star_x - d_s) - E_u; }
  double y_c(const EstimatorGains& g) const {
    return std::copysign(1.0, d_s) * (-g.g_d * (d_star_y - d_s)) - E_omega;
  }
};

// Longitudinal safety function h1 = d_x - d_s - T*v.
inline double eval_h1(double d_x, double v, double d_s, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("time headway T must be positive");
  return d_x - d_s - T * v;
}

// Sign-normalized lateral safety function h2 = sign(d_s) * (d_y - d_s).
inline double eval_h2(double d_y, double d_s) {
  if (d_s == 0.0) throw std::invalid_argument("d_s = 0: lateral sign indicator undefined");
  return std::copysign(1.0, d_s) * (d_y - d_s);
}

// Extended class-K map used in both barrier conditions.
inline double class_k(const EstimatorGains& g, double h) { return -g.g_d * h; }

struct FeasibilityCheck {
  std::string name;
  bool satisfied = false;
  double tuning = 0.0;          // x_c or y_c; >= 0 iff feasible
  double limit_setpoint = 0.0;  // minimum (or maximum, mirrored side) admissible setpoint
  std::string message;
};

struct FeasibilityReport {
  std::vector<FeasibilityCheck> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.satisfied) return false;
    return true;
  }
};

// Evaluates the setpoint feasibility inequalities with margins. Failures
// carry the minimum admissible setpoint in the message.
inline FeasibilityReport check_feasibility(const EdgeControlParams& p, const EstimatorGains& g,
                                           EdgeKind kind) {
  FeasibilityReport report;
  if (kind == EdgeKind::x_plus) {
    FeasibilityCheck c;
    c.name = "longitudinal";
    c.tuning = p.x_c(g);
    c.limit_setpoint = p.d_s - p.E_u / g.g_d;
    c.satisfied = c.tuning >= 0.0;
    std::ostringstream msg;
    if (c.satisfied) {
      msg << "d_star_x = " << p.d_star_x << " >= " << c.limit_setpoint << " (x_c = " << c.tuning
          << ")";
    } else {
      msg << "d_star_x = " << p.d_star_x << " below minimum admissible setpoint "
          << c.limit_setpoint << " = d_s - E_u/g_d";
    }
    c.message = msg.str();
    report.checks.push_back(std::move(c));
  } else {
    FeasibilityCheck c;
    c.name = "lateral";
    c.tuning = p.y_c(g);
    c.satisfied = c.tuning >= 0.0;
    std::ostringstream msg;
    if (p.d_s > 0.0) {
      c.limit_setpoint = p.d_s - p.E_omega / g.g_d;
      if (c.satisfied)
        msg << "d_star_y = " << p.d_star_y << " >= " << c.limit_setpoint << " (y_c = " << c.tuning
            << ")";
      else
        msg << "d_star_y = " << p.d_star_y << " below minimum admissible setpoint "
            << c.limit_setpoint << " = d_s - E_omega/g_d";
    } else {
      c.limit_setpoint = p.d_s + p.E_omega / g.g_d;
      if (c.satisfied)
        msg << "d_star_y = " << p.d_star_y << " <= " << c.limit_setpoint << " (y_c = " << c.tuning
            << ")";
      else
        msg << "d_star_y = " << p.d_star_y << " above maximum admissible setpoint "
            << c.limit_setpoint << " = d_s + E_omega/g_d";
    }
    c.message = msg.str();
    report.checks.push_back(std::move(c));
  }
  return report;
}

// Closed-form longitudinal law from the h1 barrier condition:
//   u = (1/T) * (v1x_hat - E_u - x_c - v + d_y*omega + alpha(h1))
// h1 is evaluated on the measured d_x; the returned value is pre-clamp.
inline double control_longitudinal(const EstimatorState& est, const RelativeMeasurement& meas,
                                   double self_v, double self_omega, const EdgeControlParams& p,
                                   const EstimatorGains& g) {
  require_finite(est.v1x_hat, "est.v1x_hat");
  require_finite(meas.d_x, "meas.d_x");
  require_finite(meas.d_y, "meas.d_y");
  require_finite(self_v, "self_v");
  require_finite(self_omega, "self_omega");
  const double h1 = eval_h1(meas.d_x, self_v, p.d_s, p.T);
  const double kappa = 1.0 / p.T;
  return kappa *
         (est.v1x_hat - p.E_u - p.x_c(g) - self_v + meas.d_y * self_omega + class_k(g, h1));
}

struct LateralCommand {
  double omega = 0.0;
  bool geometry_degenerate = false;
};

// |d_x| below this holds the previous command instead of dividing by it.
inline constexpr double kLateralGuardDistance = 0.05;

// Closed-form lateral law from the h2 barrier condition:
//   omega = (v1y_hat - g_d*(d_y - d_s))/d_x - |d_s|*(E_omega + y_c)/(d_s*d_x)
// Pre-clamp. A degenerate longitudinal offset to the Y-edge predecessor
// returns the previous command and raises the geometry flag.
inline LateralCommand control_lateral(const EstimatorState& est, const RelativeMeasurement& meas,
                                      const EdgeControlParams& p, const EstimatorGains& g,
                                      double previous_omega) {
  require_finite(est.v1y_hat, "est.v1y_hat");
  require_finite(meas.d_x, "meas.d_x");
  require_finite(meas.d_y, "meas.d_y");
  if (p.d_s == 0.0) throw std::invalid_argument("d_s = 0: lateral sign indicator undefined");
  if (std::abs(meas.d_x) < kLateralGuardDistance) return {previous_omega, true};
  const double omega = (est.v1y_hat - g.g_d * (meas.d_y - p.d_s)) / meas.d_x -
                       std::abs(p.d_s) * (p.E_omega + p.y_c(g)) / (p.d_s * meas.d_x);
  return {omega, false};
}

// Running barrier evaluation; the minima survive the whole run.
struct SafetyEvaluation {
  double h1 = std::numeric_limits<double>::infinity();
  double h2 = std::numeric_limits<double>::infinity();
  double alpha_h1 = std::numeric_limits<double>::infinity();
  double min_h1_so_far = std::numeric_limits<double>::infinity();
  double min_h2_so_far = std::numeric_limits<double>::infinity();

  void observe_h1(double value, const EstimatorGains& g) {
    h1 = value;
    alpha_h1 = class_k(g, value);
    min_h1_so_far = std::min(min_h1_so_far, value);
  }
  void observe_h2(double value) {
    h2 = value;
    min_h2_so_far = std::min(min_h2_so_far, value);
  }
};

}  // namespace formsim
