#pragma once

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "formsim/dynamics.hpp"
#include "formsim/integrate.hpp"

namespace formsim {

// Full estimator gain set derived from the single design parameter g_d.
// For g_d < -1.5 the derived set satisfies r = -2p > 1, the characteristic
// relation r^2 + r*g_d - g_v = 0, and the Hurwitz window -g_d^2/4 <= g_v < 0.
struct EstimatorGains {
  double g_d = 0.0;  // 1/s, < 0
  double g_v = 0.0;  // 1/s^2, = -2*g_d^2/9
  double p = 0.0;    // 1/s, = g_d/3
  double r = 0.0;    // = -2*g_d/3, > 1
  double k_d = 0.0;  // = -(|g_v|*g_d + r^2/4), > 0
};

inline EstimatorGains derive_gains(double g_d) {
  require_finite(g_d, "g_d");
  if (!(g_d < 0.0)) throw std::invalid_argument("g_d must be negative");
  const double r = -2.0 * g_d / 3.0;
  if (!(r > 1.0)) {
    std::ostringstream msg;
    msg << "gain constraint r > 1 violated: r = -2*g_d/3 = " << r
        << " (requires g_d < -1.5)";
    throw std::invalid_argument(msg.str());
  }
  EstimatorGains g;
  g.g_d = g_d;
  g.g_v = -2.0 * g_d * g_d / 9.0;
  g.p = g_d / 3.0;
  g.r = r;
  g.k_d = -(std::abs(g.g_v) * g_d + r * r / 4.0);
  return g;
}

// Error-dynamics state matrix A(omega). At omega = 0 each 2x2 block has
// characteristic polynomial lambda^2 - g_d*lambda - g_v, which is Hurwitz
// for the derived gain set.
inline Eigen::Matrix4d error_matrix(const EstimatorGains& g, double omega) {
  Eigen::Matrix4d a;
  a << g.g_d, 1.0, 0.0, 0.0,                      //
      g.g_v, 0.0, g.p * omega, omega,             //
      0.0, 0.0, g.g_d, 1.0,                       //
      -g.p * omega, -omega, g.g_v, 0.0;           //
  return a;
}

// Eigenvalues of A(0) in closed form: the roots of lambda^2 - g_d*lambda - g_v,
// each with multiplicity two. Returned in descending order.
inline std::array<double, 4> a0_eigenvalues(const EstimatorGains& g) {
  const double disc = g.g_d * g.g_d + 4.0 * g.g_v;
  if (disc < 0.0) throw std::domain_error("complex A(0) eigenvalues for the given gains");
  const double s = std::sqrt(disc);
  const double hi = 0.5 * (g.g_d + s);
  const double lo = 0.5 * (g.g_d - s);
  return {hi, hi, lo, lo};
}

// The 4-state estimate of a predecessor in the observer's body frame.
struct EstimatorState {
  double d_x_hat = 0.0;   // m
  double v1x_hat = 0.0;   // m/s
  double d_y_hat = 0.0;   // m
  double v1y_hat = 0.0;   // m/s
  double psi_hat() const { return std::atan2(v1y_hat, v1x_hat); }
  double v1_hat() const { return std::hypot(v1x_hat, v1y_hat); }
};

// Default warm start: position states from the first measurement (zero
// innovation at t = 0), velocity states from the observer's own speed.
inline EstimatorState init_estimator(const RelativeMeasurement& first_meas, double self_v) {
  return {first_meas.d_x, self_v, first_meas.d_y, 0.0};
}

// Truth-minus-estimate errors per channel; filled by verifiers only.
struct EstimationError {
  double e_dx = 0.0;  // m
  double e_vx = 0.0;  // m/s
  double e_dy = 0.0;  // m
  double e_vy = 0.0;  // m/s
};

// Time derivatives of [d_x_hat, v1x_hat, d_y_hat, v1y_hat]. The innovation
// terms (inn = measured - estimated) enter with sign opposite to the gains so
// that the truth-minus-estimate error obeys de/dt = A(omega) e + B a, with
// A(omega) from error_matrix and hence Hurwitz at omega = 0 when g_d < 0.
inline std::array<double, 4> estimator_rates(const std::array<double, 4>& e,
                                             const EstimatorGains& g, double inn_x, double inn_y,
                                             double d_x_meas, double d_y_meas, double self_v,
                                             double self_omega) {
  return {
      e[1] - self_v + d_y_meas * self_omega - g.g_d * inn_x,
      -g.g_v * inn_x + e[3] * self_omega - g.p * self_omega * inn_y,
      e[3] - d_x_meas * self_omega - g.g_d * inn_y,
      -g.g_v * inn_y - e[1] * self_omega + g.p * self_omega * inn_x,
  };
}

// Advances the estimator by one RK4 step. The innovation is evaluated once
// from the supplied measurement at the start of the step and held; with the
// estimate at the exact truth this keeps the step free of spurious correction.
inline EstimatorState estimator_step(const EstimatorState& est, const EstimatorGains& g,
                                     const RelativeMeasurement& meas, double self_v,
                                     double self_omega, double dt) {
  require_finite(est.d_x_hat, "est.d_x_hat");
  require_finite(est.v1x_hat, "est.v1x_hat");
  require_finite(est.d_y_hat, "est.d_y_hat");
  require_finite(est.v1y_hat, "est.v1y_hat");
  require_finite(meas.d, "meas.d");
  require_finite(meas.theta, "meas.theta");
  require_finite(self_v, "self_v");
  require_finite(self_omega, "self_omega");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double inn_x = meas.d_x - est.d_x_hat;
  const double inn_y = meas.d_y - est.d_y_hat;
  const std::array<double, 4> s0{est.d_x_hat, est.v1x_hat, est.d_y_hat, est.v1y_hat};
  const std::array<double, 4> s =
      rk4_step(s0, dt, [&](const std::array<double, 4>& e) {
        return estimator_rates(e, g, inn_x, inn_y, meas.d_x, meas.d_y, self_v, self_omega);
      });
  return {s[0], s[1], s[2], s[3]};
}

// Ultimate bounds on the estimation and tracking errors for inputs with
// frame-projected acceleration magnitude at most a_eff.
struct GuubBounds {
  double eps_d = 0.0;  // m, bound on |e_dx|, |e_dy|
  double eps_v = 0.0;  // m/s, bound on |r*e_d - e_v|
  double eps_x = 0.0;  // m, bound on the longitudinal tracking error
  double eps_y = 0.0;  // m, bound on the lateral tracking error
  double c_i = 0.0;    // (m/s^2)^2, = 2*a_eff^2
};

inline GuubBounds guub_bounds(const EstimatorGains& g, double a_eff) {
  if (!(a_eff > 0.0)) throw std::invalid_argument("a_eff must be positive");
  GuubBounds b;
  b.c_i = 2.0 * a_eff * a_eff;
  const double root_ci = std::sqrt(b.c_i);
  b.eps_d = std::min(2.0 * (root_ci + a_eff) / g.r, std::sqrt(b.c_i / g.k_d));
  b.eps_v = std::min(root_ci + a_eff, std::sqrt(b.c_i / (g.r - 1.0)));
  b.eps_x = std::sqrt(b.c_i / std::abs(g.g_d));
  b.eps_y = b.eps_x;
  return b;
}

// Bound on |e_vx|, |e_vy| implied by eps_d and eps_v.
inline double velocity_envelope(const EstimatorGains& g, const GuubBounds& b) {
  return g.r * b.eps_d + b.eps_v;
}

}  // namespace formsim
