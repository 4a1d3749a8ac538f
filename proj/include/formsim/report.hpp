#pragma once

#include <array>
#include <cstdio>
#include <ostream>

#include "formsim/estimator.hpp"
#include "formsim/lyapunov.hpp"

namespace formsim {

// Derived gain set, stability certificate, and ultimate bounds for one g_d.
struct TheoryReport {
  EstimatorGains gains;
  std::array<double, 4> eigenvalues{};  // of A(0), descending
  LyapunovCertificate certificate;      // for Q = I
  GuubBounds bounds;
  double a_eff = 0.0;
  double velocity_bound = 0.0;  // r*eps_d + eps_v
};

inline TheoryReport make_theory_report(double g_d, double a_eff) {
  TheoryReport r;
  r.gains = derive_gains(g_d);
  r.eigenvalues = a0_eigenvalues(r.gains);
  r.certificate = solve_lyapunov(error_matrix(r.gains, 0.0), Eigen::Matrix4d::Identity());
  r.a_eff = a_eff;
  r.bounds = guub_bounds(r.gains, a_eff);
  r.velocity_bound = velocity_envelope(r.gains, r.bounds);
  return r;
}

inline void print_theory_report(const TheoryReport& r, std::ostream& out) {
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return std::string(buf);
  };
  out << "gains:\n";
  out << "  g_d = " << num(r.gains.g_d) << "\n";
  out << "  g_v = " << num(r.gains.g_v) << "\n";
  out << "  p   = " << num(r.gains.p) << "\n";
  out << "  r   = " << num(r.gains.r) << "\n";
  out << "  k_d = " << num(r.gains.k_d) << "\n";
  out << "eigenvalues of A(0): " << num(r.eigenvalues[0]) << ", " << num(r.eigenvalues[1]) << ", "
      << num(r.eigenvalues[2]) << ", " << num(r.eigenvalues[3]) << "\n";
  out << "lyapunov certificate (Q = I): residual = " << num(r.certificate.residual)
      << ", min eig(P) = " << num(r.certificate.min_p_eigenvalue) << "\n";
  out << "ultimate bounds (a_eff = " << num(r.a_eff) << "):\n";
  out << "  eps_d = " << num(r.bounds.eps_d) << " m\n";
  out << "  eps_v = " << num(r.bounds.eps_v) << " m/s\n";
  out << "  eps_x = eps_y = " << num(r.bounds.eps_x) << " m\n";
  out << "  velocity envelope r*eps_d + eps_v = " << num(r.velocity_bound) << " m/s\n";
}

}  // namespace formsim
