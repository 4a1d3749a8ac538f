#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "formsim/estimator.hpp"

using namespace formsim;

TEST(DeriveGains, ReferenceGainSet) {
  const EstimatorGains g = derive_gains(-15.0);
  EXPECT_EQ(g.g_v, -50.0);
  EXPECT_EQ(g.p, -5.0);
  EXPECT_EQ(g.r, 10.0);
  EXPECT_EQ(g.k_d, 725.0);
}

TEST(DeriveGains, SecondaryGainSet) {
  const EstimatorGains g = derive_gains(-6.0);
  EXPECT_EQ(g.g_v, -8.0);
  EXPECT_EQ(g.p, -2.0);
  EXPECT_EQ(g.r, 4.0);
  EXPECT_EQ(g.k_d, 44.0);
}

TEST(DeriveGains, SmallGainSet) {
  const EstimatorGains g = derive_gains(-3.0);
  EXPECT_EQ(g.g_v, -2.0);
  EXPECT_EQ(g.p, -1.0);
  EXPECT_EQ(g.r, 2.0);
  const auto eig = a0_eigenvalues(g);
  EXPECT_DOUBLE_EQ(eig[0], -1.0);
  EXPECT_DOUBLE_EQ(eig[1], -1.0);
  EXPECT_DOUBLE_EQ(eig[2], -2.0);
  EXPECT_DOUBLE_EQ(eig[3], -2.0);
}

TEST(DeriveGains, RejectsInadmissibleValues) {
  EXPECT_THROW(derive_gains(5.0), std::invalid_argument);
  EXPECT_THROW(derive_gains(0.0), std::invalid_argument);
  EXPECT_THROW(derive_gains(-1.5), std::invalid_argument);
  try {
    derive_gains(-1.0);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("r > 1"), std::string::npos);
  }
  try {
    derive_gains(2.0);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("negative"), std::string::npos);
  }
}

// Both closed forms of p and the characteristic relation must agree exactly.
TEST(DeriveGains, GainIdentitiesProperty) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> gd(-30.0, -1.6);
  for (int i = 0; i < 50; ++i) {
    const EstimatorGains g = derive_gains(gd(rng));
    EXPECT_NEAR(g.r * g.r + g.r * g.g_d - g.g_v, 0.0, 1e-12);
    const double p_alt = 0.5 * (g.g_d + std::sqrt(g.g_d * g.g_d + 4.0 * g.g_v));
    EXPECT_NEAR(g.p, p_alt, 1e-12);
    EXPECT_NEAR(g.r, 0.5 * (-g.g_d + std::sqrt(g.g_d * g.g_d + 4.0 * g.g_v)), 1e-12);
    EXPECT_LT(g.g_v, 0.0);
    EXPECT_GE(g.g_v, -g.g_d * g.g_d / 4.0);  // Hurwitz window
    EXPECT_GT(g.k_d, 0.0);
    EXPECT_GT(g.r, 1.0);
  }
}

namespace {
std::array<double, 4> sorted_real_eigenvalues(const Eigen::Matrix4d& a) {
  Eigen::EigenSolver<Eigen::Matrix4d> es(a);
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(es.eigenvalues()(i).imag(), 0.0, 1e-9);
    out[static_cast<std::size_t>(i)] = es.eigenvalues()(i).real();
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}
}  // namespace

TEST(ErrorMatrix, ReferenceEigenvaluesAtZeroOmega) {
  const auto eig = sorted_real_eigenvalues(error_matrix(derive_gains(-15.0), 0.0));
  EXPECT_NEAR(eig[0], -5.0, 1e-9);
  EXPECT_NEAR(eig[1], -5.0, 1e-9);
  EXPECT_NEAR(eig[2], -10.0, 1e-9);
  EXPECT_NEAR(eig[3], -10.0, 1e-9);
  const auto closed = a0_eigenvalues(derive_gains(-15.0));
  EXPECT_DOUBLE_EQ(closed[0], -5.0);
  EXPECT_DOUBLE_EQ(closed[3], -10.0);
}

TEST(ErrorMatrix, SecondaryEigenvaluesAtZeroOmega) {
  const auto eig = sorted_real_eigenvalues(error_matrix(derive_gains(-6.0), 0.0));
  EXPECT_NEAR(eig[0], -2.0, 1e-9);
  EXPECT_NEAR(eig[1], -2.0, 1e-9);
  EXPECT_NEAR(eig[2], -4.0, 1e-9);
  EXPECT_NEAR(eig[3], -4.0, 1e-9);
}

TEST(ErrorMatrix, HurwitzPersistsAcrossOmega) {
  const EstimatorGains g = derive_gains(-15.0);
  for (double w = -2.0; w <= 2.0 + 1e-9; w += 0.25) {
    Eigen::EigenSolver<Eigen::Matrix4d> es(error_matrix(g, w));
    for (int i = 0; i < 4; ++i) EXPECT_LT(es.eigenvalues()(i).real(), 0.0) << "omega = " << w;
  }
}

// Eigenvalues of A(0) must be the roots of (x^2 - g_d x - g_v)^2.
TEST(ErrorMatrix, CharacteristicPolynomialConsistency) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> gd(-25.0, -1.6);
  for (int i = 0; i < 20; ++i) {
    const EstimatorGains g = derive_gains(gd(rng));
    const auto eig = sorted_real_eigenvalues(error_matrix(g, 0.0));
    for (double lambda : eig)
      EXPECT_NEAR(lambda * lambda - g.g_d * lambda - g.g_v, 0.0, 1e-6);
    const auto closed = a0_eigenvalues(g);
    EXPECT_NEAR(eig[0], closed[0], 1e-8);
    EXPECT_NEAR(eig[3], closed[3], 1e-8);
  }
}

TEST(ErrorMatrix, MatchesPublishedLayout) {
  const EstimatorGains g = derive_gains(-6.0);
  const double w = 0.7;
  const Eigen::Matrix4d a = error_matrix(g, w);
  EXPECT_DOUBLE_EQ(a(0, 0), g.g_d);
  EXPECT_DOUBLE_EQ(a(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(a(1, 0), g.g_v);
  EXPECT_DOUBLE_EQ(a(1, 2), g.p * w);
  EXPECT_DOUBLE_EQ(a(1, 3), w);
  EXPECT_DOUBLE_EQ(a(2, 2), g.g_d);
  EXPECT_DOUBLE_EQ(a(2, 3), 1.0);
  EXPECT_DOUBLE_EQ(a(3, 0), -g.p * w);
  EXPECT_DOUBLE_EQ(a(3, 1), -w);
  EXPECT_DOUBLE_EQ(a(3, 2), g.g_v);
}

// With the estimate at the exact truth and a constant-velocity target, the
// held innovation is zero and the step is pure feedforward: no drift.
TEST(EstimatorStep, ExactTruthIsEquilibrium) {
  const EstimatorGains g = derive_gains(-15.0);
  const double v_self = 0.4, v1x = 0.6, dt = 0.01;
  double d_x = 2.0;
  EstimatorState est{d_x, v1x, 0.5, 0.0};
  for (int k = 0; k < 100; ++k) {
    const RelativeMeasurement meas{std::hypot(d_x, 0.5), std::atan2(0.5, d_x), d_x, 0.5};
    est = estimator_step(est, g, meas, v_self, 0.0, dt);
    d_x += (v1x - v_self) * dt;  // exact for piecewise-constant speeds
    EXPECT_NEAR(est.d_x_hat, d_x, 1e-10);
    EXPECT_NEAR(est.v1x_hat, v1x, 1e-10);
    EXPECT_NEAR(est.d_y_hat, 0.5, 1e-10);
    EXPECT_NEAR(est.v1y_hat, 0.0, 1e-10);
  }
}

// Theorem-2 tail: constant target velocity, cold-started estimate converges
// below 1e-3 well inside 5 s and decays monotonically after the transient.
TEST(EstimatorStep, ConstantVelocityConvergence) {
  const EstimatorGains g = derive_gains(-15.0);
  const double v_self = 0.5, dt = 0.01;
  const double d_x_true = 1.2, d_y_true = -0.4;  // co-moving pair, constant gap
  EstimatorState est{d_x_true + 0.5, v_self + 0.8, d_y_true - 0.3, 0.4};
  double prev_norm = 1e9;
  int settled_at = -1;
  for (int k = 0; k < 500; ++k) {
    const RelativeMeasurement meas{std::hypot(d_x_true, d_y_true),
                                   std::atan2(d_y_true, d_x_true), d_x_true, d_y_true};
    est = estimator_step(est, g, meas, v_self, 0.0, dt);
    const double norm =
        std::hypot(std::hypot(est.d_x_hat - d_x_true, est.v1x_hat - v_self),
                   std::hypot(est.d_y_hat - d_y_true, est.v1y_hat - 0.0));
    if (k > 50) EXPECT_LE(norm, prev_norm * (1.0 + 1e-12));
    prev_norm = norm;
    if (settled_at < 0 && norm < 1e-3) settled_at = k;
  }
  ASSERT_GE(settled_at, 0);
  EXPECT_LT(settled_at * dt, 5.0);
}

TEST(EstimatorStep, RejectsNonFiniteInputs) {
  const EstimatorGains g = derive_gains(-15.0);
  const RelativeMeasurement meas{1.0, 0.0, 1.0, 0.0};
  EXPECT_THROW(estimator_step({std::nan(""), 0, 0, 0}, g, meas, 0.0, 0.0, 0.01),
               std::invalid_argument);
  EXPECT_THROW(estimator_step({}, g, meas, std::nan(""), 0.0, 0.01), std::invalid_argument);
  EXPECT_THROW(estimator_step({}, g, meas, 0.0, 0.0, -0.01), std::invalid_argument);
}

TEST(EstimatorState, ReconstructsHeadingAndSpeed) {
  const EstimatorState est{0.0, 0.3, 0.0, 0.4};
  EXPECT_NEAR(est.v1_hat(), 0.5, 1e-15);
  EXPECT_NEAR(est.psi_hat(), std::atan2(0.4, 0.3), 1e-15);
  // two-argument arctangent handles v1x_hat = 0
  const EstimatorState up{0.0, 0.0, 0.0, 1.0};
  EXPECT_NEAR(up.psi_hat(), kPi / 2.0, 1e-15);
}

TEST(GuubBounds, ReferenceValues) {
  const EstimatorGains g = derive_gains(-15.0);
  const GuubBounds b = guub_bounds(g, 0.5);
  EXPECT_DOUBLE_EQ(b.c_i, 0.5);
  EXPECT_NEAR(b.eps_d, 0.026261286571944511, 1e-15);
  EXPECT_NEAR(b.eps_d, 0.026, 5e-4);
  EXPECT_NEAR(b.eps_v, 0.23570226039551584, 1e-15);
  EXPECT_NEAR(velocity_envelope(g, b), 0.49831512611496093, 1e-15);
  EXPECT_NEAR(velocity_envelope(g, b), 0.497, 2e-3);
  EXPECT_NEAR(b.eps_x, 0.18257418583505536, 1e-15);
  EXPECT_DOUBLE_EQ(b.eps_y, b.eps_x);
}

TEST(GuubBounds, RejectsNonPositiveAcceleration) {
  const EstimatorGains g = derive_gains(-15.0);
  EXPECT_THROW(guub_bounds(g, 0.0), std::invalid_argument);
  EXPECT_THROW(guub_bounds(g, -1.0), std::invalid_argument);
}

TEST(InitEstimator, WarmStartFromFirstMeasurement) {
  const RelativeMeasurement meas = measurement_from_polar(2.0, 0.3);
  const EstimatorState est = init_estimator(meas, 0.7);
  EXPECT_DOUBLE_EQ(est.d_x_hat, meas.d_x);
  EXPECT_DOUBLE_EQ(est.d_y_hat, meas.d_y);
  EXPECT_DOUBLE_EQ(est.v1x_hat, 0.7);
  EXPECT_DOUBLE_EQ(est.v1y_hat, 0.0);
}
