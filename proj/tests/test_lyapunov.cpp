#include <random>

#include <gtest/gtest.h>

#include "formsim/estimator.hpp"
#include "formsim/lyapunov.hpp"

using namespace formsim;

TEST(SolveLyapunov, IdentityCase) {
  // A = -I, Q = 2I: A'P + PA = -2P, so P = I.
  const Eigen::Matrix4d a = -Eigen::Matrix4d::Identity();
  const auto cert = solve_lyapunov(a, 2.0 * Eigen::Matrix4d::Identity());
  EXPECT_TRUE(cert.P.isApprox(Eigen::Matrix4d::Identity(), 1e-12));
  EXPECT_LE(cert.residual, 1e-12);
}

TEST(SolveLyapunov, ReferenceGainCertificate) {
  const auto cert = solve_lyapunov(error_matrix(derive_gains(-15.0), 0.0),
                                   Eigen::Matrix4d::Identity());
  // residual recomputed here with plain loops, independent of the solver path
  double frob = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = (i == j) ? 1.0 : 0.0;  // Q = I
      for (int k = 0; k < 4; ++k)
        s += cert.A(k, i) * cert.P(k, j) + cert.P(i, k) * cert.A(k, j);
      frob += s * s;
    }
  EXPECT_LE(std::sqrt(frob) / 2.0, 1e-9);  // ||Q||_F = 2
  EXPECT_GT(cert.min_p_eigenvalue, 0.0);
  EXPECT_TRUE(cert.P.isApprox(cert.P.transpose(), 1e-12));
}

TEST(SolveLyapunov, RejectsSingularAndNonHurwitz) {
  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
  a.diagonal() << -1.0, -1.0, -1.0, 0.0;  // eigenvalue at 0
  try {
    solve_lyapunov(a, Eigen::Matrix4d::Identity());
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("Hurwitz"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("eigenvalues"), std::string::npos);
  }
  a.diagonal() << -1.0, -1.0, -1.0, 2.0;
  EXPECT_THROW(solve_lyapunov(a, Eigen::Matrix4d::Identity()), std::invalid_argument);
}

TEST(SolveLyapunov, RejectsBadWeightMatrix) {
  const Eigen::Matrix4d a = -Eigen::Matrix4d::Identity();
  Eigen::Matrix4d q = Eigen::Matrix4d::Identity();
  q(0, 1) = 0.5;  // asymmetric
  EXPECT_THROW(solve_lyapunov(a, q), std::invalid_argument);
  q = Eigen::Matrix4d::Identity();
  q(3, 3) = -1.0;  // indefinite
  EXPECT_THROW(solve_lyapunov(a, q), std::invalid_argument);
}

// Certificate quality across the admissible gain range.
TEST(SolveLyapunov, RandomGainCertificatesProperty) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> gd(-30.0, -1.6);
  for (int i = 0; i < 50; ++i) {
    const auto cert = solve_lyapunov(error_matrix(derive_gains(gd(rng)), 0.0),
                                     Eigen::Matrix4d::Identity());
    EXPECT_LE(cert.residual, 1e-9);
    EXPECT_GT(cert.min_p_eigenvalue, 0.0);
  }
}
