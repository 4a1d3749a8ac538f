#pragma once

#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace formsim {

struct LyapunovCertificate {
  Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d Q = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d P = Eigen::Matrix4d::Zero();
  Eigen::Vector4cd eigenvalues;  // of A
  double residual = 0.0;         // ||A'P + PA + Q||_F / ||Q||_F
  double min_p_eigenvalue = 0.0;
};

// Solves A'P + PA + Q = 0 for P by vectorization: the Kronecker sum
// (I (x) A' + A' (x) I) vec(P) = -vec(Q), a dense 16x16 linear solve.
// Requires A Hurwitz and Q symmetric positive definite; the returned P is
// symmetric positive definite and unique.
inline LyapunovCertificate solve_lyapunov(const Eigen::Matrix4d& a, const Eigen::Matrix4d& q) {
  if (!q.isApprox(q.transpose(), 1e-12))
    throw std::invalid_argument("Q must be symmetric");
  {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> qe(q);
    if (qe.eigenvalues().minCoeff() <= 0.0)
      throw std::invalid_argument("Q must be positive definite");
  }

  LyapunovCertificate cert;
  cert.A = a;
  cert.Q = q;

  Eigen::EigenSolver<Eigen::Matrix4d> ae(a);
  cert.eigenvalues = ae.eigenvalues();
  for (int i = 0; i < 4; ++i) {
    if (cert.eigenvalues(i).real() >= 0.0) {
      std::ostringstream msg;
      msg << "A is not Hurwitz; eigenvalues:";
      for (int j = 0; j < 4; ++j) {
        msg << " (" << cert.eigenvalues(j).real() << (cert.eigenvalues(j).imag() < 0 ? "" : "+")
            << cert.eigenvalues(j).imag() << "i)";
      }
      throw std::invalid_argument(msg.str());
    }
  }

  // column-major vec: entry (i,j) of P sits at index j*4 + i
  Eigen::Matrix<double, 16, 16> m = Eigen::Matrix<double, 16, 16>::Zero();
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        m(j * 4 + i, j * 4 + k) += a(k, i);  // I (x) A'
        m(j * 4 + i, k * 4 + i) += a(k, j);  // A' (x) I
      }
  Eigen::Matrix<double, 16, 1> rhs;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) rhs(j * 4 + i) = -q(i, j);

  Eigen::FullPivLU<Eigen::Matrix<double, 16, 16>> lu(m);
  if (!lu.isInvertible())
    throw std::invalid_argument("Kronecker sum is singular (eigenvalue pair summing to zero)");
  const Eigen::Matrix<double, 16, 1> vec_p = lu.solve(rhs);

  Eigen::Matrix4d p;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) p(i, j) = vec_p(j * 4 + i);
  p = 0.5 * (p + p.transpose()).eval();
  cert.P = p;
  cert.residual = (a.transpose() * p + p * a + q).norm() / q.norm();

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> pe(p);
  cert.min_p_eigenvalue = pe.eigenvalues().minCoeff();
  if (cert.min_p_eigenvalue <= 0.0)
    throw std::runtime_error("solved P is not positive definite");
  return cert;
}

}  // namespace formsim
