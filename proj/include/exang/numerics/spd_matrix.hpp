#pragma once

#include <Eigen/Dense>

namespace exang {

/// Symmetric positive definite matrix with a cached Cholesky factor.
///
/// Construction validates symmetry (relative tolerance 1e-12) and factorizes.
/// When the plain factorization fails, a diagonal jitter of
/// 1e-10 * trace / dim is added and escalated by factors of ten up to
/// 1e-6 * trace / dim; beyond that SingularMatrixError is thrown.
/// matrix() returns the matrix that was actually factorized (jitter included).
class SpdMatrix {
 public:
  explicit SpdMatrix(Eigen::MatrixXd entries);

  Eigen::Index dim() const { return matrix_.rows(); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  Eigen::MatrixXd lower() const { return llt_.matrixL(); }
  const Eigen::LLT<Eigen::MatrixXd>& llt() const { return llt_; }
  double jitter() const { return jitter_; }
  double log_det() const { return log_det_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
  Eigen::MatrixXd inverse() const;

  // v^T A^{-1} v
  double quad_form(const Eigen::VectorXd& v) const;

  // L^{-1} v, the whitening transform.
  Eigen::VectorXd whiten(const Eigen::VectorXd& v) const;

  // L z, maps standard normals to N(0, A).
  Eigen::VectorXd correlate(const Eigen::VectorXd& z) const;

 private:
  Eigen::MatrixXd matrix_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_ = 0.0;
  double log_det_ = 0.0;
};

}  // namespace exang
