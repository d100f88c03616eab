#include "exang/numerics/spd_matrix.hpp"

#include <cmath>
#include <sstream>

#include "exang/errors.hpp"

namespace exang {

namespace {

bool factor_ok(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  if (llt.info() != Eigen::Success) return false;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > 0.0) || !std::isfinite(l(i, i))) return false;
  }
  return true;
}

}  // namespace

SpdMatrix::SpdMatrix(Eigen::MatrixXd entries) : matrix_(std::move(entries)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw ContractError("SpdMatrix: matrix must be square and nonempty");
  }
  if (!matrix_.allFinite()) throw ContractError("SpdMatrix: non-finite entries");
  const double scale = matrix_.cwiseAbs().maxCoeff();
  const double asym = (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    std::ostringstream msg;
    msg << "SpdMatrix: matrix is not symmetric (max asymmetry " << asym << ")";
    throw ContractError(msg.str());
  }
  matrix_ = 0.5 * (matrix_ + matrix_.transpose());

  llt_.compute(matrix_);
  if (!factor_ok(llt_)) {
    const double base = matrix_.trace() / static_cast<double>(matrix_.rows());
    bool done = false;
    for (double eps = 1e-10; eps <= 1e-6 * (1.0 + 1e-9); eps *= 10.0) {
      const double add = eps * base;
      if (!(add > 0.0)) break;
      Eigen::MatrixXd jittered = matrix_;
      jittered.diagonal().array() += add;
      llt_.compute(jittered);
      if (factor_ok(llt_)) {
        matrix_ = std::move(jittered);
        jitter_ = add;
        done = true;
        break;
      }
    }
    if (!done) {
      throw SingularMatrixError("covariance matrix is singular beyond the jitter budget");
    }
  }
  log_det_ = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

Eigen::VectorXd SpdMatrix::solve(const Eigen::VectorXd& rhs) const { return llt_.solve(rhs); }

Eigen::MatrixXd SpdMatrix::solve(const Eigen::MatrixXd& rhs) const { return llt_.solve(rhs); }

Eigen::MatrixXd SpdMatrix::inverse() const {
  Eigen::MatrixXd inv = llt_.solve(Eigen::MatrixXd::Identity(dim(), dim()));
  return 0.5 * (inv + inv.transpose());
}

double SpdMatrix::quad_form(const Eigen::VectorXd& v) const { return whiten(v).squaredNorm(); }

Eigen::VectorXd SpdMatrix::whiten(const Eigen::VectorXd& v) const {
  return llt_.matrixL().solve(v);
}

Eigen::VectorXd SpdMatrix::correlate(const Eigen::VectorXd& z) const {
  return llt_.matrixL() * z;
}

}  // namespace exang
