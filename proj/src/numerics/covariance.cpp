#include "exang/numerics/covariance.hpp"

#include <cmath>
#include <sstream>

#include "exang/errors.hpp"

namespace exang {

void CovParams::validate() const {
  if (!(sill > 0.0) || !std::isfinite(sill)) throw DomainError("covariance sill must be positive");
  if (!(range > 0.0) || !std::isfinite(range)) throw DomainError("covariance range must be positive");
  if (!(shape > 0.0 && shape <= 2.0)) throw DomainError("covariance shape must lie in (0, 2]");
}

void AngularCovParams::validate() const {
  if (!(range > 0.0) || !std::isfinite(range)) throw DomainError("angular range must be positive");
  if (!(shape > 0.0 && shape <= 2.0)) throw DomainError("angular shape must lie in (0, 2]");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("tau_theta must be positive");
  if (!(std::abs(rho) < 1.0)) throw DomainError("rho_theta must lie in (-1, 1)");
}

Eigen::Matrix2d AngularCovParams::component_matrix() const {
  const double off = rho * std::sqrt(tau);
  Eigen::Matrix2d t;
  t << tau, off, off, 1.0;
  return t;
}

double powered_exponential_correlation(double h, double range, double shape) {
  if (!(h >= 0.0)) throw DomainError("distance must be nonnegative");
  if (h == 0.0) return 1.0;
  return std::exp(-std::pow(h / range, shape));
}

double powered_exponential(double h, const CovParams& p) {
  p.validate();
  return p.sill * powered_exponential_correlation(h, p.range, p.shape);
}

Eigen::MatrixXd distance_matrix(const SiteCoords& sites) {
  const Eigen::Index k = sites.rows();
  Eigen::MatrixXd d(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < k; ++j) {
      d(i, j) = d(j, i) = (sites.row(i) - sites.row(j)).norm();
    }
  }
  return d;
}

Eigen::VectorXd distances_to(const SiteCoords& sites, const Eigen::Vector2d& query) {
  Eigen::VectorXd d(sites.rows());
  for (Eigen::Index i = 0; i < sites.rows(); ++i) {
    d(i) = (sites.row(i).transpose() - query).norm();
  }
  return d;
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& distances, double range, double shape) {
  if (!(range > 0.0)) throw DomainError("correlation range must be positive");
  if (!(shape > 0.0 && shape <= 2.0)) throw DomainError("correlation shape must lie in (0, 2]");
  Eigen::MatrixXd c(distances.rows(), distances.cols());
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      c(i, j) = powered_exponential_correlation(distances(i, j), range, shape);
    }
  }
  return c;
}

SpdMatrix build_gev_cov(const SiteCoords& sites, const CovParams& p) {
  p.validate();
  if (sites.rows() == 0) throw ContractError("build_gev_cov: no sites");
  return SpdMatrix(p.sill * correlation_matrix(distance_matrix(sites), p.range, p.shape));
}

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

SpdMatrix build_angular_cov(const SiteCoords& sites, const AngularCovParams& p) {
  p.validate();
  if (sites.rows() == 0) throw ContractError("build_angular_cov: no sites");
  const Eigen::MatrixXd c = correlation_matrix(distance_matrix(sites), p.range, p.shape);
  return SpdMatrix(kronecker(p.component_matrix(), c));
}

}  // namespace exang
