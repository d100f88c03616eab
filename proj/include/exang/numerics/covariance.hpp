#pragma once

#include <Eigen/Dense>

#include "exang/numerics/spd_matrix.hpp"

namespace exang {

// k x 2 matrix of planar site coordinates; distances are Euclidean.
using SiteCoords = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// Powered exponential covariance tau * exp(-(h / lambda)^kappa).
struct CovParams {
  double sill = 1.0;   // tau
  double range = 1.0;  // lambda
  double shape = 1.0;  // kappa, in (0, 2]

  void validate() const;
};

/// Separable cross-covariance of the bivariate angular process: T (x) rho(h),
/// with T = [[tau, rho sqrt(tau)], [rho sqrt(tau), 1]]. The variance of the
/// second (sine) component is fixed to one for identifiability.
struct AngularCovParams {
  double range = 1.0;
  double shape = 1.0;
  double tau = 1.0;
  double rho = 0.0;

  void validate() const;
  Eigen::Matrix2d component_matrix() const;
};

double powered_exponential(double h, const CovParams& p);

// Unit-sill correlation exp(-(h / range)^shape).
double powered_exponential_correlation(double h, double range, double shape);

Eigen::MatrixXd distance_matrix(const SiteCoords& sites);

// Distances from one query point to every site.
Eigen::VectorXd distances_to(const SiteCoords& sites, const Eigen::Vector2d& query);

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& distances, double range, double shape);

SpdMatrix build_gev_cov(const SiteCoords& sites, const CovParams& p);

/// 2k x 2k covariance in component-major order: the first k rows/columns are
/// the cosine components at s_1..s_k, the last k the sine components.
SpdMatrix build_angular_cov(const SiteCoords& sites, const AngularCovParams& p);

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace exang
