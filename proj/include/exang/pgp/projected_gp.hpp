#pragma once

#include <Eigen/Dense>

#include "exang/numerics/spd_matrix.hpp"
#include "exang/random.hpp"

namespace exang {

// Wraps any real angle into [0, 2 pi).
double wrap_angle(double theta);

// Quadrant-correct angle of (x1, x2) in [0, 2 pi), counterclockwise from the
// first axis. Throws DomainError for the zero vector.
double angle_from_xy(double x1, double x2);

/// Augmented log density of (R, theta) at k sites: the Gaussian log density of
/// X = r (cos t, sin t) in component-major order plus sum_i log r_i.
double joint_logdensity(const Eigen::VectorXd& angles, const Eigen::VectorXd& radii,
                        const Eigen::VectorXd& mean, const SpdMatrix& cov);

/// Log density of the angle of a bivariate N(mean, cov) vector, with the
/// radius integrated out in closed form.
double marginal_angle_logpdf(double theta, const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov);

/// Location of the global maximum of marginal_angle_logpdf, found on a
/// 3600-point grid and refined by golden-section search.
double projected_normal_mode(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov);

struct PgpDraw {
  Eigen::VectorXd angles;
  Eigen::VectorXd radii;
};

// Draws X ~ N(mean, cov) (2k-dimensional, component-major) and projects.
PgpDraw sample_pgp(const Eigen::VectorXd& mean, const SpdMatrix& cov, Rng& rng);

}  // namespace exang
