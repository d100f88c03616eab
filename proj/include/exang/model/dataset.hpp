#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "exang/model/terms.hpp"
#include "exang/numerics/covariance.hpp"

namespace exang {

struct Site {
  std::string id;
  SiteCovariates covariates;
  Eigen::Vector2d coord = Eigen::Vector2d::Zero();  // planar position used for distances
};

/// k sites observed over n replicates (years). maxima and angles are n x k;
/// NaN marks a missing value. Angles are radians in [0, 2 pi).
struct Dataset {
  std::vector<Site> sites;
  std::vector<int> years;
  Eigen::MatrixXd maxima;
  Eigen::MatrixXd angles;

  Eigen::Index k() const { return static_cast<Eigen::Index>(sites.size()); }
  Eigen::Index n() const { return maxima.rows(); }

  bool has_max(Eigen::Index i, Eigen::Index j) const { return !std::isnan(maxima(i, j)); }
  bool has_angle(Eigen::Index i, Eigen::Index j) const { return !std::isnan(angles(i, j)); }

  SiteCoords coords() const;

  // Throws ValidationError on shape mismatch, out-of-range angles, or sites
  // without any observed maximum.
  void validate() const;
};

SiteCoords coords_of(const std::vector<Site>& sites);

}  // namespace exang
