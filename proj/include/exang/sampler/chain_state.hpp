#pragma once

#include <array>

#include <Eigen/Dense>

#include "exang/extremes/gev.hpp"
#include "exang/model/dataset.hpp"
#include "exang/model/model_spec.hpp"
#include "exang/numerics/covariance.hpp"

namespace exang {

/// Latent field of one GEV parameter at the k sites with its GP hyperparameters.
struct GevLayerState {
  Eigen::VectorXd values;
  Eigen::VectorXd beta;
  double sill = 1.0;
  double range = 1.0;
  double shape = 1.0;
};

/// Angular layer: latent radii and (possibly imputed) angles, n x k, plus the
/// regression coefficients (theta1 terms first, then theta2) and covariance.
struct AngularState {
  Eigen::MatrixXd radii;
  Eigen::MatrixXd angles;
  Eigen::VectorXd beta;
  double tau = 1.0;
  double rho = 0.0;
  double range = 1.0;
  double shape = 1.0;

  AngularCovParams cov_params() const { return {range, shape, tau, rho}; }
};

/// One Gibbs iterate.
struct ChainState {
  std::array<GevLayerState, 3> gev;
  AngularState angular;

  GevLayerState& layer(Layer l) { return gev[static_cast<int>(l)]; }
  const GevLayerState& layer(Layer l) const { return gev[static_cast<int>(l)]; }

  GevParams gev_at(Eigen::Index j) const {
    return {gev[0].values(j), gev[1].values(j), gev[2].values(j)};
  }

  /// Throws std::logic_error describing the first violated invariant:
  /// positive scales/sills/ranges, |rho| < 1, positive radii, observations
  /// inside the GEV support.
  void check_invariants(const Dataset& data, const ModelSpec& spec) const;
};

}  // namespace exang
