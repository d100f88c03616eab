#pragma once

#include <Eigen/Dense>

#include "exang/model/model_spec.hpp"

namespace exang {

struct GaussianPrior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// Density proportional to x^{-shape-1} exp(-scale / x).
struct InverseGammaPrior {
  double shape = 2.0;
  double scale = 1.0;

  double median() const;
};

// Shape/scale parameterization.
struct GammaPrior {
  double shape = 2.0;
  double scale = 1.0;

  double median() const;
};

/// Conjugate Gaussian priors on regression coefficients, inverse-gamma priors
/// on GEV sills, gamma priors on ranges and tau_theta; rho_theta is uniform
/// on (-1, 1) and covariance shapes (when sampled) uniform on (0, 2].
struct Priors {
  GaussianPrior beta_mu, beta_sigma, beta_xi, beta_theta;
  InverseGammaPrior sill_mu, sill_sigma, sill_xi;
  GammaPrior range_mu, range_sigma, range_xi;
  GammaPrior range_theta, tau_theta;

  const GaussianPrior& beta(Layer layer) const;
  GaussianPrior& beta(Layer layer);
  const InverseGammaPrior& sill(Layer layer) const;
  InverseGammaPrior& sill(Layer layer);
  const GammaPrior& range(Layer layer) const;
  GammaPrior& range(Layer layer);

  /// Zero-mean isotropic beta priors with the given variance, IG(2, 1) sills,
  /// Gamma(2, 1) ranges and tau_theta.
  static Priors defaults(const ModelSpec& spec, double beta_variance = 100.0);

  // Dimensions must match the model spec; all hyperparameters positive.
  void validate(const ModelSpec& spec) const;
};

}  // namespace exang
