#pragma once

#include <array>
#include <string>

#include <Eigen/Dense>

#include "exang/model/dataset.hpp"
#include "exang/model/terms.hpp"

namespace exang {

enum class Layer { Mu = 0, Sigma = 1, Xi = 2 };

inline constexpr std::array<Layer, 3> kGevLayers = {Layer::Mu, Layer::Sigma, Layer::Xi};

std::string layer_name(Layer layer);

/// Powered exponential family settings for one latent layer. The shape is held
/// fixed unless sample_shape is set.
struct LayerCovariance {
  double shape = 1.0;
  bool sample_shape = false;
};

/// Mean formulas for the three GEV layers and the two components of the
/// angular mean, plus covariance-family choices. Empty angular formulas
/// disable the angular layer (GEV-only model).
struct ModelSpec {
  Formula mu{Term::intercept()};
  Formula sigma{Term::intercept()};
  Formula xi{Term::intercept()};
  Formula theta1;
  Formula theta2;
  std::array<LayerCovariance, 3> gev_cov{};
  LayerCovariance theta_cov{};

  bool has_angular() const { return !theta1.empty() || !theta2.empty(); }
  const Formula& formula(Layer layer) const;
  const LayerCovariance& cov(Layer layer) const { return gev_cov[static_cast<int>(layer)]; }

  // True if the angular mean reads the given GEV layer (directly or via q(p)).
  bool angular_depends_on(Layer layer) const;

  Eigen::Index n_beta_theta() const {
    return static_cast<Eigen::Index>(theta1.size() + theta2.size());
  }

  // GEV formulas must be nonempty and purely geophysical; q(p) needs p in (0,1).
  void validate() const;

  // Copy with the angular formulas removed.
  ModelSpec gev_only() const;
};

/// Design matrix of a purely geophysical formula at the given sites.
Eigen::MatrixXd geo_design(const Formula& f, const std::vector<Site>& sites);

Eigen::RowVectorXd design_row(const Formula& f, const SiteCovariates& site, const GevParams& gev);

/// Angular design for one component, reading GEV parameters site by site.
Eigen::MatrixXd angular_design(const Formula& f, const std::vector<Site>& sites,
                               const Eigen::VectorXd& mu, const Eigen::VectorXd& sigma,
                               const Eigen::VectorXd& xi);

}  // namespace exang
