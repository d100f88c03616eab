#pragma once

#include <Eigen/Dense>

#include "exang/model/dataset.hpp"
#include "exang/model/model_spec.hpp"
#include "exang/sampler/chain.hpp"

namespace exang {

struct WaicBlock {
  double lppd = 0.0;
  double p_waic = 0.0;
  double waic = 0.0;  // -2 (lppd - p_waic)
  long n_points = 0;
};

struct WaicReport {
  WaicBlock theta;  // angles, site-marginal projected normal density
  WaicBlock eta;    // maxima, GEV density
  double total = 0.0;
};

/// WAIC from an S x N matrix of pointwise log-likelihoods (rows = draws).
/// p_waic uses the sample variance (denominator S - 1). Throws
/// ValidationError when S < 2.
WaicBlock waic_from_pointwise(const Eigen::MatrixXd& loglik);

/// Pointwise log-likelihoods of the observed maxima (eta) and observed angles
/// (theta) under every trace row; each angle is scored by the projected
/// normal density of the site-marginal N(m_theta(s_j), T). Missing
/// observations are skipped. For GEV-only models the theta block is empty.
WaicReport waic(const Trace& trace, const Dataset& data, const ModelSpec& spec);

}  // namespace exang
