#pragma once

#include <vector>

#include <Eigen/Dense>

#include "exang/inference/circular.hpp"
#include "exang/model/dataset.hpp"
#include "exang/model/model_spec.hpp"
#include "exang/random.hpp"
#include "exang/sampler/chain.hpp"

namespace exang {

/// One posterior-predictive draw per retained iteration at a query site.
/// theta is empty for GEV-only models.
struct PredictionDraws {
  Eigen::VectorXd mu, sigma, xi, theta;
};

struct PosteriorSummary {
  double median = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// Type-7 (linear interpolation) empirical quantile. Throws ContractError on
// an empty sample or prob outside [0, 1].
double empirical_quantile(std::vector<double> values, double prob);

// Median and equal-tailed interval of the given mass.
PosteriorSummary summarize_draws(const Eigen::VectorXd& draws, double mass = 0.95);

/// Draws at each query site, iterating over the trace rows. Per row, each
/// GEV layer is kriged from the k latent values under that row's
/// hyperparameters (sigma redrawn until positive) and the angle of a new
/// event is drawn from N(m_theta(s*), T) and projected. Query sites are
/// treated one at a time. Throws ValidationError if the trace does not match
/// the model and data, or if a query site lacks a covariate the formulas use.
std::vector<PredictionDraws> predict_sites(const Trace& trace, const Dataset& data, const ModelSpec& spec,
                                           const std::vector<Site>& queries, Rng& rng);

// gev_quantile(prob) per draw, then median and 95% interval.
PosteriorSummary return_level(const PredictionDraws& draws, double prob);

Eigen::VectorXd return_level_draws(const PredictionDraws& draws, double prob);

}  // namespace exang
