#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "exang/io/dataset_csv.hpp"
#include "exang/model/model_spec.hpp"
#include "exang/model/priors.hpp"
#include "exang/sampler/chain.hpp"
#include "exang/simulator/simulate.hpp"

namespace exang {

struct McmcConfig {
  long n_iter = 2000;
  long burnin = 1000;
  long thin = 1;
  std::uint64_t seed = 1;
  int n_chains = 1;

  ChainSettings settings() const;
};

struct PredictionConfig {
  std::vector<double> return_levels{0.95, 0.99};
  std::uint64_t seed = 1;
};

/// Run configuration file (JSON). Every section is optional:
///
///   {
///     "model": {
///       "mu": ["intercept", "lon", "lat"], "sigma": [...], "xi": [...],
///       "theta1": ["intercept", "mu", {"q": 0.95}], "theta2": [...],
///       "covariance": {"mu": {"shape": 1, "sample_shape": false}, ..., "theta": {...}}
///     },
///     "priors": {
///       "beta_variance": 100,
///       "beta_mu": {"mean": [...], "cov": [[...]]},   (or "variance": v)
///       "sill_mu": {"shape": 2, "scale": 1}, "range_theta": {...}, "tau_theta": {...}
///     },
///     "mcmc": {"n_iter": 2000, "burnin": 1000, "thin": 1, "seed": 1, "n_chains": 1},
///     "data": {"meteorological": true, "project": false},
///     "prediction": {"return_levels": [0.95, 0.99], "seed": 1},
///     "simulation": {"config": "II", "k": 25, "n": 50, "seed": 1, "holdout": 0,
///                    "lambda_theta": 1}
///   }
///
/// Unknown keys are rejected with a ValidationError naming them.
struct RunConfig {
  ModelSpec spec;
  Priors priors;
  McmcConfig mcmc;
  DataOptions data;
  PredictionConfig prediction;
  std::optional<SimConfig> simulation;
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

// Fully explicit form (all defaults filled in), stable across key order.
nlohmann::json to_json(const RunConfig& cfg);

// Hex SHA-256 of the canonical serialization.
std::string config_digest(const RunConfig& cfg);

nlohmann::json term_to_json(const Term& t);
Term term_from_json(const nlohmann::json& j);

}  // namespace exang
