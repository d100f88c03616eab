#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "exang/model/dataset.hpp"
#include "exang/model/model_spec.hpp"
#include "exang/model/priors.hpp"
#include "exang/random.hpp"
#include "exang/sampler/chain_state.hpp"

namespace exang {

/// Angular dependence settings:
///   I   tau_theta 0.4, rho 0.3, m_theta = (0.5, 0)
///   II  tau_theta 0.4, rho 0.3, m_theta = (0.5, 2 xi(s))
///   III tau_theta 1.0, rho 0,   m_theta = (10 + 0.5 mu(s), 0)
/// GEV layers: m_mu = 2 - 3 lon - 2 lat, m_sigma = 2 + lat, m_xi = 0.05,
/// sills (0.1, 0.5, 0.05), ranges (1, 2, 3), exponential correlation.
enum class Scenario { I, II, III };

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);  // "I", "II", "III"

struct SimConfig {
  Scenario scenario = Scenario::I;
  Eigen::Index k = 25;
  Eigen::Index n = 50;
  std::uint64_t seed = 1;
  Eigen::Index holdout = 0;  // extra sites simulated and withheld from the data
  double lambda_theta = 1.0;

  void validate() const;  // k >= 2, n >= 1, holdout >= 0
};

/// Model used to fit simulated data: the generating mean functions with one
/// coefficient per term. The angular formulas are
///   I: (intercept), (intercept)
///   II: (intercept), (intercept, xi)
///   III: (intercept, mu), (intercept)
ModelSpec scenario_spec(Scenario s);

// Intercept-only angular formulas with the scenario's GEV formulas.
ModelSpec independence_spec();

/// Default priors for simulation fits: N(0, 100 I) coefficients, Gamma(2, 1)
/// ranges and tau_theta, IG(2, 1) sills except IG(2, 0.1) for xi.
Priors simulation_priors(const ModelSpec& spec);

struct Observations {
  Eigen::MatrixXd maxima;  // n x k
  Eigen::MatrixXd angles;  // n x k, [0, 2 pi)
  Eigen::MatrixXd radii;   // n x k
};

/// Draws n replicates of (maxima, angles) given the latent GEV fields and the
/// angular parameters of `state` at the given sites. Angles and radii are
/// empty matrices when the model has no angular layer.
Observations sample_observations(const ChainState& state, const std::vector<Site>& sites, const ModelSpec& spec,
                                 Eigen::Index n, Rng& rng);

struct HoldoutTruth {
  std::vector<Site> sites;
  Eigen::VectorXd mu, sigma, xi;
  Eigen::MatrixXd angular_mean;  // h x 2
  Eigen::Matrix2d angular_cov = Eigen::Matrix2d::Identity();
};

struct SimulatedData {
  Dataset data;
  ModelSpec spec;
  ChainState truth;                         // at the k fitted sites, including radii
  std::map<std::string, double> truth_values;  // keyed by trace column name
  HoldoutTruth holdout;
};

/// Sites i.i.d. uniform on the unit square with lon = x, lat = y, alt = 0.
/// The sigma field is redrawn (up to 100 times) while any value is <= 0.05.
SimulatedData simulate_dataset(const SimConfig& cfg);

}  // namespace exang
