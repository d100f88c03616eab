#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "exang/sampler/chain.hpp"
#include "exang/simulator/simulate.hpp"

namespace exang {

// Column name of the derived quantity tau_mu / (1 + lambda_mu).
inline constexpr const char* kSillRangeRatio = "tau_mu/(1+lambda_mu)";

struct MseStudySettings {
  Scenario scenario = Scenario::II;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> cells;  // (k, n)
  int replications = 5;
  ChainSettings mcmc;      // seed and initial_state are set per replication
  std::uint64_t seed = 1;
  bool start_at_truth = false;
};

struct MseCell {
  Eigen::Index k = 0;
  Eigen::Index n = 0;
  int replications = 0;
  std::map<std::string, double> mse;  // regression, covariance and ratio parameters
};

/// For each (k, n) cell and replication: simulate, fit with run_chain, take
/// posterior medians and average the squared errors against the truth over
/// replications. Reported parameters are all beta, tau, lambda, kappa and
/// angular covariance columns plus kSillRangeRatio (median of the per-draw
/// ratio). Each (cell, replication) has its own random streams.
std::vector<MseCell> mse_study(const MseStudySettings& settings);

}  // namespace exang
