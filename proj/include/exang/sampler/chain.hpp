#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "exang/model/dataset.hpp"
#include "exang/model/model_spec.hpp"
#include "exang/model/priors.hpp"
#include "exang/sampler/chain_state.hpp"

namespace exang {

/// Flat column layout of a chain state. Vectors are written as name[i]
/// (0-based), scalars by name:
///   mu[j] sigma[j] xi[j] beta_mu[c] beta_sigma[c] beta_xi[c]
///   tau_mu tau_sigma tau_xi lambda_mu lambda_sigma lambda_xi
///   kappa_mu kappa_sigma kappa_xi
/// and for angular models
///   beta_theta1[c] beta_theta2[c] tau_theta rho_theta lambda_theta kappa_theta
/// Radii and imputed angles are not recorded.
class TraceLayout {
 public:
  TraceLayout(const ModelSpec& spec, Eigen::Index k);

  const std::vector<std::string>& names() const { return names_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(names_.size()); }
  Eigen::Index k() const { return k_; }
  const ModelSpec& spec() const { return spec_; }

  Eigen::RowVectorXd encode(const ChainState& state) const;

  // Rebuilds everything except the latent radii/angles.
  ChainState decode(const Eigen::RowVectorXd& row) const;

  // Throws ContractError for an unknown column name.
  Eigen::Index index_of(const std::string& name) const;
  std::optional<Eigen::Index> find(const std::string& name) const;

 private:
  ModelSpec spec_;
  Eigen::Index k_;
  std::vector<std::string> names_;
};

struct Trace {
  std::vector<std::string> columns;
  Eigen::MatrixXd draws;           // one row per retained iteration
  std::vector<int> chain;          // chain index per row
  std::vector<long> iteration;     // iteration index per row

  Eigen::Index rows() const { return draws.rows(); }
  Eigen::Index column(const std::string& name) const;
  Eigen::VectorXd values(const std::string& name) const;
};

struct ChainSettings {
  long n_iter = 1000;
  long burnin = 500;
  long thin = 1;
  std::uint64_t seed = 1;
  int n_chains = 1;
  bool adapt = true;
  std::optional<ChainState> initial_state;

  // Throws ValidationError unless 0 <= burnin < n_iter (or n_iter == 0),
  // thin >= 1 and n_chains >= 1.
  void validate() const;
};

struct AcceptanceReport {
  int chain = 0;
  std::vector<std::pair<std::string, double>> rates;  // post burn-in acceptance per block
};

struct FitResult {
  Trace trace;
  std::vector<AcceptanceReport> acceptance;
  std::vector<ChainState> final_states;
};

/// Runs n_chains independent chains, each from stream (seed, chain index).
/// Iterations are 1-based; iteration t is retained if t > burnin and
/// (t - burnin) % thin == 0. With n_iter == 0 the initial state is the only
/// row. Results are deterministic given the seed and independent of thread
/// scheduling.
FitResult run_chain(const Dataset& data, const ModelSpec& spec, const Priors& priors,
                    const ChainSettings& settings);

}  // namespace exang
