#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "exang/numerics/spd_matrix.hpp"
#include "exang/random.hpp"

namespace exang {

double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const SpdMatrix& cov);

Eigen::VectorXd mvn_sample(const Eigen::VectorXd& mean, const SpdMatrix& cov, Rng& rng);

// Sampling from a covariance that may be only semidefinite (e.g. a
// conditional covariance at an observed location). Negative eigenvalues from
// rounding are clamped to zero.
Eigen::VectorXd mvn_sample_semidefinite(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                        Rng& rng);

struct ConditionalNormal {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  std::vector<Eigen::Index> free_idx;  // indices the moments refer to, ascending
};

/// Gaussian conditioning: distribution of the unobserved coordinates given
/// x[observed_idx] = observed_vals. observed_idx must be a nonempty proper
/// subset of distinct indices.
ConditionalNormal mvn_conditional(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                  std::span<const Eigen::Index> observed_idx,
                                  const Eigen::VectorXd& observed_vals);

}  // namespace exang
