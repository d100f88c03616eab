#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "exang/model/dataset.hpp"
#include "exang/model/model_spec.hpp"
#include "exang/model/priors.hpp"
#include "exang/numerics/spd_matrix.hpp"
#include "exang/random.hpp"
#include "exang/sampler/chain_state.hpp"
#include "exang/sampler/tuning.hpp"

namespace exang {

struct GaussianPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

struct InverseGammaPosterior {
  double shape = 1.0;
  double rate = 1.0;
};

/// Data-augmented Metropolis-within-Gibbs sampler for the extremal-angular
/// model. One object per chain: it owns the data, the model and a cache of
/// correlation-matrix factorizations keyed on (range, shape).
///
/// A full transition (step) runs, in order:
///   1. single-site random-walk updates of mu, sigma, xi;
///   2. log-normal updates of every latent radius (missing angles are drawn
///      jointly with their radius from the bivariate conditional);
///   3. conjugate draw of the angular regression coefficients;
///   4. conjugate draws of the GEV regression coefficients;
///   5. inverse-gamma draws of the GEV sills;
///   6. MH updates of tau_theta, lambda_theta, rho_theta (and kappa_theta);
///   7. MH updates of the GEV ranges (and shapes).
/// Acceptance ratios are evaluated in log space.
class GibbsSampler {
 public:
  GibbsSampler(Dataset data, ModelSpec spec, Priors priors);

  const Dataset& data() const { return data_; }
  const ModelSpec& spec() const { return spec_; }
  const Priors& priors() const { return priors_; }

  // Swap in new observations at the same sites (used by simulation-based
  // checks that regenerate data between transitions).
  void replace_observations(const Eigen::MatrixXd& maxima, const Eigen::MatrixXd& angles);

  ChainState initial_state() const;
  TuningState initial_tuning(const ChainState& state) const;

  void step(ChainState& state, TuningState& tuning, Rng& rng);

  // Step 1.
  void update_gev_layer(ChainState& state, Layer layer, TuningState& tuning, Rng& rng);
  double log_accept_gev_site(const ChainState& state, Layer layer, Eigen::Index j, double proposal);
  bool update_gev_site(ChainState& state, Layer layer, Eigen::Index j, double proposal, Rng& rng);

  // Step 2.
  void update_radii(ChainState& state, TuningState& tuning, Rng& rng);
  double log_accept_radius(const ChainState& state, Eigen::Index i, Eigen::Index j, double proposal);
  bool update_radius(ChainState& state, Eigen::Index i, Eigen::Index j, double step_sd, Rng& rng);

  // Step 3.
  GaussianPosterior beta_theta_posterior(const ChainState& state);
  void update_beta_theta(ChainState& state, Rng& rng);

  // Step 4.
  GaussianPosterior beta_gev_posterior(const ChainState& state, Layer layer);
  void update_beta_gev(ChainState& state, Layer layer, Rng& rng);

  // Step 5.
  InverseGammaPosterior sill_posterior(const ChainState& state, Layer layer);
  void update_sill_gev(ChainState& state, Layer layer, Rng& rng);

  // Step 6.
  void update_angular_cov(ChainState& state, TuningState& tuning, Rng& rng);
  double log_accept_tau_theta(const ChainState& state, double proposal);
  double log_accept_rho_theta(const ChainState& state, double proposal);
  double log_accept_range_theta(const ChainState& state, double proposal);
  double log_accept_shape_theta(const ChainState& state, double proposal);

  // Step 7.
  void update_range_gev(ChainState& state, Layer layer, TuningState& tuning, Rng& rng);
  double log_accept_range_gev(const ChainState& state, Layer layer, double proposal);
  double log_accept_shape_gev(const ChainState& state, Layer layer, double proposal);

  // Angular mean at the k sites (k x 2: cosine column, sine column).
  Eigen::MatrixXd angular_mean(const ChainState& state) const;

 private:
  struct CorrelationFactor {
    double range = -1.0;
    double shape = -1.0;
    std::optional<SpdMatrix> factor;
    Eigen::MatrixXd inverse;
  };

  struct AngularDesign {
    Eigen::MatrixXd d1, d2;
    Eigen::MatrixXd mean;  // k x 2
  };

  struct Step1Context {
    Eigen::VectorXd ce;  // C^{-1} (values - D beta)
    bool coupled = false;
    AngularDesign design;
    Eigen::MatrixXd w;  // C_theta^{-1} (S - n M) T^{-1}
    Eigen::Matrix2d tinv;
  };

  struct SiteProposal {
    double log_alpha = 0.0;
    Eigen::Vector2d mean_shift = Eigen::Vector2d::Zero();
    Eigen::RowVectorXd row1, row2;
  };

  CorrelationFactor make_factor(double range, double shape) const;
  const CorrelationFactor& gev_factor(Layer layer, double range, double shape);
  const CorrelationFactor& theta_factor(double range, double shape);

  AngularDesign angular_design_of(const ChainState& state) const;
  Eigen::MatrixXd latent_x(const ChainState& state) const;  // k x 2n
  Eigen::MatrixXd residual_x(const ChainState& state, const Eigen::MatrixXd& mean) const;

  Step1Context make_step1_context(const ChainState& state, Layer layer);
  SiteProposal evaluate_site(const ChainState& state, Layer layer, Eigen::Index j, double proposal,
                             const Step1Context& ctx);
  void accept_site(ChainState& state, Layer layer, Eigen::Index j, double proposal,
                   const SiteProposal& sp, Step1Context& ctx);

  // Sum over replicates of E_i^T C^{-1} E_i (2 x 2) for residuals E (k x 2n).
  Eigen::Matrix2d residual_cross(const SpdMatrix& corr, const Eigen::MatrixXd& resid) const;
  double angular_loglik(const Eigen::Matrix2d& t, double log_det_c, const Eigen::Matrix2d& cross) const;

  Dataset data_;
  ModelSpec spec_;
  Priors priors_;
  Eigen::MatrixXd distances_;
  std::array<Eigen::MatrixXd, 3> gev_design_;
  std::vector<SpdMatrix> beta_prior_precision_;  // one per GEV layer
  std::array<Eigen::VectorXd, 3> beta_prior_shift_;  // precision * prior mean
  std::optional<SpdMatrix> beta_theta_prior_precision_;
  Eigen::VectorXd beta_theta_prior_shift_;
  std::array<CorrelationFactor, 3> gev_factor_;
  CorrelationFactor theta_factor_;
};

Eigen::VectorXd draw_from_precision(const Eigen::VectorXd& mean, const SpdMatrix& precision, Rng& rng);

}  // namespace exang
