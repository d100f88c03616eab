#include "exang/sampler/gibbs.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "exang/errors.hpp"
#include "exang/extremes/gev.hpp"
#include "exang/numerics/distributions.hpp"
#include "exang/numerics/mvn.hpp"
#include "exang/pgp/projected_gp.hpp"

namespace exang {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

bool accept(double log_alpha, Rng& rng) {
  if (!(log_alpha > kNegInf)) return false;
  if (log_alpha >= 0.0) return true;
  return std::log(uniform_open(rng)) < log_alpha;
}

double accept_prob(double log_alpha) {
  if (!(log_alpha > kNegInf)) return 0.0;
  return log_alpha >= 0.0 ? 1.0 : std::exp(log_alpha);
}

Eigen::Matrix2d component_matrix(double tau, double rho) {
  return AngularCovParams{1.0, 1.0, tau, rho}.component_matrix();
}

Eigen::VectorXd least_squares(const Eigen::MatrixXd& d, const Eigen::VectorXd& y) {
  return d.completeOrthogonalDecomposition().solve(y);
}

constexpr double kMaxMeanLength = 30.0;

// Mean resultant length of the angle of N(a e1, I).
double projected_resultant(double a) {
  const double x = 0.25 * a * a;
  return std::sqrt(kPi / 8.0) * a * std::exp(-x) * (std::cyl_bessel_i(0.0, x) + std::cyl_bessel_i(1.0, x));
}

// Mean length a whose projected resultant equals rbar, by bisection.
double mean_length_from_resultant(double rbar) {
  double lo = 0.0;
  double hi = kMaxMeanLength;
  if (rbar >= projected_resultant(hi)) return hi;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (projected_resultant(mid) < rbar ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Eigen::VectorXd draw_from_precision(const Eigen::VectorXd& mean, const SpdMatrix& precision, Rng& rng) {
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = standard_normal(rng);
  return mean + precision.llt().matrixU().solve(z);
}

GibbsSampler::GibbsSampler(Dataset data, ModelSpec spec, Priors priors)
    : data_(std::move(data)), spec_(std::move(spec)), priors_(std::move(priors)) {
  data_.validate();
  spec_.validate();
  priors_.validate(spec_);
  distances_ = distance_matrix(data_.coords());
  for (Layer layer : kGevLayers) {
    const int l = static_cast<int>(layer);
    gev_design_[l] = geo_design(spec_.formula(layer), data_.sites);
    const auto& prior = priors_.beta(layer);
    beta_prior_precision_.emplace_back(symmetrize(SpdMatrix(prior.cov).inverse()));
    beta_prior_shift_[l] = beta_prior_precision_.back().matrix() * prior.mean;
  }
  if (spec_.has_angular()) {
    beta_theta_prior_precision_.emplace(symmetrize(SpdMatrix(priors_.beta_theta.cov).inverse()));
    beta_theta_prior_shift_ = beta_theta_prior_precision_->matrix() * priors_.beta_theta.mean;
  }
}

void GibbsSampler::replace_observations(const Eigen::MatrixXd& maxima, const Eigen::MatrixXd& angles) {
  if (maxima.rows() != data_.n() || maxima.cols() != data_.k() || angles.rows() != data_.n() ||
      angles.cols() != data_.k()) {
    throw ContractError("replace_observations: dimension mismatch");
  }
  data_.maxima = maxima;
  data_.angles = angles;
}

GibbsSampler::CorrelationFactor GibbsSampler::make_factor(double range, double shape) const {
  CorrelationFactor f;
  f.range = range;
  f.shape = shape;
  f.factor.emplace(correlation_matrix(distances_, range, shape));
  f.inverse = symmetrize(f.factor->inverse());
  return f;
}

const GibbsSampler::CorrelationFactor& GibbsSampler::gev_factor(Layer layer, double range, double shape) {
  auto& f = gev_factor_[static_cast<int>(layer)];
  if (f.range != range || f.shape != shape || !f.factor) f = make_factor(range, shape);
  return f;
}

const GibbsSampler::CorrelationFactor& GibbsSampler::theta_factor(double range, double shape) {
  if (theta_factor_.range != range || theta_factor_.shape != shape || !theta_factor_.factor) {
    theta_factor_ = make_factor(range, shape);
  }
  return theta_factor_;
}

GibbsSampler::AngularDesign GibbsSampler::angular_design_of(const ChainState& state) const {
  AngularDesign d;
  const auto& mu = state.gev[0].values;
  const auto& sigma = state.gev[1].values;
  const auto& xi = state.gev[2].values;
  d.d1 = angular_design(spec_.theta1, data_.sites, mu, sigma, xi);
  d.d2 = angular_design(spec_.theta2, data_.sites, mu, sigma, xi);
  const auto p1 = d.d1.cols();
  const auto& beta = state.angular.beta;
  d.mean.resize(data_.k(), 2);
  d.mean.col(0) = d.d1 * beta.head(p1);
  d.mean.col(1) = d.d2 * beta.tail(d.d2.cols());
  return d;
}

Eigen::MatrixXd GibbsSampler::angular_mean(const ChainState& state) const {
  return angular_design_of(state).mean;
}

Eigen::MatrixXd GibbsSampler::latent_x(const ChainState& state) const {
  const auto n = data_.n();
  const auto k = data_.k();
  Eigen::MatrixXd x(k, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const double r = state.angular.radii(i, j);
      const double t = state.angular.angles(i, j);
      x(j, 2 * i) = r * std::cos(t);
      x(j, 2 * i + 1) = r * std::sin(t);
    }
  }
  return x;
}

Eigen::MatrixXd GibbsSampler::residual_x(const ChainState& state, const Eigen::MatrixXd& mean) const {
  Eigen::MatrixXd e = latent_x(state);
  for (Eigen::Index i = 0; i < data_.n(); ++i) e.middleCols(2 * i, 2) -= mean;
  return e;
}

Eigen::Matrix2d GibbsSampler::residual_cross(const SpdMatrix& corr, const Eigen::MatrixXd& resid) const {
  const Eigen::MatrixXd ce = corr.solve(resid);
  Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
  for (Eigen::Index i = 0; i < data_.n(); ++i) {
    a += resid.middleCols(2 * i, 2).transpose() * ce.middleCols(2 * i, 2);
  }
  return 0.5 * (a + a.transpose());
}

double GibbsSampler::angular_loglik(const Eigen::Matrix2d& t, double log_det_c,
                                    const Eigen::Matrix2d& cross) const {
  const double n = static_cast<double>(data_.n());
  const double k = static_cast<double>(data_.k());
  const double det_t = t.determinant();
  if (!(det_t > 0.0)) return kNegInf;
  return -0.5 * n * k * std::log(det_t) - n * log_det_c - 0.5 * (t.inverse() * cross).trace();
}

// ---------------------------------------------------------------------------
// Initialization

ChainState GibbsSampler::initial_state() const {
  const auto k = data_.k();
  const auto n = data_.n();
  ChainState s;

  std::vector<double> pooled;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (data_.has_max(i, j)) pooled.push_back(data_.maxima(i, j));
    }
  }
  GevParams pooled_fit;
  if (pooled.size() >= 3) {
    pooled_fit = gev_fit_pwm(pooled);
  } else {
    Eigen::Map<const Eigen::VectorXd> v(pooled.data(), static_cast<Eigen::Index>(pooled.size()));
    const double mean = v.mean();
    const double sd = std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size()));
    pooled_fit.mu = mean;
    pooled_fit.sigma = sd > 0.0 ? 2.0 * sd : 1.0;
  }

  for (auto& layer : s.gev) layer.values.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    std::vector<double> obs;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (data_.has_max(i, j)) obs.push_back(data_.maxima(i, j));
    }
    const GevParams fit = obs.size() >= 3 ? gev_fit_pwm(obs) : pooled_fit;
    s.gev[0].values(j) = fit.mu;
    s.gev[1].values(j) = fit.sigma;
    s.gev[2].values(j) = fit.xi;
  }
  for (Layer layer : kGevLayers) {
    const int l = static_cast<int>(layer);
    auto& g = s.gev[l];
    g.beta = least_squares(gev_design_[l], g.values);
    g.sill = priors_.sill(layer).median();
    g.range = priors_.range(layer).median();
    g.shape = spec_.cov(layer).shape;
  }

  if (spec_.has_angular()) {
    auto& a = s.angular;
    a.radii = Eigen::MatrixXd::Ones(n, k);
    a.angles = data_.angles.unaryExpr([](double v) { return std::isnan(v) ? 0.0 : v; });
    Eigen::VectorXd mc = Eigen::VectorXd::Zero(k);
    Eigen::VectorXd ms = Eigen::VectorXd::Zero(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      int cnt = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!data_.has_angle(i, j)) continue;
        mc(j) += std::cos(data_.angles(i, j));
        ms(j) += std::sin(data_.angles(i, j));
        ++cnt;
      }
      if (cnt == 0) continue;
      mc(j) /= cnt;
      ms(j) /= cnt;
      const double length = mean_length_from_resultant(std::hypot(mc(j), ms(j)));
      const double radius = std::sqrt(1.0 + length * length);
      a.radii.col(j).setConstant(radius);
      mc(j) *= radius;
      ms(j) *= radius;
    }
    const auto d1 = angular_design(spec_.theta1, data_.sites, s.gev[0].values, s.gev[1].values,
                                   s.gev[2].values);
    const auto d2 = angular_design(spec_.theta2, data_.sites, s.gev[0].values, s.gev[1].values,
                                   s.gev[2].values);
    a.beta.resize(spec_.n_beta_theta());
    a.beta.head(d1.cols()) = least_squares(d1, mc);
    a.beta.tail(d2.cols()) = least_squares(d2, ms);
    a.tau = priors_.tau_theta.median();
    a.range = priors_.range_theta.median();
    a.rho = 0.0;
    a.shape = spec_.theta_cov.shape;
  }
  return s;
}

TuningState GibbsSampler::initial_tuning(const ChainState& state) const {
  const auto k = static_cast<std::size_t>(data_.k());
  const double root_n = std::sqrt(static_cast<double>(std::max<Eigen::Index>(data_.n(), 1)));
  const double sigma_bar = state.gev[1].values.mean();
  TuningState t;
  t.gev_site[0].assign(k, AdaptiveScale(sigma_bar / root_n));
  t.gev_site[1].assign(k, AdaptiveScale(0.7 * sigma_bar / root_n));
  t.gev_site[2].assign(k, AdaptiveScale(0.7 / root_n));
  t.radius.assign(k, AdaptiveScale(0.5));
  t.tau_theta = AdaptiveScale(0.2);
  t.range_theta = AdaptiveScale(0.3);
  t.rho_theta = AdaptiveScale(0.1, 1.0);
  t.shape_theta = AdaptiveScale(0.1);
  for (int l = 0; l < 3; ++l) {
    t.range_gev[l] = AdaptiveScale(0.5);
    t.shape_gev[l] = AdaptiveScale(0.1);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Full transition

void GibbsSampler::step(ChainState& state, TuningState& tuning, Rng& rng) {
  const bool angular = spec_.has_angular();
  for (Layer layer : kGevLayers) update_gev_layer(state, layer, tuning, rng);
  if (angular) update_radii(state, tuning, rng);
  if (angular) update_beta_theta(state, rng);
  for (Layer layer : kGevLayers) update_beta_gev(state, layer, rng);
  for (Layer layer : kGevLayers) update_sill_gev(state, layer, rng);
  if (angular) update_angular_cov(state, tuning, rng);
  for (Layer layer : kGevLayers) update_range_gev(state, layer, tuning, rng);
  ++tuning.iteration;
}

// ---------------------------------------------------------------------------
// Step 1

GibbsSampler::Step1Context GibbsSampler::make_step1_context(const ChainState& state, Layer layer) {
  const int l = static_cast<int>(layer);
  const auto& g = state.gev[l];
  const auto& f = gev_factor(layer, g.range, g.shape);
  Step1Context ctx;
  ctx.ce = f.inverse * (g.values - gev_design_[l] * g.beta);
  ctx.coupled = spec_.has_angular() && spec_.angular_depends_on(layer);
  if (ctx.coupled) {
    const auto& a = state.angular;
    const auto& tf = theta_factor(a.range, a.shape);
    ctx.design = angular_design_of(state);
    ctx.tinv = component_matrix(a.tau, a.rho).inverse();
    const Eigen::MatrixXd x = latent_x(state);
    Eigen::MatrixXd resid_sum = -static_cast<double>(data_.n()) * ctx.design.mean;
    for (Eigen::Index i = 0; i < data_.n(); ++i) resid_sum += x.middleCols(2 * i, 2);
    ctx.w = tf.inverse * resid_sum * ctx.tinv;
  }
  return ctx;
}

GibbsSampler::SiteProposal GibbsSampler::evaluate_site(const ChainState& state, Layer layer, Eigen::Index j,
                                                       double proposal, const Step1Context& ctx) {
  const int l = static_cast<int>(layer);
  const auto& g = state.gev[l];
  SiteProposal sp;
  const double current = g.values(j);
  if (proposal == current) return sp;
  if (!std::isfinite(proposal) || (layer == Layer::Sigma && !(proposal > 0.0))) {
    sp.log_alpha = kNegInf;
    return sp;
  }
  const GevParams cur = state.gev_at(j);
  GevParams prop = cur;
  if (layer == Layer::Mu) prop.mu = proposal;
  if (layer == Layer::Sigma) prop.sigma = proposal;
  if (layer == Layer::Xi) prop.xi = proposal;

  double r1 = 0.0;
  for (Eigen::Index i = 0; i < data_.n(); ++i) {
    if (!data_.has_max(i, j)) continue;
    const double z = data_.maxima(i, j);
    const double lp = gev_logpdf(z, prop);
    if (!(lp > kNegInf)) {
      sp.log_alpha = kNegInf;
      return sp;
    }
    r1 += lp - gev_logpdf(z, cur);
  }

  const double delta = proposal - current;
  const auto& cinv = gev_factor_[l].inverse;
  const double r3 = -(delta * ctx.ce(j) + 0.5 * delta * delta * cinv(j, j)) / g.sill;

  double r2 = 0.0;
  if (ctx.coupled) {
    const auto& cov = data_.sites[static_cast<std::size_t>(j)].covariates;
    sp.row1 = design_row(spec_.theta1, cov, prop);
    sp.row2 = design_row(spec_.theta2, cov, prop);
    const auto& beta = state.angular.beta;
    const auto p1 = ctx.design.d1.cols();
    sp.mean_shift(0) = (sp.row1 - ctx.design.d1.row(j)).dot(beta.head(p1));
    sp.mean_shift(1) = (sp.row2 - ctx.design.d2.row(j)).dot(beta.tail(ctx.design.d2.cols()));
    const double cinv_jj = theta_factor_.inverse(j, j);
    const Eigen::Vector2d dm = sp.mean_shift;
    r2 = ctx.w.row(j).dot(dm) -
         0.5 * static_cast<double>(data_.n()) * cinv_jj * dm.dot(ctx.tinv * dm);
  }
  sp.log_alpha = r1 + r2 + r3;
  if (std::isnan(sp.log_alpha)) sp.log_alpha = kNegInf;
  return sp;
}

void GibbsSampler::accept_site(ChainState& state, Layer layer, Eigen::Index j, double proposal,
                               const SiteProposal& sp, Step1Context& ctx) {
  const int l = static_cast<int>(layer);
  auto& g = state.gev[l];
  const double delta = proposal - g.values(j);
  if (delta == 0.0) return;
  ctx.ce += delta * gev_factor_[l].inverse.col(j);
  g.values(j) = proposal;
  if (ctx.coupled) {
    ctx.design.d1.row(j) = sp.row1;
    ctx.design.d2.row(j) = sp.row2;
    ctx.design.mean.row(j) += sp.mean_shift.transpose();
    const Eigen::RowVector2d dt = sp.mean_shift.transpose() * ctx.tinv;
    ctx.w -= static_cast<double>(data_.n()) * theta_factor_.inverse.col(j) * dt;
  }
}

double GibbsSampler::log_accept_gev_site(const ChainState& state, Layer layer, Eigen::Index j,
                                         double proposal) {
  const Step1Context ctx = make_step1_context(state, layer);
  return evaluate_site(state, layer, j, proposal, ctx).log_alpha;
}

bool GibbsSampler::update_gev_site(ChainState& state, Layer layer, Eigen::Index j, double proposal,
                                   Rng& rng) {
  Step1Context ctx = make_step1_context(state, layer);
  const SiteProposal sp = evaluate_site(state, layer, j, proposal, ctx);
  if (!accept(sp.log_alpha, rng)) return false;
  accept_site(state, layer, j, proposal, sp, ctx);
  return true;
}

void GibbsSampler::update_gev_layer(ChainState& state, Layer layer, TuningState& tuning, Rng& rng) {
  const int l = static_cast<int>(layer);
  Step1Context ctx = make_step1_context(state, layer);
  auto& scales = tuning.gev_site[l];
  for (Eigen::Index j = 0; j < data_.k(); ++j) {
    auto& sc = scales[static_cast<std::size_t>(j)];
    const double proposal = state.gev[l].values(j) + sc.scale() * standard_normal(rng);
    const SiteProposal sp = evaluate_site(state, layer, j, proposal, ctx);
    const bool ok = accept(sp.log_alpha, rng);
    sc.record(ok);
    if (tuning.adapting) sc.adapt(accept_prob(sp.log_alpha), tuning.iteration);
    if (ok) accept_site(state, layer, j, proposal, sp, ctx);
  }
}

// ---------------------------------------------------------------------------
// Step 2

namespace {

// V = C^{-1} E T^{-1}, blockwise per replicate.
Eigen::MatrixXd whitened_residual(const Eigen::MatrixXd& cinv, const Eigen::MatrixXd& resid,
                                  const Eigen::Matrix2d& tinv, Eigen::Index n) {
  Eigen::MatrixXd v = cinv * resid;
  for (Eigen::Index i = 0; i < n; ++i) v.middleCols(2 * i, 2) = v.middleCols(2 * i, 2) * tinv;
  return v;
}

double radius_log_alpha(const Eigen::MatrixXd& v, double cinv_jj, const Eigen::Matrix2d& tinv,
                        Eigen::Index i, Eigen::Index j, double r, double theta, double proposal) {
  if (!(proposal > 0.0) || !std::isfinite(proposal)) return kNegInf;
  if (proposal == r) return 0.0;
  const Eigen::Vector2d d = (proposal - r) * Eigen::Vector2d(std::cos(theta), std::sin(theta));
  const Eigen::Vector2d vj = v.block(j, 2 * i, 1, 2).transpose();
  return -vj.dot(d) - 0.5 * cinv_jj * d.dot(tinv * d) + 2.0 * std::log(proposal / r);
}

}  // namespace

double GibbsSampler::log_accept_radius(const ChainState& state, Eigen::Index i, Eigen::Index j,
                                       double proposal) {
  const auto& a = state.angular;
  const auto& tf = theta_factor(a.range, a.shape);
  const Eigen::Matrix2d tinv = component_matrix(a.tau, a.rho).inverse();
  const Eigen::MatrixXd v = whitened_residual(tf.inverse, residual_x(state, angular_mean(state)), tinv, data_.n());
  return radius_log_alpha(v, tf.inverse(j, j), tinv, i, j, a.radii(i, j), a.angles(i, j), proposal);
}

bool GibbsSampler::update_radius(ChainState& state, Eigen::Index i, Eigen::Index j, double step_sd, Rng& rng) {
  auto& a = state.angular;
  const auto& tf = theta_factor(a.range, a.shape);
  const Eigen::Matrix2d t_mat = component_matrix(a.tau, a.rho);
  const Eigen::Matrix2d tinv = t_mat.inverse();
  const Eigen::MatrixXd v = whitened_residual(tf.inverse, residual_x(state, angular_mean(state)), tinv, data_.n());
  const double cinv_jj = tf.inverse(j, j);
  const double r = a.radii(i, j);
  const double theta = a.angles(i, j);

  if (!data_.has_angle(i, j)) {
    const Eigen::Vector2d x(r * std::cos(theta), r * std::sin(theta));
    const Eigen::Vector2d vj = v.block(j, 2 * i, 1, 2).transpose();
    const Eigen::Vector2d mean = x - t_mat * vj / cinv_jj;
    const Eigen::Matrix2d lcov = (t_mat / cinv_jj).llt().matrixL();
    const Eigen::Vector2d xn = mean + lcov * Eigen::Vector2d(standard_normal(rng), standard_normal(rng));
    a.radii(i, j) = xn.norm();
    a.angles(i, j) = angle_from_xy(xn(0), xn(1));
    return true;
  }
  if (step_sd == 0.0) return true;
  const LogNormalStep st = lognormal_step(r, step_sd, rng);
  const double la = radius_log_alpha(v, cinv_jj, tinv, i, j, r, theta, st.proposal);
  if (!accept(la, rng)) return false;
  a.radii(i, j) = st.proposal;
  return true;
}

void GibbsSampler::update_radii(ChainState& state, TuningState& tuning, Rng& rng) {
  auto& a = state.angular;
  const auto& tf = theta_factor(a.range, a.shape);
  const Eigen::Matrix2d t_mat = component_matrix(a.tau, a.rho);
  const Eigen::Matrix2d tinv = t_mat.inverse();
  const Eigen::Matrix2d cond_chol_unit = t_mat.llt().matrixL();
  Eigen::MatrixXd v = whitened_residual(tf.inverse, residual_x(state, angular_mean(state)), tinv, data_.n());

  for (Eigen::Index i = 0; i < data_.n(); ++i) {
    for (Eigen::Index j = 0; j < data_.k(); ++j) {
      const double cinv_jj = tf.inverse(j, j);
      const double r = a.radii(i, j);
      const double theta = a.angles(i, j);
      const Eigen::Vector2d u(std::cos(theta), std::sin(theta));
      Eigen::Vector2d d;
      if (data_.has_angle(i, j)) {
        auto& sc = tuning.radius[static_cast<std::size_t>(j)];
        const LogNormalStep st = lognormal_step(r, sc.scale(), rng);
        const double la = radius_log_alpha(v, cinv_jj, tinv, i, j, r, theta, st.proposal);
        const bool ok = accept(la, rng);
        sc.record(ok);
        if (tuning.adapting) sc.adapt(accept_prob(la), tuning.iteration);
        if (!ok) continue;
        a.radii(i, j) = st.proposal;
        d = (st.proposal - r) * u;
      } else {
        const Eigen::Vector2d x = r * u;
        const Eigen::Vector2d vj = v.block(j, 2 * i, 1, 2).transpose();
        const Eigen::Vector2d mean = x - t_mat * vj / cinv_jj;
        const Eigen::Vector2d z(standard_normal(rng), standard_normal(rng));
        const Eigen::Vector2d xn = mean + cond_chol_unit * z / std::sqrt(cinv_jj);
        a.radii(i, j) = xn.norm();
        a.angles(i, j) = angle_from_xy(xn(0), xn(1));
        d = xn - x;
      }
      const Eigen::RowVector2d dt = d.transpose() * tinv;
      v.middleCols(2 * i, 2) += tf.inverse.col(j) * dt;
    }
  }
}

// ---------------------------------------------------------------------------
// Step 3

GaussianPosterior GibbsSampler::beta_theta_posterior(const ChainState& state) {
  const auto& a = state.angular;
  const auto& tf = theta_factor(a.range, a.shape);
  const AngularDesign ad = angular_design_of(state);
  const Eigen::Matrix2d tinv = component_matrix(a.tau, a.rho).inverse();
  const double n = static_cast<double>(data_.n());
  const auto p1 = ad.d1.cols();
  const auto p2 = ad.d2.cols();
  const Eigen::MatrixXd& cinv = tf.inverse;

  Eigen::MatrixXd prec = beta_theta_prior_precision_->matrix();
  prec.topLeftCorner(p1, p1) += n * tinv(0, 0) * ad.d1.transpose() * cinv * ad.d1;
  prec.topRightCorner(p1, p2) += n * tinv(0, 1) * ad.d1.transpose() * cinv * ad.d2;
  prec.bottomLeftCorner(p2, p1) += n * tinv(1, 0) * ad.d2.transpose() * cinv * ad.d1;
  prec.bottomRightCorner(p2, p2) += n * tinv(1, 1) * ad.d2.transpose() * cinv * ad.d2;

  const Eigen::MatrixXd x = latent_x(state);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(data_.k(), 2);
  for (Eigen::Index i = 0; i < data_.n(); ++i) s += x.middleCols(2 * i, 2);
  const Eigen::MatrixXd cst = cinv * s * tinv;
  Eigen::VectorXd rhs = beta_theta_prior_shift_;
  rhs.head(p1) += ad.d1.transpose() * cst.col(0);
  rhs.tail(p2) += ad.d2.transpose() * cst.col(1);

  const SpdMatrix p(symmetrize(prec));
  return {p.solve(rhs), symmetrize(p.inverse())};
}

void GibbsSampler::update_beta_theta(ChainState& state, Rng& rng) {
  const GaussianPosterior post = beta_theta_posterior(state);
  state.angular.beta = mvn_sample(post.mean, SpdMatrix(post.cov), rng);
}

// ---------------------------------------------------------------------------
// Step 4

GaussianPosterior GibbsSampler::beta_gev_posterior(const ChainState& state, Layer layer) {
  const int l = static_cast<int>(layer);
  const auto& g = state.gev[l];
  const auto& f = gev_factor(layer, g.range, g.shape);
  const Eigen::MatrixXd& d = gev_design_[l];
  const Eigen::MatrixXd dtc = d.transpose() * f.inverse;
  const Eigen::MatrixXd prec = beta_prior_precision_[static_cast<std::size_t>(l)].matrix() + dtc * d / g.sill;
  const Eigen::VectorXd rhs = beta_prior_shift_[l] + dtc * g.values / g.sill;
  const SpdMatrix p(symmetrize(prec));
  return {p.solve(rhs), symmetrize(p.inverse())};
}

void GibbsSampler::update_beta_gev(ChainState& state, Layer layer, Rng& rng) {
  const GaussianPosterior post = beta_gev_posterior(state, layer);
  state.gev[static_cast<int>(layer)].beta = mvn_sample(post.mean, SpdMatrix(post.cov), rng);
}

// ---------------------------------------------------------------------------
// Step 5

InverseGammaPosterior GibbsSampler::sill_posterior(const ChainState& state, Layer layer) {
  const int l = static_cast<int>(layer);
  const auto& g = state.gev[l];
  const auto& f = gev_factor(layer, g.range, g.shape);
  const Eigen::VectorXd e = g.values - gev_design_[l] * g.beta;
  const auto& prior = priors_.sill(layer);
  return {prior.shape + 0.5 * static_cast<double>(data_.k()), prior.scale + 0.5 * f.factor->quad_form(e)};
}

void GibbsSampler::update_sill_gev(ChainState& state, Layer layer, Rng& rng) {
  const InverseGammaPosterior post = sill_posterior(state, layer);
  state.gev[static_cast<int>(layer)].sill = inverse_gamma_sample(post.shape, post.rate, rng);
}

// ---------------------------------------------------------------------------
// Step 6

double GibbsSampler::log_accept_tau_theta(const ChainState& state, double proposal) {
  const auto& a = state.angular;
  if (!(proposal > 0.0) || !std::isfinite(proposal)) return kNegInf;
  const auto& tf = theta_factor(a.range, a.shape);
  const Eigen::Matrix2d cross = residual_cross(*tf.factor, residual_x(state, angular_mean(state)));
  const double ld = tf.factor->log_det();
  const auto& pr = priors_.tau_theta;
  return angular_loglik(component_matrix(proposal, a.rho), ld, cross) -
         angular_loglik(component_matrix(a.tau, a.rho), ld, cross) + gamma_logpdf(proposal, pr.shape, pr.scale) -
         gamma_logpdf(a.tau, pr.shape, pr.scale) + std::log(proposal / a.tau);
}

double GibbsSampler::log_accept_rho_theta(const ChainState& state, double proposal) {
  const auto& a = state.angular;
  if (!(proposal > -1.0 && proposal < 1.0)) return kNegInf;
  const auto& tf = theta_factor(a.range, a.shape);
  const Eigen::Matrix2d cross = residual_cross(*tf.factor, residual_x(state, angular_mean(state)));
  const double ld = tf.factor->log_det();
  return angular_loglik(component_matrix(a.tau, proposal), ld, cross) -
         angular_loglik(component_matrix(a.tau, a.rho), ld, cross);
}

double GibbsSampler::log_accept_range_theta(const ChainState& state, double proposal) {
  const auto& a = state.angular;
  if (!(proposal > 0.0) || !std::isfinite(proposal)) return kNegInf;
  const Eigen::MatrixXd resid = residual_x(state, angular_mean(state));
  const Eigen::Matrix2d t = component_matrix(a.tau, a.rho);
  const auto& tf = theta_factor(a.range, a.shape);
  const double cur = angular_loglik(t, tf.factor->log_det(), residual_cross(*tf.factor, resid));
  const SpdMatrix c(correlation_matrix(distances_, proposal, a.shape));
  const double prop = angular_loglik(t, c.log_det(), residual_cross(c, resid));
  const auto& pr = priors_.range_theta;
  return prop - cur + gamma_logpdf(proposal, pr.shape, pr.scale) - gamma_logpdf(a.range, pr.shape, pr.scale) +
         std::log(proposal / a.range);
}

double GibbsSampler::log_accept_shape_theta(const ChainState& state, double proposal) {
  const auto& a = state.angular;
  if (!(proposal > 0.0 && proposal <= 2.0)) return kNegInf;
  const Eigen::MatrixXd resid = residual_x(state, angular_mean(state));
  const Eigen::Matrix2d t = component_matrix(a.tau, a.rho);
  const auto& tf = theta_factor(a.range, a.shape);
  const double cur = angular_loglik(t, tf.factor->log_det(), residual_cross(*tf.factor, resid));
  const SpdMatrix c(correlation_matrix(distances_, a.range, proposal));
  const double prop = angular_loglik(t, c.log_det(), residual_cross(c, resid));
  return prop - cur + std::log(proposal / a.shape);
}

void GibbsSampler::update_angular_cov(ChainState& state, TuningState& tuning, Rng& rng) {
  auto& a = state.angular;
  const Eigen::MatrixXd resid = residual_x(state, angular_mean(state));
  const auto& tf = theta_factor(a.range, a.shape);
  double log_det_c = tf.factor->log_det();
  Eigen::Matrix2d cross = residual_cross(*tf.factor, resid);
  const bool adapt = tuning.adapting;
  const long it = tuning.iteration;

  {
    const auto& pr = priors_.tau_theta;
    const LogNormalStep st = lognormal_step(a.tau, tuning.tau_theta.scale(), rng);
    const double la = angular_loglik(component_matrix(st.proposal, a.rho), log_det_c, cross) -
                      angular_loglik(component_matrix(a.tau, a.rho), log_det_c, cross) +
                      gamma_logpdf(st.proposal, pr.shape, pr.scale) - gamma_logpdf(a.tau, pr.shape, pr.scale) +
                      st.log_hastings;
    const bool ok = accept(la, rng);
    tuning.tau_theta.record(ok);
    if (adapt) tuning.tau_theta.adapt(accept_prob(la), it);
    if (ok) a.tau = st.proposal;
  }
  {
    const auto& pr = priors_.range_theta;
    const LogNormalStep st = lognormal_step(a.range, tuning.range_theta.scale(), rng);
    CorrelationFactor cand = make_factor(st.proposal, a.shape);
    const Eigen::Matrix2d cand_cross = residual_cross(*cand.factor, resid);
    const Eigen::Matrix2d t = component_matrix(a.tau, a.rho);
    const double la = angular_loglik(t, cand.factor->log_det(), cand_cross) -
                      angular_loglik(t, log_det_c, cross) + gamma_logpdf(st.proposal, pr.shape, pr.scale) -
                      gamma_logpdf(a.range, pr.shape, pr.scale) + st.log_hastings;
    const bool ok = accept(la, rng);
    tuning.range_theta.record(ok);
    if (adapt) tuning.range_theta.adapt(accept_prob(la), it);
    if (ok) {
      a.range = st.proposal;
      log_det_c = cand.factor->log_det();
      cross = cand_cross;
      theta_factor_ = std::move(cand);
    }
  }
  {
    const double eps = tuning.rho_theta.scale();
    const double proposal = a.rho + eps * (2.0 * uniform_open(rng) - 1.0);
    double la = kNegInf;
    if (proposal > -1.0 && proposal < 1.0) {
      la = angular_loglik(component_matrix(a.tau, proposal), log_det_c, cross) -
           angular_loglik(component_matrix(a.tau, a.rho), log_det_c, cross);
    }
    const bool ok = accept(la, rng);
    tuning.rho_theta.record(ok);
    if (adapt) tuning.rho_theta.adapt(accept_prob(la), it);
    if (ok) a.rho = proposal;
  }
  if (spec_.theta_cov.sample_shape) {
    const LogNormalStep st = lognormal_step(a.shape, tuning.shape_theta.scale(), rng);
    double la = kNegInf;
    std::optional<CorrelationFactor> cand;
    Eigen::Matrix2d cand_cross;
    if (st.proposal <= 2.0) {
      cand = make_factor(a.range, st.proposal);
      cand_cross = residual_cross(*cand->factor, resid);
      const Eigen::Matrix2d t = component_matrix(a.tau, a.rho);
      la = angular_loglik(t, cand->factor->log_det(), cand_cross) - angular_loglik(t, log_det_c, cross) +
           st.log_hastings;
    }
    const bool ok = accept(la, rng);
    tuning.shape_theta.record(ok);
    if (adapt) tuning.shape_theta.adapt(accept_prob(la), it);
    if (ok) {
      a.shape = st.proposal;
      theta_factor_ = std::move(*cand);
    }
  }
}

// ---------------------------------------------------------------------------
// Step 7

namespace {

double gev_field_loglik(const SpdMatrix& corr, double sill, const Eigen::VectorXd& resid) {
  const double k = static_cast<double>(resid.size());
  return -0.5 * (k * std::log(sill) + corr.log_det()) - 0.5 * corr.quad_form(resid) / sill;
}

}  // namespace

double GibbsSampler::log_accept_range_gev(const ChainState& state, Layer layer, double proposal) {
  const int l = static_cast<int>(layer);
  const auto& g = state.gev[l];
  if (!(proposal > 0.0) || !std::isfinite(proposal)) return kNegInf;
  const Eigen::VectorXd e = g.values - gev_design_[l] * g.beta;
  const auto& f = gev_factor(layer, g.range, g.shape);
  const SpdMatrix c(correlation_matrix(distances_, proposal, g.shape));
  const auto& pr = priors_.range(layer);
  return gev_field_loglik(c, g.sill, e) - gev_field_loglik(*f.factor, g.sill, e) +
         gamma_logpdf(proposal, pr.shape, pr.scale) - gamma_logpdf(g.range, pr.shape, pr.scale) +
         std::log(proposal / g.range);
}

double GibbsSampler::log_accept_shape_gev(const ChainState& state, Layer layer, double proposal) {
  const int l = static_cast<int>(layer);
  const auto& g = state.gev[l];
  if (!(proposal > 0.0 && proposal <= 2.0)) return kNegInf;
  const Eigen::VectorXd e = g.values - gev_design_[l] * g.beta;
  const auto& f = gev_factor(layer, g.range, g.shape);
  const SpdMatrix c(correlation_matrix(distances_, g.range, proposal));
  return gev_field_loglik(c, g.sill, e) - gev_field_loglik(*f.factor, g.sill, e) + std::log(proposal / g.shape);
}

void GibbsSampler::update_range_gev(ChainState& state, Layer layer, TuningState& tuning, Rng& rng) {
  const int l = static_cast<int>(layer);
  auto& g = state.gev[l];
  const Eigen::VectorXd e = g.values - gev_design_[l] * g.beta;
  const bool adapt = tuning.adapting;
  const long it = tuning.iteration;
  {
    auto& sc = tuning.range_gev[l];
    const auto& f = gev_factor(layer, g.range, g.shape);
    const auto& pr = priors_.range(layer);
    const LogNormalStep st = lognormal_step(g.range, sc.scale(), rng);
    CorrelationFactor cand = make_factor(st.proposal, g.shape);
    const double la = gev_field_loglik(*cand.factor, g.sill, e) - gev_field_loglik(*f.factor, g.sill, e) +
                      gamma_logpdf(st.proposal, pr.shape, pr.scale) - gamma_logpdf(g.range, pr.shape, pr.scale) +
                      st.log_hastings;
    const bool ok = accept(la, rng);
    sc.record(ok);
    if (adapt) sc.adapt(accept_prob(la), it);
    if (ok) {
      g.range = st.proposal;
      gev_factor_[l] = std::move(cand);
    }
  }
  if (spec_.cov(layer).sample_shape) {
    auto& sc = tuning.shape_gev[l];
    const auto& f = gev_factor(layer, g.range, g.shape);
    const LogNormalStep st = lognormal_step(g.shape, sc.scale(), rng);
    double la = kNegInf;
    std::optional<CorrelationFactor> cand;
    if (st.proposal <= 2.0) {
      cand = make_factor(g.range, st.proposal);
      la = gev_field_loglik(*cand->factor, g.sill, e) - gev_field_loglik(*f.factor, g.sill, e) + st.log_hastings;
    }
    const bool ok = accept(la, rng);
    sc.record(ok);
    if (adapt) sc.adapt(accept_prob(la), it);
    if (ok) {
      g.shape = st.proposal;
      gev_factor_[l] = std::move(*cand);
    }
  }
}

}  // namespace exang
