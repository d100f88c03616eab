#include "exang/simulator/simulate.hpp"

#include <cstdio>

#include "exang/errors.hpp"
#include "exang/extremes/gev.hpp"
#include "exang/numerics/covariance.hpp"
#include "exang/numerics/mvn.hpp"
#include "exang/pgp/projected_gp.hpp"
#include "exang/sampler/chain.hpp"

namespace exang {

namespace {

constexpr double kSigmaFloor = 0.05;
constexpr int kSigmaAttempts = 100;

struct ScenarioParams {
  double tau;
  double rho;
  Eigen::VectorXd beta_theta;
};

ScenarioParams scenario_params(Scenario s) {
  switch (s) {
    case Scenario::I: return {0.4, 0.3, (Eigen::VectorXd(2) << 0.5, 0.0).finished()};
    case Scenario::II: return {0.4, 0.3, (Eigen::VectorXd(3) << 0.5, 0.0, 2.0).finished()};
    case Scenario::III: return {1.0, 0.0, (Eigen::VectorXd(3) << 10.0, 0.5, 0.0).finished()};
  }
  throw ContractError("unknown scenario");
}

ModelSpec gev_part() {
  ModelSpec spec;
  spec.mu = {Term::intercept(), Term::lon(), Term::lat()};
  spec.sigma = {Term::intercept(), Term::lat()};
  spec.xi = {Term::intercept()};
  return spec;
}

std::string site_id(Eigen::Index j) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "S%03ld", static_cast<long>(j + 1));
  return buf;
}

}  // namespace

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::I: return "I";
    case Scenario::II: return "II";
    case Scenario::III: return "III";
  }
  return "?";
}

Scenario scenario_from_name(const std::string& name) {
  if (name == "I") return Scenario::I;
  if (name == "II") return Scenario::II;
  if (name == "III") return Scenario::III;
  throw ValidationError("unknown simulation configuration '" + name + "' (expected I, II or III)");
}

void SimConfig::validate() const {
  if (k < 2) throw ValidationError("simulation needs k >= 2 sites");
  if (n < 1) throw ValidationError("simulation needs n >= 1 replicates");
  if (holdout < 0) throw ValidationError("holdout must be nonnegative");
  if (!(lambda_theta > 0.0)) throw ValidationError("lambda_theta must be positive");
}

ModelSpec scenario_spec(Scenario s) {
  ModelSpec spec = gev_part();
  switch (s) {
    case Scenario::I:
      spec.theta1 = {Term::intercept()};
      spec.theta2 = {Term::intercept()};
      break;
    case Scenario::II:
      spec.theta1 = {Term::intercept()};
      spec.theta2 = {Term::intercept(), Term::xi()};
      break;
    case Scenario::III:
      spec.theta1 = {Term::intercept(), Term::mu()};
      spec.theta2 = {Term::intercept()};
      break;
  }
  return spec;
}

ModelSpec independence_spec() {
  ModelSpec spec = gev_part();
  spec.theta1 = {Term::intercept()};
  spec.theta2 = {Term::intercept()};
  return spec;
}

Priors simulation_priors(const ModelSpec& spec) {
  Priors p = Priors::defaults(spec);
  p.sill_xi = InverseGammaPrior{2.0, 0.1};
  return p;
}

Observations sample_observations(const ChainState& state, const std::vector<Site>& sites, const ModelSpec& spec,
                                 Eigen::Index n, Rng& rng) {
  const auto k = static_cast<Eigen::Index>(sites.size());
  Observations obs;
  obs.maxima.resize(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) obs.maxima(i, j) = gev_sample(state.gev_at(j), rng);
  }
  if (!spec.has_angular()) return obs;

  const auto& a = state.angular;
  const auto d1 = angular_design(spec.theta1, sites, state.gev[0].values, state.gev[1].values, state.gev[2].values);
  const auto d2 = angular_design(spec.theta2, sites, state.gev[0].values, state.gev[1].values, state.gev[2].values);
  Eigen::VectorXd mean(2 * k);
  mean.head(k) = d1 * a.beta.head(d1.cols());
  mean.tail(k) = d2 * a.beta.tail(d2.cols());
  const SpdMatrix cov = build_angular_cov(coords_of(sites), a.cov_params());
  obs.angles.resize(n, k);
  obs.radii.resize(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const PgpDraw d = sample_pgp(mean, cov, rng);
    obs.angles.row(i) = d.angles.transpose();
    obs.radii.row(i) = d.radii.transpose();
  }
  return obs;
}

SimulatedData simulate_dataset(const SimConfig& cfg) {
  cfg.validate();
  Rng rng = make_stream(cfg.seed, 0);
  const Eigen::Index total = cfg.k + cfg.holdout;
  const ModelSpec spec = scenario_spec(cfg.scenario);
  const ScenarioParams sp = scenario_params(cfg.scenario);

  std::vector<Site> sites(static_cast<std::size_t>(total));
  for (Eigen::Index j = 0; j < total; ++j) {
    auto& s = sites[static_cast<std::size_t>(j)];
    s.id = site_id(j);
    s.covariates.lon = uniform_open(rng);
    s.covariates.lat = uniform_open(rng);
    s.covariates.alt = 0.0;
    s.coord = Eigen::Vector2d(s.covariates.lon, s.covariates.lat);
  }
  const SiteCoords coords = coords_of(sites);

  ChainState full;
  const std::array<Eigen::VectorXd, 3> betas = {
      (Eigen::VectorXd(3) << 2.0, -3.0, -2.0).finished(),
      (Eigen::VectorXd(2) << 2.0, 1.0).finished(),
      (Eigen::VectorXd(1) << 0.05).finished(),
  };
  const std::array<double, 3> sills = {0.1, 0.5, 0.05};
  const std::array<double, 3> ranges = {1.0, 2.0, 3.0};
  for (Layer layer : kGevLayers) {
    const int l = static_cast<int>(layer);
    auto& g = full.gev[l];
    g.beta = betas[l];
    g.sill = sills[l];
    g.range = ranges[l];
    g.shape = 1.0;
    const Eigen::VectorXd mean = geo_design(spec.formula(layer), sites) * g.beta;
    const SpdMatrix cov = build_gev_cov(coords, CovParams{g.sill, g.range, g.shape});
    g.values = mvn_sample(mean, cov, rng);
    if (layer == Layer::Sigma) {
      int attempts = 1;
      while (g.values.minCoeff() <= kSigmaFloor) {
        if (++attempts > kSigmaAttempts) {
          throw DomainError("simulate_dataset: could not draw a positive scale field");
        }
        g.values = mvn_sample(mean, cov, rng);
      }
    }
  }
  auto& a = full.angular;
  a.beta = sp.beta_theta;
  a.tau = sp.tau;
  a.rho = sp.rho;
  a.range = cfg.lambda_theta;
  a.shape = 1.0;

  const Observations obs = sample_observations(full, sites, spec, cfg.n, rng);

  SimulatedData out;
  out.spec = spec;
  auto& d = out.data;
  d.sites.assign(sites.begin(), sites.begin() + cfg.k);
  for (Eigen::Index i = 0; i < cfg.n; ++i) d.years.push_back(static_cast<int>(i + 1));
  d.maxima = obs.maxima.leftCols(cfg.k);
  d.angles = obs.angles.leftCols(cfg.k);

  out.truth = full;
  for (auto& g : out.truth.gev) g.values = g.values.head(cfg.k).eval();
  out.truth.angular.radii = obs.radii.leftCols(cfg.k);
  out.truth.angular.angles = obs.angles.leftCols(cfg.k);

  const TraceLayout layout(spec, cfg.k);
  const Eigen::RowVectorXd row = layout.encode(out.truth);
  for (Eigen::Index c = 0; c < layout.size(); ++c) out.truth_values[layout.names()[static_cast<std::size_t>(c)]] = row(c);

  auto& h = out.holdout;
  h.sites.assign(sites.begin() + cfg.k, sites.end());
  h.mu = full.gev[0].values.tail(cfg.holdout);
  h.sigma = full.gev[1].values.tail(cfg.holdout);
  h.xi = full.gev[2].values.tail(cfg.holdout);
  h.angular_mean.resize(cfg.holdout, 2);
  const auto d1 = angular_design(spec.theta1, h.sites, h.mu, h.sigma, h.xi);
  const auto d2 = angular_design(spec.theta2, h.sites, h.mu, h.sigma, h.xi);
  if (cfg.holdout > 0) {
    h.angular_mean.col(0) = d1 * a.beta.head(d1.cols());
    h.angular_mean.col(1) = d2 * a.beta.tail(d2.cols());
  }
  h.angular_cov = a.cov_params().component_matrix();
  return out;
}

}  // namespace exang
