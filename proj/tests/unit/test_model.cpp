#include <cmath>
#include <limits>

#include <doctest.h>

#include "exang/errors.hpp"
#include "exang/model/dataset.hpp"
#include "exang/model/model_spec.hpp"
#include "exang/model/priors.hpp"
#include "exang/sampler/chain_state.hpp"

using namespace exang;

namespace {

Dataset small_dataset() {
  Dataset d;
  d.sites = {{"A", {0.1, 0.2, 5.0}, {0.1, 0.2}}, {"B", {0.7, 0.4, 9.0}, {0.7, 0.4}}};
  d.years = {2001, 2002, 2003};
  d.maxima.resize(3, 2);
  d.maxima << 10, 12, 11, 13, 9.5, 12.5;
  d.angles.resize(3, 2);
  d.angles << 0.1, 1.0, 0.2, 1.1, 6.0, 1.2;
  return d;
}

}  // namespace

TEST_CASE("terms") {
  CHECK(Term::from_name("lat") == Term::lat());
  CHECK(Term::from_name("xi").depends_on_gev());
  CHECK_FALSE(Term::from_name("alt").depends_on_gev());
  CHECK(Term::quantile(0.9).name() == "q(0.9)");
  CHECK_THROWS_AS(Term::from_name("elevation"), ValidationError);

  SiteCovariates s{1.5, -2.0, 300.0};
  GevParams g{10.0, 2.0, 0.1};
  CHECK(term_value(Term::intercept(), s, g) == 1.0);
  CHECK(term_value(Term::lon(), s, g) == 1.5);
  CHECK(term_value(Term::lat(), s, g) == -2.0);
  CHECK(term_value(Term::alt(), s, g) == 300.0);
  CHECK(term_value(Term::sigma(), s, g) == 2.0);
  CHECK(term_value(Term::quantile(0.95), s, g) == doctest::Approx(gev_quantile(0.95, g)));
  CHECK(formula_depends_on_gev({Term::intercept(), Term::mu()}));
  CHECK_FALSE(formula_depends_on_gev({Term::intercept(), Term::lon()}));
}

TEST_CASE("model spec validation") {
  ModelSpec spec;
  spec.theta1 = {Term::intercept(), Term::mu()};
  spec.theta2 = {Term::intercept()};
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.has_angular());
  CHECK(spec.angular_depends_on(Layer::Mu));
  CHECK_FALSE(spec.angular_depends_on(Layer::Sigma));
  CHECK(spec.n_beta_theta() == 3);
  CHECK_FALSE(spec.gev_only().has_angular());

  ModelSpec q = spec;
  q.theta2.push_back(Term::quantile(0.9));
  CHECK(q.angular_depends_on(Layer::Xi));
  q.theta2.back().prob = 1.0;
  CHECK_THROWS_AS(q.validate(), ValidationError);

  ModelSpec bad = spec;
  bad.mu.push_back(Term::xi());
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = spec;
  bad.sigma.clear();
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = spec;
  bad.theta2.clear();
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = spec;
  bad.gev_cov[1].shape = 2.5;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = spec;
  bad.theta_cov.shape = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("design matrices") {
  Dataset d = small_dataset();
  Formula f{Term::intercept(), Term::lon(), Term::alt()};
  Eigen::MatrixXd x = geo_design(f, d.sites);
  CHECK(x.rows() == 2);
  CHECK(x(0, 0) == 1.0);
  CHECK(x(1, 1) == 0.7);
  CHECK(x(1, 2) == 9.0);
  CHECK_THROWS_AS(geo_design({Term::mu()}, d.sites), ValidationError);

  Eigen::VectorXd mu(2), sigma(2), xi(2);
  mu << 10, 11;
  sigma << 1, 2;
  xi << 0.1, -0.1;
  Eigen::MatrixXd a = angular_design({Term::intercept(), Term::mu(), Term::xi()}, d.sites, mu, sigma, xi);
  CHECK(a(1, 1) == 11.0);
  CHECK(a(0, 2) == 0.1);
}

TEST_CASE("dataset validation") {
  Dataset d = small_dataset();
  CHECK_NOTHROW(d.validate());
  CHECK(d.k() == 2);
  CHECK(d.n() == 3);
  CHECK(d.coords()(1, 0) == 0.7);

  Dataset missing = d;
  missing.maxima(1, 0) = std::numeric_limits<double>::quiet_NaN();
  missing.angles(2, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_NOTHROW(missing.validate());
  CHECK_FALSE(missing.has_max(1, 0));
  CHECK_FALSE(missing.has_angle(2, 1));

  Dataset bad = d;
  bad.angles(0, 0) = 7.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = d;
  bad.sites[1].id = "A";
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = d;
  bad.maxima.col(1).setConstant(std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = d;
  bad.years.pop_back();
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = d;
  bad.maxima.conservativeResize(3, 1);
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("priors") {
  ModelSpec spec;
  spec.mu = {Term::intercept(), Term::lat()};
  spec.theta1 = {Term::intercept()};
  spec.theta2 = {Term::intercept(), Term::xi()};
  Priors p = Priors::defaults(spec, 50.0);
  CHECK(p.beta_mu.mean.size() == 2);
  CHECK(p.beta_theta.cov(2, 2) == 50.0);
  CHECK_NOTHROW(p.validate(spec));

  // median of IG(2, 1) is 1 / median(Gamma(2, 1)) = 1 / 1.678347
  CHECK(InverseGammaPrior{2.0, 1.0}.median() == doctest::Approx(1.0 / 1.6783469900166608).epsilon(1e-10));
  CHECK(GammaPrior{2.0, 1.0}.median() == doctest::Approx(1.6783469900166608).epsilon(1e-10));

  Priors bad = p;
  bad.beta_mu.mean.resize(3);
  CHECK_THROWS_AS(bad.validate(spec), ValidationError);
  bad = p;
  bad.sill_xi.scale = 0.0;
  CHECK_THROWS_AS(bad.validate(spec), ValidationError);
  bad = p;
  bad.tau_theta.shape = -1.0;
  CHECK_THROWS_AS(bad.validate(spec), ValidationError);
  bad = p;
  bad.beta_sigma.cov(0, 0) = -1.0;
  CHECK_THROWS_AS(bad.validate(spec), ValidationError);
}

TEST_CASE("chain state invariants") {
  Dataset d = small_dataset();
  ModelSpec spec;
  spec.theta1 = {Term::intercept()};
  spec.theta2 = {Term::intercept()};
  ChainState s;
  for (auto& g : s.gev) {
    g.values = Eigen::VectorXd::Zero(2);
    g.beta = Eigen::VectorXd::Zero(1);
  }
  s.gev[0].values << 11, 12;
  s.gev[1].values << 1, 1;
  s.angular.radii = Eigen::MatrixXd::Ones(3, 2);
  s.angular.angles = d.angles;
  s.angular.beta = Eigen::VectorXd::Zero(2);
  CHECK_NOTHROW(s.check_invariants(d, spec));

  ChainState bad = s;
  bad.gev[1].values(0) = -0.1;
  CHECK_THROWS_AS(bad.check_invariants(d, spec), std::logic_error);
  bad = s;
  bad.angular.rho = 1.0;
  CHECK_THROWS_AS(bad.check_invariants(d, spec), std::logic_error);
  bad = s;
  bad.angular.radii(1, 1) = 0.0;
  CHECK_THROWS_AS(bad.check_invariants(d, spec), std::logic_error);
  bad = s;
  // xi = -1 bounds the support above by mu + sigma = 9, below the observed 11
  bad.gev[2].values(0) = -1.0;
  bad.gev[0].values(0) = 8.0;
  CHECK_THROWS_AS(bad.check_invariants(d, spec), std::logic_error);
  bad = s;
  bad.gev[0].sill = 0.0;
  CHECK_THROWS_AS(bad.check_invariants(d, spec), std::logic_error);
}
