#include "exang/model/priors.hpp"

#include <boost/math/distributions/gamma.hpp>

#include "exang/errors.hpp"

namespace exang {

double InverseGammaPrior::median() const {
  boost::math::gamma_distribution<double> g(shape, 1.0 / scale);
  return 1.0 / boost::math::quantile(g, 0.5);
}

double GammaPrior::median() const {
  boost::math::gamma_distribution<double> g(shape, scale);
  return boost::math::quantile(g, 0.5);
}

const GaussianPrior& Priors::beta(Layer layer) const {
  switch (layer) {
    case Layer::Mu: return beta_mu;
    case Layer::Sigma: return beta_sigma;
    case Layer::Xi: return beta_xi;
  }
  return beta_mu;
}

GaussianPrior& Priors::beta(Layer layer) {
  return const_cast<GaussianPrior&>(static_cast<const Priors&>(*this).beta(layer));
}

const InverseGammaPrior& Priors::sill(Layer layer) const {
  switch (layer) {
    case Layer::Mu: return sill_mu;
    case Layer::Sigma: return sill_sigma;
    case Layer::Xi: return sill_xi;
  }
  return sill_mu;
}

InverseGammaPrior& Priors::sill(Layer layer) {
  return const_cast<InverseGammaPrior&>(static_cast<const Priors&>(*this).sill(layer));
}

const GammaPrior& Priors::range(Layer layer) const {
  switch (layer) {
    case Layer::Mu: return range_mu;
    case Layer::Sigma: return range_sigma;
    case Layer::Xi: return range_xi;
  }
  return range_mu;
}

GammaPrior& Priors::range(Layer layer) {
  return const_cast<GammaPrior&>(static_cast<const Priors&>(*this).range(layer));
}

Priors Priors::defaults(const ModelSpec& spec, double beta_variance) {
  auto iso = [beta_variance](Eigen::Index p) {
    return GaussianPrior{Eigen::VectorXd::Zero(p), beta_variance * Eigen::MatrixXd::Identity(p, p)};
  };
  Priors pr;
  pr.beta_mu = iso(static_cast<Eigen::Index>(spec.mu.size()));
  pr.beta_sigma = iso(static_cast<Eigen::Index>(spec.sigma.size()));
  pr.beta_xi = iso(static_cast<Eigen::Index>(spec.xi.size()));
  pr.beta_theta = iso(spec.n_beta_theta());
  return pr;
}

void Priors::validate(const ModelSpec& spec) const {
  auto check_gauss = [](const GaussianPrior& g, std::size_t p, const char* what) {
    const auto pp = static_cast<Eigen::Index>(p);
    if (g.mean.size() != pp || g.cov.rows() != pp || g.cov.cols() != pp) {
      throw ValidationError(std::string("prior for ") + what + " does not match the formula length");
    }
    if (p > 0) {
      Eigen::LLT<Eigen::MatrixXd> llt(g.cov);
      if (llt.info() != Eigen::Success) {
        throw ValidationError(std::string("prior covariance for ") + what + " is not positive definite");
      }
    }
  };
  check_gauss(beta_mu, spec.mu.size(), "beta_mu");
  check_gauss(beta_sigma, spec.sigma.size(), "beta_sigma");
  check_gauss(beta_xi, spec.xi.size(), "beta_xi");
  check_gauss(beta_theta, static_cast<std::size_t>(spec.n_beta_theta()), "beta_theta");
  for (const auto* ig : {&sill_mu, &sill_sigma, &sill_xi}) {
    if (!(ig->shape > 0.0) || !(ig->scale > 0.0)) throw ValidationError("inverse gamma prior needs positive shape and scale");
  }
  for (const auto* g : {&range_mu, &range_sigma, &range_xi, &range_theta, &tau_theta}) {
    if (!(g->shape > 0.0) || !(g->scale > 0.0)) throw ValidationError("gamma prior needs positive shape and scale");
  }
}

}  // namespace exang
