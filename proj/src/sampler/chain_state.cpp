#include "exang/sampler/chain_state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace exang {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::logic_error("chain state invariant violated: " + what);
}

}  // namespace

void ChainState::check_invariants(const Dataset& data, const ModelSpec& spec) const {
  const auto k = data.k();
  for (Layer layer : kGevLayers) {
    const auto& g = this->layer(layer);
    const std::string name = layer_name(layer);
    require(g.values.size() == k, name + " has wrong length");
    require(g.values.allFinite(), name + " is not finite");
    require(g.beta.size() == static_cast<Eigen::Index>(spec.formula(layer).size()), "beta_" + name + " length");
    require(g.sill > 0.0 && std::isfinite(g.sill), "tau_" + name + " must be positive");
    require(g.range > 0.0 && std::isfinite(g.range), "lambda_" + name + " must be positive");
    require(g.shape > 0.0 && g.shape <= 2.0, "kappa_" + name + " must lie in (0, 2]");
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    const GevParams p = gev_at(j);
    require(p.sigma > 0.0, "sigma must be positive at site " + std::to_string(j));
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      if (data.has_max(i, j)) {
        require(gev_in_support(data.maxima(i, j), p),
                "observation (" + std::to_string(i) + ", " + std::to_string(j) + ") outside GEV support");
      }
    }
  }
  if (!spec.has_angular()) return;
  const auto& a = angular;
  require(a.radii.rows() == data.n() && a.radii.cols() == k, "radii shape");
  require(a.angles.rows() == data.n() && a.angles.cols() == k, "angles shape");
  require((a.radii.array() > 0.0).all() && a.radii.allFinite(), "radii must be positive");
  require(a.angles.allFinite(), "angles must be finite");
  require(a.beta.size() == spec.n_beta_theta() && a.beta.allFinite(), "beta_theta");
  require(a.tau > 0.0 && std::isfinite(a.tau), "tau_theta must be positive");
  require(a.range > 0.0 && std::isfinite(a.range), "lambda_theta must be positive");
  require(a.rho > -1.0 && a.rho < 1.0, "rho_theta must lie in (-1, 1)");
  require(a.shape > 0.0 && a.shape <= 2.0, "kappa_theta must lie in (0, 2]");
}

}  // namespace exang
