#include "exang/inference/predict.hpp"

#include <algorithm>
#include <cmath>

#include "exang/errors.hpp"
#include "exang/extremes/gev.hpp"
#include "exang/numerics/covariance.hpp"
#include "exang/pgp/projected_gp.hpp"

namespace exang {

double empirical_quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw ContractError("empirical_quantile: empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) throw ContractError("empirical_quantile: prob outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

PosteriorSummary summarize_draws(const Eigen::VectorXd& draws, double mass) {
  const std::vector<double> v(draws.data(), draws.data() + draws.size());
  const double tail = 0.5 * (1.0 - mass);
  return {empirical_quantile(v, 0.5), empirical_quantile(v, tail), empirical_quantile(v, 1.0 - tail)};
}

namespace {

void check_covariates(const Formula& f, const Site& site) {
  const auto& c = site.covariates;
  for (const auto& t : f) {
    const bool missing = (t.kind == TermKind::Lon && !std::isfinite(c.lon)) ||
                         (t.kind == TermKind::Lat && !std::isfinite(c.lat)) ||
                         (t.kind == TermKind::Alt && !std::isfinite(c.alt));
    if (missing) throw ValidationError("query site '" + site.id + "' lacks covariate '" + t.name() + "'");
  }
}

struct KrigingWeights {
  Eigen::VectorXd weights;  // C^{-1} c*
  double residual_var;      // 1 - c*^T C^{-1} c*, clamped at 0
};

}  // namespace

std::vector<PredictionDraws> predict_sites(const Trace& trace, const Dataset& data, const ModelSpec& spec,
                                           const std::vector<Site>& queries, Rng& rng) {
  const TraceLayout layout(spec, data.k());
  if (trace.columns != layout.names()) {
    throw ValidationError("trace columns do not match the model specification and data");
  }
  if (trace.rows() == 0) throw ValidationError("trace has no retained iterations");
  for (const auto& q : queries) {
    for (Layer l : kGevLayers) check_covariates(spec.formula(l), q);
    check_covariates(spec.theta1, q);
    check_covariates(spec.theta2, q);
    if (!q.coord.allFinite()) throw ValidationError("query site '" + q.id + "' has no coordinates");
  }

  const bool angular = spec.has_angular();
  const SiteCoords coords = data.coords();
  const Eigen::MatrixXd dist = distance_matrix(coords);
  std::array<Eigen::MatrixXd, 3> design;
  for (Layer l : kGevLayers) design[static_cast<int>(l)] = geo_design(spec.formula(l), data.sites);
  std::vector<Eigen::VectorXd> qdist;
  std::array<Eigen::MatrixXd, 3> qdesign;
  for (const auto& q : queries) qdist.push_back(distances_to(coords, q.coord));
  for (Layer l : kGevLayers) qdesign[static_cast<int>(l)] = geo_design(spec.formula(l), queries);

  const auto s_rows = trace.rows();
  std::vector<PredictionDraws> out(queries.size());
  for (auto& d : out) {
    d.mu.resize(s_rows);
    d.sigma.resize(s_rows);
    d.xi.resize(s_rows);
    if (angular) d.theta.resize(s_rows);
  }

  for (Eigen::Index t = 0; t < s_rows; ++t) {
    const ChainState st = layout.decode(trace.draws.row(t));
    std::array<Eigen::VectorXd, 3> resid;  // v - D beta
    std::array<std::vector<KrigingWeights>, 3> kw;
    for (int l = 0; l < 3; ++l) {
      const auto& g = st.gev[l];
      const SpdMatrix c(correlation_matrix(dist, g.range, g.shape));
      resid[l] = g.values - design[l] * g.beta;
      for (std::size_t q = 0; q < queries.size(); ++q) {
        const Eigen::VectorXd cs = qdist[q].unaryExpr(
            [&](double h) { return powered_exponential_correlation(h, g.range, g.shape); });
        const Eigen::VectorXd w = c.solve(cs);
        kw[l].push_back({w, std::max(0.0, 1.0 - cs.dot(w))});
      }
    }
    for (std::size_t q = 0; q < queries.size(); ++q) {
      const auto qi = static_cast<Eigen::Index>(q);
      std::array<double, 3> val{};
      for (int l = 0; l < 3; ++l) {
        const auto& g = st.gev[l];
        const auto& k = kw[l][q];
        const double mean = qdesign[l].row(qi).dot(g.beta) + k.weights.dot(resid[l]);
        const double sd = std::sqrt(g.sill * k.residual_var);
        double v = mean + sd * standard_normal(rng);
        if (l == 1) {
          int attempts = 0;
          while (!(v > 0.0)) {
            if (++attempts > 1000) {
              throw DomainError("predict_sites: could not draw a positive scale at site '" + queries[q].id + "'");
            }
            v = mean + sd * standard_normal(rng);
          }
        }
        val[static_cast<std::size_t>(l)] = v;
      }
      auto& d = out[q];
      d.mu(t) = val[0];
      d.sigma(t) = val[1];
      d.xi(t) = val[2];
      if (angular) {
        const GevParams gp{val[0], val[1], val[2]};
        const auto& cov = queries[q].covariates;
        const auto p1 = static_cast<Eigen::Index>(spec.theta1.size());
        const auto p2 = static_cast<Eigen::Index>(spec.theta2.size());
        const Eigen::Vector2d m(design_row(spec.theta1, cov, gp).dot(st.angular.beta.head(p1)),
                                design_row(spec.theta2, cov, gp).dot(st.angular.beta.tail(p2)));
        const Eigen::Matrix2d l = st.angular.cov_params().component_matrix().llt().matrixL();
        const Eigen::Vector2d x = m + l * Eigen::Vector2d(standard_normal(rng), standard_normal(rng));
        d.theta(t) = angle_from_xy(x(0), x(1));
      }
    }
  }
  return out;
}

Eigen::VectorXd return_level_draws(const PredictionDraws& draws, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw DomainError("return_level: probability must lie in (0, 1)");
  Eigen::VectorXd out(draws.mu.size());
  for (Eigen::Index t = 0; t < out.size(); ++t) {
    out(t) = gev_quantile(prob, GevParams{draws.mu(t), draws.sigma(t), draws.xi(t)});
  }
  return out;
}

PosteriorSummary return_level(const PredictionDraws& draws, double prob) {
  return summarize_draws(return_level_draws(draws, prob));
}

}  // namespace exang
