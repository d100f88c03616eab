#include "exang/inference/waic.hpp"

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "exang/errors.hpp"
#include "exang/extremes/gev.hpp"
#include "exang/pgp/projected_gp.hpp"

namespace exang {

WaicBlock waic_from_pointwise(const Eigen::MatrixXd& loglik) {
  const auto s = loglik.rows();
  if (s < 2) throw ValidationError("WAIC needs at least 2 retained iterations");
  WaicBlock b;
  b.n_points = static_cast<long>(loglik.cols());
  for (Eigen::Index p = 0; p < loglik.cols(); ++p) {
    const auto col = loglik.col(p);
    const double top = col.maxCoeff();
    if (!std::isfinite(top)) {
      b.lppd += top;
      b.p_waic = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    b.lppd += top + std::log((col.array() - top).exp().mean());
    const double mean = col.mean();
    b.p_waic += (col.array() - mean).square().sum() / static_cast<double>(s - 1);
  }
  b.waic = -2.0 * (b.lppd - b.p_waic);
  return b;
}

WaicReport waic(const Trace& trace, const Dataset& data, const ModelSpec& spec) {
  const TraceLayout layout(spec, data.k());
  if (trace.columns != layout.names()) {
    throw ValidationError("trace columns do not match the model specification and data");
  }
  const auto s = trace.rows();
  if (s < 2) throw ValidationError("WAIC needs at least 2 retained iterations");
  const auto n = data.n();
  const auto k = data.k();

  std::vector<std::pair<Eigen::Index, Eigen::Index>> max_idx, ang_idx;
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (data.has_max(i, j)) max_idx.emplace_back(i, j);
      if (spec.has_angular() && data.has_angle(i, j)) ang_idx.emplace_back(i, j);
    }
  }
  Eigen::MatrixXd ll_eta(s, static_cast<Eigen::Index>(max_idx.size()));
  Eigen::MatrixXd ll_theta(s, static_cast<Eigen::Index>(ang_idx.size()));

  for (Eigen::Index t = 0; t < s; ++t) {
    const ChainState st = layout.decode(trace.draws.row(t));
    for (std::size_t p = 0; p < max_idx.size(); ++p) {
      const auto [i, j] = max_idx[p];
      ll_eta(t, static_cast<Eigen::Index>(p)) = gev_logpdf(data.maxima(i, j), st.gev_at(j));
    }
    if (ang_idx.empty()) continue;
    const Eigen::MatrixXd d1 = angular_design(spec.theta1, data.sites, st.gev[0].values, st.gev[1].values,
                                              st.gev[2].values);
    const Eigen::MatrixXd d2 = angular_design(spec.theta2, data.sites, st.gev[0].values, st.gev[1].values,
                                              st.gev[2].values);
    const Eigen::VectorXd m1 = d1 * st.angular.beta.head(d1.cols());
    const Eigen::VectorXd m2 = d2 * st.angular.beta.tail(d2.cols());
    const Eigen::Matrix2d cov = st.angular.cov_params().component_matrix();
    for (std::size_t p = 0; p < ang_idx.size(); ++p) {
      const auto [i, j] = ang_idx[p];
      ll_theta(t, static_cast<Eigen::Index>(p)) =
          marginal_angle_logpdf(data.angles(i, j), Eigen::Vector2d(m1(j), m2(j)), cov);
    }
  }

  WaicReport r;
  r.eta = waic_from_pointwise(ll_eta);
  if (!ang_idx.empty()) r.theta = waic_from_pointwise(ll_theta);
  r.total = r.theta.waic + r.eta.waic;
  return r;
}

}  // namespace exang
