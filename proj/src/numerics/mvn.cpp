#include "exang/numerics/mvn.hpp"

#include <algorithm>
#include <cmath>

#include "exang/errors.hpp"
#include "exang/numerics/distributions.hpp"

namespace exang {

double mvn_logpdf(const Eigen::VectorXd& x, const Eigen::VectorXd& mean, const SpdMatrix& cov) {
  if (x.size() != mean.size() || x.size() != cov.dim()) {
    throw ContractError("mvn_logpdf: dimension mismatch");
  }
  const double d = static_cast<double>(x.size());
  return -0.5 * (d * kLogTwoPi + cov.log_det() + cov.quad_form(x - mean));
}

Eigen::VectorXd mvn_sample(const Eigen::VectorXd& mean, const SpdMatrix& cov, Rng& rng) {
  if (mean.size() != cov.dim()) throw ContractError("mvn_sample: dimension mismatch");
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = standard_normal(rng);
  return mean + cov.correlate(z);
}

Eigen::VectorXd mvn_sample_semidefinite(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                        Rng& rng) {
  if (mean.size() != cov.rows() || cov.rows() != cov.cols()) {
    throw ContractError("mvn_sample_semidefinite: dimension mismatch");
  }
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = standard_normal(rng);
  if (mean.size() == 1) return mean + std::sqrt(std::max(cov(0, 0), 0.0)) * z;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (cov + cov.transpose()));
  const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return mean + eig.eigenvectors() * root.cwiseProduct(z);
}

ConditionalNormal mvn_conditional(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                  std::span<const Eigen::Index> observed_idx,
                                  const Eigen::VectorXd& observed_vals) {
  const Eigen::Index d = mean.size();
  if (cov.rows() != d || cov.cols() != d) throw ContractError("mvn_conditional: dimension mismatch");
  if (observed_idx.empty() || static_cast<Eigen::Index>(observed_idx.size()) >= d) {
    throw ContractError("mvn_conditional: observed indices must be a nonempty proper subset");
  }
  if (observed_vals.size() != static_cast<Eigen::Index>(observed_idx.size())) {
    throw ContractError("mvn_conditional: observed values do not match indices");
  }
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  for (Eigen::Index i : observed_idx) {
    if (i < 0 || i >= d || seen[static_cast<std::size_t>(i)]) {
      throw ContractError("mvn_conditional: invalid or repeated observed index");
    }
    seen[static_cast<std::size_t>(i)] = true;
  }
  std::vector<Eigen::Index> free_idx;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!seen[static_cast<std::size_t>(i)]) free_idx.push_back(i);
  }
  const auto no = static_cast<Eigen::Index>(observed_idx.size());
  const auto nf = static_cast<Eigen::Index>(free_idx.size());

  Eigen::MatrixXd s_oo(no, no), s_fo(nf, no), s_ff(nf, nf);
  Eigen::VectorXd m_o(no), m_f(nf);
  for (Eigen::Index a = 0; a < no; ++a) {
    m_o(a) = mean(observed_idx[a]);
    for (Eigen::Index b = 0; b < no; ++b) s_oo(a, b) = cov(observed_idx[a], observed_idx[b]);
  }
  for (Eigen::Index a = 0; a < nf; ++a) {
    m_f(a) = mean(free_idx[a]);
    for (Eigen::Index b = 0; b < no; ++b) s_fo(a, b) = cov(free_idx[a], observed_idx[b]);
    for (Eigen::Index b = 0; b < nf; ++b) s_ff(a, b) = cov(free_idx[a], free_idx[b]);
  }
  const SpdMatrix oo(s_oo);
  const Eigen::MatrixXd gain = oo.solve(Eigen::MatrixXd(s_fo.transpose())).transpose();
  ConditionalNormal out;
  out.mean = m_f + gain * (observed_vals - m_o);
  Eigen::MatrixXd c = s_ff - gain * s_fo.transpose();
  out.cov = 0.5 * (c + c.transpose());
  out.free_idx = std::move(free_idx);
  return out;
}

}  // namespace exang
