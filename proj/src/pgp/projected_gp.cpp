#include "exang/pgp/projected_gp.hpp"

#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "exang/errors.hpp"
#include "exang/numerics/distributions.hpp"
#include "exang/numerics/mvn.hpp"

namespace exang {

namespace {

// log(phi(d) + d * Phi(d)) for the standard normal phi, Phi.
double log_phi_plus_d_cdf(double d) {
  if (d > -5.0) {
    const double phi = std::exp(-0.5 * d * d) / std::sqrt(kTwoPi);
    return std::log(phi + d * normal_cdf(d));
  }
  // phi(d) + d Phi(d) = phi(x) (1 - x R(x)), x = -d, R the Mills ratio.
  const double x = -d;
  double tail;
  if (x > 30.0) {
    // 1 - x R(x) ~ x^-2 - 3 x^-4 + 15 x^-6 - 105 x^-8 + ...
    const double u = 1.0 / (x * x);
    double term = u;
    tail = 0.0;
    for (int m = 1; m < 12; ++m) {
      tail += term;
      term *= -static_cast<double>(2 * m + 1) * u;
    }
  } else {
    // Continued fraction R(x) = 1/(x+ 1/(x+ 2/(x+ 3/(x+ ...)))).
    double cf = x;
    for (int m = 200; m >= 1; --m) cf = x + m / cf;
    const double mills = 1.0 / cf;
    tail = 1.0 - x * mills;
  }
  return -0.5 * x * x - 0.5 * std::log(kTwoPi) + std::log(tail);
}

}  // namespace

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

double angle_from_xy(double x1, double x2) {
  if (x1 == 0.0 && x2 == 0.0) throw DomainError("angle_from_xy: zero vector has no direction");
  return wrap_angle(std::atan2(x2, x1));
}

double joint_logdensity(const Eigen::VectorXd& angles, const Eigen::VectorXd& radii,
                        const Eigen::VectorXd& mean, const SpdMatrix& cov) {
  const Eigen::Index k = angles.size();
  if (radii.size() != k || mean.size() != 2 * k || cov.dim() != 2 * k) {
    throw ContractError("joint_logdensity: dimension mismatch");
  }
  Eigen::VectorXd x(2 * k);
  double log_jac = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!(radii(i) > 0.0)) throw DomainError("joint_logdensity: radii must be positive");
    x(i) = radii(i) * std::cos(angles(i));
    x(k + i) = radii(i) * std::sin(angles(i));
    log_jac += std::log(radii(i));
  }
  return mvn_logpdf(x, mean, cov) + log_jac;
}

double marginal_angle_logpdf(double theta, const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov) {
  const double det = cov(0, 0) * cov(1, 1) - cov(0, 1) * cov(1, 0);
  if (!(cov(0, 0) > 0.0) || !(det > 0.0)) throw DomainError("marginal_angle_logpdf: covariance not SPD");
  Eigen::Matrix2d prec;
  prec << cov(1, 1), -cov(0, 1), -cov(1, 0), cov(0, 0);
  prec /= det;
  const Eigen::Vector2d u(std::cos(theta), std::sin(theta));
  const double a = u.dot(prec * u);
  const double b = u.dot(prec * mean);
  const double c = mean.dot(prec * mean);
  const double d = b / std::sqrt(a);
  // f = exp(-C/2) / (2 pi A sqrt|S|) * (phi(D) + D Phi(D)) / phi(D)
  return -0.5 * c - std::log(kTwoPi * a) - 0.5 * std::log(det) + log_phi_plus_d_cdf(d) +
         0.5 * d * d + 0.5 * std::log(kTwoPi);
}

double projected_normal_mode(const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov) {
  constexpr int kGrid = 3600;
  constexpr double step = kTwoPi / kGrid;
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double v = marginal_angle_logpdf(i * step, mean, cov);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  auto neg = [&](double t) { return -marginal_angle_logpdf(t, mean, cov); };
  const auto r = boost::math::tools::brent_find_minima(neg, (best - 1) * step, (best + 1) * step, 40);
  return wrap_angle(r.first);
}

PgpDraw sample_pgp(const Eigen::VectorXd& mean, const SpdMatrix& cov, Rng& rng) {
  if (mean.size() % 2 != 0 || mean.size() != cov.dim()) {
    throw ContractError("sample_pgp: mean must have length 2k matching the covariance");
  }
  const Eigen::Index k = mean.size() / 2;
  PgpDraw out{Eigen::VectorXd(k), Eigen::VectorXd(k)};
  Eigen::VectorXd x = mvn_sample(mean, cov, rng);
  for (Eigen::Index i = 0; i < k; ++i) {
    while (x(i) == 0.0 && x(k + i) == 0.0) x = mvn_sample(mean, cov, rng);
    out.radii(i) = std::hypot(x(i), x(k + i));
    out.angles(i) = angle_from_xy(x(i), x(k + i));
  }
  return out;
}

}  // namespace exang
