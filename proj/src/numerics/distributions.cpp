#include "exang/numerics/distributions.hpp"

#include <cmath>
#include <limits>

#include "exang/errors.hpp"

namespace exang {

double gamma_sample(double shape, double scale, Rng& rng) {
  if (!(shape > 0.0) || !(scale > 0.0)) throw DomainError("gamma: shape and scale must be positive");
  std::gamma_distribution<double> g(shape, scale);
  return g(rng);
}

double inverse_gamma_sample(double shape, double rate, Rng& rng) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw DomainError("inverse gamma: shape and rate must be positive");
  double g = 0.0;
  while (!(g > 0.0)) g = gamma_sample(shape, 1.0 / rate, rng);
  return 1.0 / g;
}

double inverse_gamma_logpdf(double x, double shape, double rate) {
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return shape * std::log(rate) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - rate / x;
}

double gamma_logpdf(double x, double shape, double scale) {
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return -std::lgamma(shape) - shape * std::log(scale) + (shape - 1.0) * std::log(x) - x / scale;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_logpdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * (kLogTwoPi + z * z) - std::log(sd);
}

LogNormalStep lognormal_step(double current, double step_sd, Rng& rng) {
  if (!(current > 0.0)) throw DomainError("lognormal_step: current value must be positive");
  if (!(step_sd >= 0.0)) throw DomainError("lognormal_step: step size must be nonnegative");
  if (step_sd == 0.0) return {current, 0.0};
  const double log_ratio = step_sd * standard_normal(rng);
  return {current * std::exp(log_ratio), log_ratio};
}

}  // namespace exang
