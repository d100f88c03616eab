#include "exang/extremes/gev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "exang/errors.hpp"

namespace exang {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEulerGamma = 0.57721566490153286061;

}  // namespace

void GevParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("GEV scale must be positive");
  if (!std::isfinite(mu) || !std::isfinite(xi)) throw DomainError("GEV parameters must be finite");
}

bool gev_in_support(double z, const GevParams& p) {
  if (std::abs(p.xi) < kGumbelThreshold) return std::isfinite(z);
  return p.sigma + p.xi * (z - p.mu) > 0.0;
}

double gev_logpdf(double z, const GevParams& p) {
  p.validate();
  const double y = (z - p.mu) / p.sigma;
  if (std::abs(p.xi) < kGumbelThreshold) {
    return -std::log(p.sigma) - y - std::exp(-y);
  }
  const double t = 1.0 + p.xi * y;
  if (!(t > 0.0)) return -kInf;
  const double log_t = std::log1p(p.xi * y);
  return -std::log(p.sigma) - (1.0 + 1.0 / p.xi) * log_t - std::exp(-log_t / p.xi);
}

double gev_cdf(double z, const GevParams& p) {
  p.validate();
  const double y = (z - p.mu) / p.sigma;
  if (std::abs(p.xi) < kGumbelThreshold) return std::exp(-std::exp(-y));
  const double t = 1.0 + p.xi * y;
  if (!(t > 0.0)) return p.xi > 0.0 ? 0.0 : 1.0;
  return std::exp(-std::exp(-std::log1p(p.xi * y) / p.xi));
}

double gev_quantile(double pr, const GevParams& p) {
  p.validate();
  if (!(pr > 0.0 && pr < 1.0)) throw DomainError("gev_quantile: probability must lie in (0, 1)");
  const double w = -std::log(pr);
  if (std::abs(p.xi) < kGumbelThreshold) return p.mu - p.sigma * std::log(w);
  return p.mu + p.sigma * std::expm1(-p.xi * std::log(w)) / p.xi;
}

double gev_sample(const GevParams& p, Rng& rng) { return gev_quantile(uniform_open(rng), p); }

GevParams gev_fit_pwm(std::span<const double> sample, double xi_bound) {
  std::vector<double> x(sample.begin(), sample.end());
  x.erase(std::remove_if(x.begin(), x.end(), [](double v) { return !std::isfinite(v); }), x.end());
  if (x.size() < 3) throw ValidationError("gev_fit_pwm: need at least three finite values");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = static_cast<double>(i);  // zero-based rank
    b0 += x[i];
    b1 += x[i] * r / (n - 1.0);
    b2 += x[i] * r * (r - 1.0) / ((n - 1.0) * (n - 2.0));
  }
  b0 /= n;
  b1 /= n;
  b2 /= n;

  GevParams fit;
  const double spread = 2.0 * b1 - b0;
  if (!(spread > 0.0)) {
    // Degenerate sample: every value equal.
    fit.mu = b0;
    fit.sigma = std::max(1e-3, 1e-3 * std::abs(b0));
    fit.xi = 0.0;
    return fit;
  }
  const double c = spread / (3.0 * b2 - b0) - std::log(2.0) / std::log(3.0);
  double k = 7.8590 * c + 2.9554 * c * c;  // Hosking's k = -xi
  k = std::clamp(k, -xi_bound, xi_bound);
  if (std::abs(k) < 1e-6) {
    fit.sigma = spread / std::log(2.0);
    fit.mu = b0 - kEulerGamma * fit.sigma;
    fit.xi = 0.0;
  } else {
    const double g = std::tgamma(1.0 + k);
    fit.sigma = spread * k / (g * (1.0 - std::pow(2.0, -k)));
    fit.mu = b0 + fit.sigma * (g - 1.0) / k;
    fit.xi = -k;
  }
  // Keep every observation strictly inside the support.
  const double lo = x.front();
  const double hi = x.back();
  for (int attempt = 0; attempt < 60; ++attempt) {
    const bool ok = gev_in_support(lo, fit) && gev_in_support(hi, fit) &&
                    fit.sigma + fit.xi * (lo - fit.mu) > 1e-6 * fit.sigma &&
                    fit.sigma + fit.xi * (hi - fit.mu) > 1e-6 * fit.sigma;
    if (ok) break;
    fit.xi *= 0.7;
    if (std::abs(fit.xi) < 1e-4) fit.xi = 0.0;
  }
  return fit;
}

}  // namespace exang
