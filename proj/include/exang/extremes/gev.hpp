#pragma once

#include <span>

#include "exang/random.hpp"

namespace exang {

/// Location, scale and shape of a generalized extreme value distribution.
struct GevParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;

  void validate() const;
};

// Below this |xi| the Gumbel limit is used.
inline constexpr double kGumbelThreshold = 1e-8;

// True iff sigma + xi (z - mu) > 0.
bool gev_in_support(double z, const GevParams& p);

// Log density; -inf outside the support.
double gev_logpdf(double z, const GevParams& p);

double gev_cdf(double z, const GevParams& p);

// Inverse CDF for pr in (0, 1); the return level of probability pr.
double gev_quantile(double pr, const GevParams& p);

double gev_sample(const GevParams& p, Rng& rng);

/// Probability-weighted-moment fit (Hosking et al.) with xi clamped to
/// [-xi_bound, xi_bound]. The result is shrunk towards xi = 0 if needed so that
/// every sample value lies inside the fitted support. Requires >= 3 values.
GevParams gev_fit_pwm(std::span<const double> sample, double xi_bound = 0.5);

}  // namespace exang
