#pragma once

#include "exang/random.hpp"

namespace exang {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kLogTwoPi = 1.83787706640934548356;

// Inverse gamma with density proportional to x^{-shape-1} exp(-rate / x).
double inverse_gamma_sample(double shape, double rate, Rng& rng);
double inverse_gamma_logpdf(double x, double shape, double rate);

// Gamma with shape/scale parameterization.
double gamma_logpdf(double x, double shape, double scale);
double gamma_sample(double shape, double scale, Rng& rng);

double normal_cdf(double x);
double normal_logpdf(double x, double mean, double sd);

struct LogNormalStep {
  double proposal;
  double log_hastings;  // log(proposal / current)
};

/// Log-normal random walk: proposal = current * exp(step_sd * Z). The
/// returned correction is the log proposal-density ratio q(cur|prop)/q(prop|cur).
LogNormalStep lognormal_step(double current, double step_sd, Rng& rng);

}  // namespace exang
