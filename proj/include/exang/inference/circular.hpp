#pragma once

#include <span>
#include <vector>

namespace exang {

/// Summary of a sample of angles. dispersion is the circular standard
/// deviation sqrt(-2 log Rbar); it is +infinity when Rbar vanishes.
struct CircularSummary {
  double mode = 0.0;  // main (highest-density) mode in [0, 2 pi)
  double dispersion = 0.0;
  int n_modes = 1;
  double mean_resultant = 0.0;
  std::vector<double> modes;  // all retained modes, by decreasing density
};

inline constexpr int kKdeGridSize = 720;

double mean_resultant_length(std::span<const double> angles);

// sqrt(-2 log rbar), +inf below 1e-12.
double circular_std(double rbar);

// Best-Fisher approximation to the inverse of A(kappa) = I1(kappa) / I0(kappa).
double von_mises_kappa_estimate(double rbar);

/// Plug-in bandwidth for a von Mises kernel (concentration nu), returned as
/// the equivalent wrapped-normal standard deviation 1 / sqrt(nu).
double circular_bandwidth(std::span<const double> angles);

/// Wrapped-normal kernel density estimate on a uniform grid of
/// kKdeGridSize points starting at 0 (linear binning, circular convolution).
/// bandwidth <= 0 selects circular_bandwidth(angles), floored at the grid
/// spacing.
std::vector<double> wrapped_kde(std::span<const double> angles, double bandwidth = 0.0);

/// KDE-based modes (local maxima above 10% of the global maximum, refined by
/// parabolic interpolation) plus the mean resultant length and circular
/// standard deviation. Throws ContractError for an empty sample.
CircularSummary circular_summary(std::span<const double> angles);

// Smallest absolute difference between two angles, in [0, pi].
double angular_distance(double a, double b);

}  // namespace exang
