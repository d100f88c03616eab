#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace exang {

inline constexpr double kTargetAcceptance = 0.44;

/// Random-walk scale adapted by Robbins-Monro on the log scale during burn-in:
/// log s <- log s + t^{-0.6} (alpha - 0.44).
struct AdaptiveScale {
  double log_scale = 0.0;
  double max_log_scale = 5.0;
  long proposed = 0;
  long accepted = 0;

  AdaptiveScale() = default;
  explicit AdaptiveScale(double scale, double max_scale = 1e5);

  double scale() const;
  void record(bool was_accepted);
  void adapt(double accept_prob, long iteration);
  double acceptance_rate() const;
};

struct TuningState {
  std::array<std::vector<AdaptiveScale>, 3> gev_site;  // per layer, per site
  std::vector<AdaptiveScale> radius;                   // per site
  AdaptiveScale tau_theta, range_theta, rho_theta, shape_theta;
  std::array<AdaptiveScale, 3> range_gev, shape_gev;
  bool adapting = true;
  long iteration = 0;

  void reset_counters();

  // Acceptance rate per block (site-level blocks pooled).
  std::vector<std::pair<std::string, double>> acceptance_rates(bool angular) const;
};

}  // namespace exang
