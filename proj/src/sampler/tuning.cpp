#include "exang/sampler/tuning.hpp"

#include <algorithm>
#include <cmath>

namespace exang {

AdaptiveScale::AdaptiveScale(double scale, double max_scale)
    : log_scale(std::log(scale)), max_log_scale(std::log(max_scale)) {}

double AdaptiveScale::scale() const { return std::exp(log_scale); }

void AdaptiveScale::record(bool was_accepted) {
  ++proposed;
  if (was_accepted) ++accepted;
}

void AdaptiveScale::adapt(double accept_prob, long iteration) {
  const double gain = std::pow(static_cast<double>(iteration) + 1.0, -0.6);
  log_scale += gain * (std::clamp(accept_prob, 0.0, 1.0) - kTargetAcceptance);
  log_scale = std::clamp(log_scale, -20.0, max_log_scale);
}

double AdaptiveScale::acceptance_rate() const {
  return proposed == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposed);
}

void TuningState::reset_counters() {
  auto reset = [](AdaptiveScale& a) { a.proposed = a.accepted = 0; };
  for (auto& layer : gev_site) std::for_each(layer.begin(), layer.end(), reset);
  std::for_each(radius.begin(), radius.end(), reset);
  for (auto* a : {&tau_theta, &range_theta, &rho_theta, &shape_theta}) reset(*a);
  std::for_each(range_gev.begin(), range_gev.end(), reset);
  std::for_each(shape_gev.begin(), shape_gev.end(), reset);
}

std::vector<std::pair<std::string, double>> TuningState::acceptance_rates(bool angular) const {
  auto pooled = [](const std::vector<AdaptiveScale>& v) {
    long p = 0, a = 0;
    for (const auto& s : v) {
      p += s.proposed;
      a += s.accepted;
    }
    return p == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(p);
  };
  static const char* names[3] = {"mu", "sigma", "xi"};
  std::vector<std::pair<std::string, double>> out;
  for (int l = 0; l < 3; ++l) out.emplace_back(std::string(names[l]) + "_sites", pooled(gev_site[l]));
  if (angular) out.emplace_back("radius", pooled(radius));
  for (int l = 0; l < 3; ++l) out.emplace_back(std::string("lambda_") + names[l], range_gev[l].acceptance_rate());
  for (int l = 0; l < 3; ++l) {
    if (shape_gev[l].proposed > 0) {
      out.emplace_back(std::string("kappa_") + names[l], shape_gev[l].acceptance_rate());
    }
  }
  if (angular) {
    out.emplace_back("tau_theta", tau_theta.acceptance_rate());
    out.emplace_back("lambda_theta", range_theta.acceptance_rate());
    out.emplace_back("rho_theta", rho_theta.acceptance_rate());
    if (shape_theta.proposed > 0) out.emplace_back("kappa_theta", shape_theta.acceptance_rate());
  }
  return out;
}

}  // namespace exang
