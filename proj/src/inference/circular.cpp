#include "exang/inference/circular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exang/errors.hpp"
#include "exang/numerics/distributions.hpp"
#include "exang/pgp/projected_gp.hpp"

namespace exang {

namespace {

constexpr double kGridStep = kTwoPi / kKdeGridSize;

// I2(2k) / I0(k)^2, switching to the large-argument limit sqrt(pi k).
double bessel_ratio(double kappa) {
  if (kappa > 300.0) return std::sqrt(kPi * kappa);
  const double i0 = std::cyl_bessel_i(0.0, kappa);
  return std::cyl_bessel_i(2.0, 2.0 * kappa) / (i0 * i0);
}

}  // namespace

double mean_resultant_length(std::span<const double> angles) {
  if (angles.empty()) throw ContractError("mean_resultant_length: empty sample");
  double c = 0.0, s = 0.0;
  for (double a : angles) {
    c += std::cos(a);
    s += std::sin(a);
  }
  const double n = static_cast<double>(angles.size());
  return std::min(1.0, std::hypot(c, s) / n);
}

double circular_std(double rbar) {
  if (rbar < 1e-12) return std::numeric_limits<double>::infinity();
  if (rbar >= 1.0) return 0.0;
  return std::sqrt(-2.0 * std::log(rbar));
}

double von_mises_kappa_estimate(double rbar) {
  if (rbar < 0.53) return 2.0 * rbar + rbar * rbar * rbar + 5.0 * std::pow(rbar, 5) / 6.0;
  if (rbar < 0.85) return -0.4 + 1.39 * rbar + 0.43 / (1.0 - rbar);
  const double denom = rbar * rbar * rbar - 4.0 * rbar * rbar + 3.0 * rbar;
  if (!(denom > 1e-12)) return 1e12;
  return 1.0 / denom;
}

double circular_bandwidth(std::span<const double> angles) {
  const double n = static_cast<double>(angles.size());
  const double kappa = von_mises_kappa_estimate(mean_resultant_length(angles));
  if (!(kappa > 1e-8)) return kPi;
  const double nu = std::pow(3.0 * n * kappa * kappa * bessel_ratio(kappa) / (4.0 * std::sqrt(kPi)), 0.4);
  return std::clamp(1.0 / std::sqrt(nu), kGridStep, kPi);
}

std::vector<double> wrapped_kde(std::span<const double> angles, double bandwidth) {
  if (angles.empty()) throw ContractError("wrapped_kde: empty sample");
  const double h = bandwidth > 0.0 ? std::max(bandwidth, kGridStep) : circular_bandwidth(angles);
  const int g = kKdeGridSize;

  std::vector<double> bins(g, 0.0);
  for (double a : angles) {
    const double pos = wrap_angle(a) / kGridStep;
    const double fl = std::floor(pos);
    const double frac = pos - fl;
    const int lo = static_cast<int>(fl) % g;
    bins[lo] += 1.0 - frac;
    bins[(lo + 1) % g] += frac;
  }

  std::vector<double> kernel(g, 0.0);
  const int wraps = static_cast<int>(std::ceil(6.0 * h / kTwoPi)) + 1;
  for (int d = 0; d < g; ++d) {
    const double delta = d * kGridStep;
    double v = 0.0;
    for (int m = -wraps; m <= wraps; ++m) {
      const double z = (delta + kTwoPi * m) / h;
      v += std::exp(-0.5 * z * z);
    }
    kernel[d] = v / (h * std::sqrt(kTwoPi));
  }

  const double n = static_cast<double>(angles.size());
  std::vector<double> dens(g, 0.0);
  for (int b = 0; b < g; ++b) {
    if (bins[b] == 0.0) continue;
    const double w = bins[b] / n;
    for (int i = 0; i < g; ++i) dens[i] += w * kernel[(i - b + g) % g];
  }
  return dens;
}

CircularSummary circular_summary(std::span<const double> angles) {
  if (angles.empty()) throw ContractError("circular_summary: empty sample");
  CircularSummary out;
  out.mean_resultant = mean_resultant_length(angles);
  out.dispersion = circular_std(out.mean_resultant);

  const auto dens = wrapped_kde(angles);
  const int g = kKdeGridSize;
  const double top = *std::max_element(dens.begin(), dens.end());
  std::vector<std::pair<double, double>> found;  // (density, location)
  for (int i = 0; i < g; ++i) {
    const double l = dens[(i - 1 + g) % g], c = dens[i], r = dens[(i + 1) % g];
    if (!(c > l && c >= r) || c < 0.1 * top) continue;
    const double curv = l - 2.0 * c + r;
    const double offset = curv < 0.0 ? std::clamp(0.5 * (l - r) / curv, -0.5, 0.5) : 0.0;
    found.emplace_back(c, wrap_angle((i + offset) * kGridStep));
  }
  if (found.empty()) {
    const auto it = std::max_element(dens.begin(), dens.end());
    found.emplace_back(*it, static_cast<double>(it - dens.begin()) * kGridStep);
  }
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& f : found) out.modes.push_back(f.second);
  out.mode = out.modes.front();
  out.n_modes = static_cast<int>(out.modes.size());
  return out;
}

double angular_distance(double a, double b) {
  const double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kTwoPi - d);
}

}  // namespace exang
