#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "exang/errors.hpp"
#include "exang/extremes/gev.hpp"
#include "oracles.hpp"

using namespace exang;

namespace {

double bisect_quantile(double pr, const GevParams& p) {
  double lo = -50, hi = 50;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (gev_cdf(mid, p) < pr ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("gev_logpdf values") {
  CHECK(gev_logpdf(0.0, {0.0, 1.0, 0.0}) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(gev_logpdf(3.0, {3.0, 2.0, 0.0}) == doctest::Approx(-1.0 - std::log(2.0)));
  // lower bound of support for xi = 0.5 is mu - sigma / xi = -2
  CHECK(gev_logpdf(-2.5, {0.0, 1.0, 0.5}) == -std::numeric_limits<double>::infinity());
  CHECK(gev_logpdf(-2.0, {0.0, 1.0, 0.5}) == -std::numeric_limits<double>::infinity());
  CHECK(gev_logpdf(2.5, {0.0, 1.0, -0.5}) == -std::numeric_limits<double>::infinity());

  GevParams p{0.0, 1.0, 0.2};
  double h = 1e-6;
  double fd = (gev_cdf(1.3 + h, p) - gev_cdf(1.3 - h, p)) / (2 * h);
  CHECK(std::exp(gev_logpdf(1.3, p)) == doctest::Approx(fd).epsilon(1e-8));
  // frozen value of the same density
  CHECK(gev_logpdf(1.3, p) == doctest::Approx(std::log(fd)).epsilon(1e-8));
}

TEST_CASE("gev_cdf and quantile") {
  for (double xi : {-0.4, -1e-9, 0.0, 0.3}) {
    GevParams p{1.5, 0.7, xi};
    CHECK(gev_cdf(1.5, p) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(gev_quantile(std::exp(-1.0), p) == doctest::Approx(1.5).epsilon(1e-12));
  }
  GevParams q{0.0, 1.0, 0.1};
  CHECK(gev_quantile(0.95, q) == doctest::Approx(bisect_quantile(0.95, q)).epsilon(1e-10));
  CHECK(gev_quantile(0.95, q) == doctest::Approx((std::pow(-std::log(0.95), -0.1) - 1) / 0.1).epsilon(1e-14));
  CHECK(gev_quantile(0.9, {2.0, 3.0, 0.0}) == doctest::Approx(2.0 - 3.0 * std::log(-std::log(0.9))));

  CHECK_THROWS_AS(gev_quantile(0.0, q), DomainError);
  CHECK_THROWS_AS(gev_quantile(1.0, q), DomainError);
  CHECK_THROWS_AS(gev_quantile(-0.2, q), DomainError);
  CHECK_THROWS_AS(gev_logpdf(0.0, {0.0, 0.0, 0.1}), DomainError);
  CHECK_THROWS_AS(gev_cdf(0.0, {0.0, -1.0, 0.1}), DomainError);
}

TEST_CASE("quantile round trip and monotonicity") {
  Rng rng = make_stream(21);
  for (int rep = 0; rep < 1000; ++rep) {
    GevParams p{4 * uniform_open(rng) - 2, 0.1 + 3 * uniform_open(rng), uniform_open(rng) - 0.5};
    double pr = uniform_open(rng);
    double z = gev_quantile(pr, p);
    CHECK(gev_cdf(z, p) == doctest::Approx(pr).epsilon(1e-12));
    double pr2 = std::min(pr + 0.01, 0.999999);
    CHECK(gev_quantile(pr2, p) > z);
  }
}

TEST_CASE("support condition matches finiteness") {
  Rng rng = make_stream(22);
  for (int rep = 0; rep < 2000; ++rep) {
    GevParams p{uniform_open(rng), 0.5 + uniform_open(rng), 2 * uniform_open(rng) - 1};
    double z = 10 * uniform_open(rng) - 5;
    bool inside = p.sigma + p.xi * (z - p.mu) > 0;
    CHECK(std::isfinite(gev_logpdf(z, p)) == inside);
    CHECK(gev_in_support(z, p) == inside);
  }
}

TEST_CASE("continuity at xi = 0") {
  for (double z = -3.0; z <= 8.0; z += 0.25) {
    double g = gev_logpdf(z, {0.0, 1.0, 0.0});
    CHECK(std::abs(gev_logpdf(z, {0.0, 1.0, 1e-9}) - g) < 1e-6);
    CHECK(std::abs(gev_logpdf(z, {0.0, 1.0, -1e-9}) - g) < 1e-6);
  }
}

TEST_CASE("density integrates to one") {
  for (double xi : {-0.3, 0.0, 0.3}) {
    GevParams p{0.5, 1.2, xi};
    double lo = xi > 0 ? p.mu - p.sigma / xi : -std::numeric_limits<double>::infinity();
    double hi = xi < 0 ? p.mu - p.sigma / xi : std::numeric_limits<double>::infinity();
    double total = oracle::integrate([&](double z) { return std::exp(gev_logpdf(z, p)); }, lo, hi, 1e-12);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("gev_sample distribution") {
  Rng rng = make_stream(23);
  GevParams gumbel{0.0, 1.0, 0.0};
  const int n = 100000;
  std::vector<double> draws(n);
  for (auto& d : draws) d = gev_sample(gumbel, rng);
  double ks = oracle::ks_statistic(draws, [&](double z) { return gev_cdf(z, gumbel); });
  CHECK(ks < oracle::ks_critical_1pct(n));

  GevParams p{0.0, 1.0, 0.1};
  std::vector<double> big(1000000);
  for (auto& d : big) d = gev_sample(p, rng);
  std::nth_element(big.begin(), big.begin() + 950000, big.end());
  CHECK(big[950000] == doctest::Approx(gev_quantile(0.95, p)).epsilon(0.01));
}

TEST_CASE("sampling uses the inverse CDF") {
  Rng a = make_stream(24), b = make_stream(24);
  GevParams p{1.0, 2.0, -0.2};
  for (int i = 0; i < 50; ++i) CHECK(gev_sample(p, a) == doctest::Approx(gev_quantile(uniform_open(b), p)));
}

TEST_CASE("probability weighted moment fit") {
  Rng rng = make_stream(25);
  GevParams truth{10.0, 2.0, 0.1};
  std::vector<double> draws(5000);
  for (auto& d : draws) d = gev_sample(truth, rng);
  GevParams fit = gev_fit_pwm(draws);
  CHECK(fit.mu == doctest::Approx(10.0).epsilon(0.02));
  CHECK(fit.sigma == doctest::Approx(2.0).epsilon(0.08));
  CHECK(std::abs(fit.xi - 0.1) < 0.05);

  std::vector<double> small{1.0, 5.0, 2.0, 30.0};
  GevParams f2 = gev_fit_pwm(small, 0.3);
  CHECK(std::abs(f2.xi) <= 0.3);
  for (double z : small) CHECK(gev_in_support(z, f2));

  std::vector<double> tiny{1.0, 2.0};
  CHECK_THROWS(gev_fit_pwm(tiny));
}
