#include <cmath>
#include <vector>

#include <doctest.h>

#include "exang/errors.hpp"
#include "exang/numerics/covariance.hpp"
#include "exang/numerics/distributions.hpp"
#include "exang/numerics/mvn.hpp"
#include "exang/pgp/projected_gp.hpp"
#include "oracles.hpp"

using namespace exang;

namespace {

Eigen::Matrix2d random_cov2(Rng& rng) {
  double a = 0.2 + 2 * uniform_open(rng), b = 0.2 + 2 * uniform_open(rng);
  double r = 1.6 * uniform_open(rng) - 0.8;
  Eigen::Matrix2d c;
  c << a, r * std::sqrt(a * b), r * std::sqrt(a * b), b;
  return c;
}

}  // namespace

TEST_CASE("angle_from_xy") {
  CHECK(angle_from_xy(1, 0) == 0.0);
  CHECK(angle_from_xy(0, 1) == doctest::Approx(kPi / 2));
  CHECK(angle_from_xy(-1, -1) == doctest::Approx(5 * kPi / 4));
  CHECK(angle_from_xy(1, -1e-300) < kTwoPi);
  CHECK_THROWS_AS(angle_from_xy(0, 0), DomainError);

  Rng rng = make_stream(31);
  for (int i = 0; i < 1000; ++i) {
    double x = standard_normal(rng), y = standard_normal(rng), l = 0.01 + 100 * uniform_open(rng);
    double t = angle_from_xy(x, y);
    CHECK(t >= 0.0);
    CHECK(t < kTwoPi);
    CHECK(angle_from_xy(l * x, l * y) == doctest::Approx(t).epsilon(1e-12));
    double r = std::hypot(x, y);
    CHECK(std::cos(t) == doctest::Approx(x / r).epsilon(1e-12));
    CHECK(std::sin(t) == doctest::Approx(y / r).epsilon(1e-12));
  }
  CHECK(wrap_angle(-0.5) == doctest::Approx(kTwoPi - 0.5));
  CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - kTwoPi));
}

TEST_CASE("joint_logdensity") {
  SpdMatrix eye(Eigen::MatrixXd::Identity(2, 2));
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd t(1), r(1);
  t << 0.0;
  r << 1.0;
  CHECK(joint_logdensity(t, r, zero, eye) == doctest::Approx(-std::log(2 * kPi) - 0.5).epsilon(1e-14));
  t << kPi / 2;
  r << 2.0;
  CHECK(joint_logdensity(t, r, zero, eye) == doctest::Approx(-std::log(2 * kPi) - 2 + std::log(2.0)).epsilon(1e-14));
  r << 0.0;
  CHECK_THROWS_AS(joint_logdensity(t, r, zero, eye), DomainError);
  r << -1.0;
  CHECK_THROWS_AS(joint_logdensity(t, r, zero, eye), DomainError);
}

TEST_CASE("joint_logdensity equals change of variables") {
  Rng rng = make_stream(32);
  for (int rep = 0; rep < 30; ++rep) {
    int k = 1 + rep % 3;
    SiteCoords s(k, 2);
    for (int i = 0; i < k; ++i) s.row(i) << uniform_open(rng), uniform_open(rng);
    AngularCovParams p{0.5, 1.0, 0.3 + uniform_open(rng), 1.4 * uniform_open(rng) - 0.7};
    SpdMatrix cov = build_angular_cov(s, p);
    Eigen::VectorXd mean(2 * k), th(k), rad(k), x(2 * k);
    for (int i = 0; i < 2 * k; ++i) mean(i) = standard_normal(rng);
    double jac = 0;
    for (int i = 0; i < k; ++i) {
      th(i) = kTwoPi * uniform_open(rng);
      rad(i) = 0.1 + 3 * uniform_open(rng);
      x(i) = rad(i) * std::cos(th(i));
      x(k + i) = rad(i) * std::sin(th(i));
      jac += std::log(rad(i));
    }
    double ref = oracle::gp_logpdf_dense(x, mean, cov.matrix()) + jac;
    CHECK(joint_logdensity(th, rad, mean, cov) == doctest::Approx(ref).epsilon(1e-11));
  }
}

TEST_CASE("marginal angle density") {
  Eigen::Vector2d zero = Eigen::Vector2d::Zero();
  Eigen::Matrix2d eye = Eigen::Matrix2d::Identity();
  for (double t = 0; t < kTwoPi; t += 0.3)
    CHECK(marginal_angle_logpdf(t, zero, eye) == doctest::Approx(-std::log(kTwoPi)).epsilon(1e-13));

  Eigen::Vector2d m(1.3, 0.0);
  for (double t = 0.1; t < kPi; t += 0.4)
    CHECK(marginal_angle_logpdf(t, m, eye) == doctest::Approx(marginal_angle_logpdf(kTwoPi - t, m, eye)).epsilon(1e-13));

  Eigen::Vector2d mean(1.5, 0.5);
  Eigen::Matrix2d cov;
  cov << 2, 0.3, 0.3, 1;
  double ref = oracle::angle_density_by_quadrature(0.7, mean, cov);
  CHECK(std::exp(marginal_angle_logpdf(0.7, mean, cov)) == doctest::Approx(ref).epsilon(1e-8));
  // frozen from 30-digit quadrature
  CHECK(ref == doctest::Approx(0.440011721567475221).epsilon(1e-9));

  Rng rng = make_stream(33);
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::Vector2d mu(3 * standard_normal(rng), 3 * standard_normal(rng));
    Eigen::Matrix2d c = random_cov2(rng);
    double t = kTwoPi * uniform_open(rng);
    CHECK(std::exp(marginal_angle_logpdf(t, mu, c)) ==
          doctest::Approx(oracle::angle_density_by_quadrature(t, mu, c)).epsilon(1e-6));
  }
}

TEST_CASE("marginal angle density integrates to one") {
  Rng rng = make_stream(34);
  const int nodes = 4096;
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::Vector2d mu(2 * standard_normal(rng), 2 * standard_normal(rng));
    Eigen::Matrix2d c = random_cov2(rng);
    double h = kTwoPi / nodes, total = 0;
    for (int i = 0; i < nodes; ++i) total += std::exp(marginal_angle_logpdf(i * h, mu, c)) * h;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("sample_pgp") {
  Rng rng = make_stream(35);
  Eigen::VectorXd mean(4);
  mean << 1, 1, 0, 0;
  SpdMatrix tiny(Eigen::MatrixXd::Identity(4, 4) * 1e-14);
  PgpDraw d = sample_pgp(mean, tiny, rng);
  CHECK(d.angles.size() == 2);
  for (int i = 0; i < 2; ++i) {
    double a = d.angles(i);
    CHECK(std::min(a, kTwoPi - a) < 1e-5);
  }

  SpdMatrix eye(Eigen::MatrixXd::Identity(2, 2));
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  const int n = 100000, bins = 36;
  std::vector<int> counts(bins, 0);
  for (int i = 0; i < n; ++i) {
    PgpDraw x = sample_pgp(zero, eye, rng);
    CHECK(x.radii(0) > 0.0);
    counts[std::min(bins - 1, static_cast<int>(x.angles(0) / kTwoPi * bins))]++;
  }
  double chi2 = 0, e = static_cast<double>(n) / bins;
  for (int c : counts) chi2 += (c - e) * (c - e) / e;
  CHECK(chi2 < 57.34);  // chi-square 0.99 quantile, 35 degrees of freedom
}

TEST_CASE("sampled angles match the marginal density") {
  Rng rng = make_stream(36);
  Eigen::VectorXd mean(2);
  mean << 0.8, -0.4;
  Eigen::Matrix2d c;
  c << 1.5, -0.4, -0.4, 1.0;
  SpdMatrix cov{Eigen::MatrixXd(c)};
  const int n = 100000, bins = 36;
  std::vector<int> counts(bins, 0);
  for (int i = 0; i < n; ++i)
    counts[std::min(bins - 1, static_cast<int>(sample_pgp(mean, cov, rng).angles(0) / kTwoPi * bins))]++;
  Eigen::Vector2d m2 = mean;
  for (int b = 0; b < bins; ++b) {
    double lo = b * kTwoPi / bins, hi = (b + 1) * kTwoPi / bins;
    double p = oracle::integrate([&](double t) { return std::exp(marginal_angle_logpdf(t, m2, c)); }, lo, hi, 1e-10);
    double sd = std::sqrt(n * p * (1 - p));
    CHECK(std::abs(counts[b] - n * p) < 3.5 * sd);
  }
}

TEST_CASE("projected normal mode") {
  Eigen::Matrix2d eye = Eigen::Matrix2d::Identity();
  CHECK(projected_normal_mode(Eigen::Vector2d(2, 0), eye) == doctest::Approx(0.0).epsilon(1e-6));
  double m = projected_normal_mode(Eigen::Vector2d(0, -3), eye);
  CHECK(m == doctest::Approx(1.5 * kPi).epsilon(1e-6));
  Eigen::Vector2d mu(1.0, 0.7);
  Eigen::Matrix2d c;
  c << 2.0, 0.5, 0.5, 1.0;
  double mode = projected_normal_mode(mu, c);
  double best = marginal_angle_logpdf(mode, mu, c);
  for (double t = 0; t < kTwoPi; t += 0.001) CHECK(marginal_angle_logpdf(t, mu, c) <= best + 1e-10);
}
