#include <cmath>
#include <vector>

#include <doctest.h>

#include "exang/errors.hpp"
#include "exang/numerics/covariance.hpp"
#include "exang/numerics/distributions.hpp"
#include "exang/numerics/mvn.hpp"
#include "exang/numerics/spd_matrix.hpp"
#include "oracles.hpp"

using namespace exang;

namespace {

SiteCoords random_sites(int k, Rng& rng) {
  SiteCoords s(k, 2);
  for (int i = 0; i < k; ++i) {
    s(i, 0) = uniform_open(rng);
    s(i, 1) = uniform_open(rng);
  }
  return s;
}

Eigen::MatrixXd random_spd(int d, Rng& rng) {
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = standard_normal(rng);
  return a * a.transpose() + d * Eigen::MatrixXd::Identity(d, d);
}

}  // namespace

TEST_CASE("powered exponential values") {
  CHECK(powered_exponential(0.0, {0.5, 2.0, 1.0}) == doctest::Approx(0.5));
  CHECK(powered_exponential(3.0, {1.0, 3.0, 1.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  // frozen from 30-digit evaluation of 0.4 * exp(-(1.7 / 2.5)^1.4)
  long double ref = 0.4L * std::exp(-std::pow(1.7L / 2.5L, 1.4L));
  CHECK(powered_exponential(1.7, {0.4, 2.5, 1.4}) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-14));
  CHECK(powered_exponential(1.7, {0.4, 2.5, 1.4}) == doctest::Approx(0.223335255031489532).epsilon(1e-14));
}

TEST_CASE("powered exponential domain errors") {
  CHECK_THROWS_AS(powered_exponential(1.0, {-1.0, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(powered_exponential(1.0, {1.0, 0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(powered_exponential(1.0, {1.0, 1.0, 2.5}), DomainError);
  CHECK_THROWS_AS(powered_exponential(1.0, {1.0, 1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(powered_exponential(-0.1, {1.0, 1.0, 1.0}), DomainError);
}

TEST_CASE("powered exponential bounded by sill and nonincreasing") {
  Rng rng = make_stream(11);
  for (int rep = 0; rep < 500; ++rep) {
    CovParams p{0.1 + 3 * uniform_open(rng), 0.1 + 3 * uniform_open(rng), 2.0 * uniform_open(rng)};
    double h = 5 * uniform_open(rng);
    double v = powered_exponential(h, p);
    CHECK(v > 0.0);
    CHECK(v < p.sill);
    CHECK(powered_exponential(h + 0.1, p) <= v);
    CHECK(powered_exponential(0.0, p) == p.sill);
  }
}

TEST_CASE("build_gev_cov") {
  SiteCoords one(1, 2);
  one << 0.3, 0.7;
  SpdMatrix c1 = build_gev_cov(one, {2.5, 1.0, 1.0});
  CHECK(c1.dim() == 1);
  CHECK(c1.matrix()(0, 0) == doctest::Approx(2.5));

  SiteCoords two(2, 2);
  two << 0.0, 0.0, 0.6, 0.8;
  SpdMatrix c2 = build_gev_cov(two, {1.5, 1.0, 1.0});
  CHECK(c2.matrix()(0, 1) == doctest::Approx(1.5 * std::exp(-1.0)));

  Rng rng = make_stream(4);
  SiteCoords s = random_sites(3, rng);
  CovParams p{0.8, 0.4, 1.3};
  SpdMatrix c3 = build_gev_cov(s, p);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double h = std::hypot(s(i, 0) - s(j, 0), s(i, 1) - s(j, 1));
      CHECK(c3.matrix()(i, j) == doctest::Approx(0.8 * std::exp(-std::pow(h / 0.4, 1.3))).epsilon(1e-13));
    }

  CHECK_THROWS_AS(build_gev_cov(SiteCoords(0, 2), p), ContractError);
}

TEST_CASE("duplicate sites are rescued by jitter") {
  SiteCoords dup(2, 2);
  dup << 0.5, 0.5, 0.5, 0.5;
  SpdMatrix c = build_gev_cov(dup, {1.0, 1.0, 1.0});
  CHECK(c.jitter() > 0.0);
  CHECK(c.jitter() <= 1e-6);
}

TEST_CASE("build_angular_cov small cases") {
  SiteCoords one(1, 2);
  one << 0.0, 0.0;
  SpdMatrix a = build_angular_cov(one, {1.0, 1.0, 1.0, 0.0});
  CHECK((a.matrix() - Eigen::Matrix2d::Identity()).norm() < 1e-15);

  SpdMatrix b = build_angular_cov(one, {1.0, 1.0, 4.0, 0.5});
  Eigen::Matrix2d expect;
  expect << 4, 1, 1, 1;
  CHECK((b.matrix() - expect).norm() < 1e-14);

  // k = 2 at distance lambda: frozen by hand from T (x) [[1, e^-1], [e^-1, 1]]
  SiteCoords two(2, 2);
  two << 0.0, 0.0, 2.0, 0.0;
  SpdMatrix c = build_angular_cov(two, {2.0, 1.0, 0.49, -0.2});
  double e = std::exp(-1.0);
  double off = -0.2 * 0.7;
  Eigen::Matrix4d ref;
  ref << 0.49, 0.49 * e, off, off * e,
         0.49 * e, 0.49, off * e, off,
         off, off * e, 1.0, e,
         off * e, off, e, 1.0;
  CHECK((c.matrix() - ref).norm() < 1e-14);

  CHECK_THROWS_AS(build_angular_cov(one, {1.0, 1.0, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(build_angular_cov(one, {1.0, 1.0, 1.0, -1.2}), DomainError);
  CHECK_THROWS_AS(build_angular_cov(one, {1.0, 1.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("build_angular_cov equals T kron C for random k") {
  Rng rng = make_stream(5);
  for (int rep = 0; rep < 40; ++rep) {
    int k = 1 + static_cast<int>(uniform_open(rng) * 5);
    SiteCoords s = random_sites(k, rng);
    AngularCovParams p{0.2 + uniform_open(rng), 0.5 + 1.5 * uniform_open(rng), 0.1 + 3 * uniform_open(rng),
                       1.8 * uniform_open(rng) - 0.9};
    SpdMatrix m = build_angular_cov(s, p);
    double t12 = p.rho * std::sqrt(p.tau);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) {
            double h = std::hypot(s(i, 0) - s(j, 0), s(i, 1) - s(j, 1));
            double cij = std::exp(-std::pow(h / p.range, p.shape));
            double tab = (a == 0 && b == 0) ? p.tau : (a == 1 && b == 1) ? 1.0 : t12;
            CHECK(m.matrix()(a * k + i, b * k + j) == doctest::Approx(tab * cij).epsilon(1e-12));
          }
  }
}

TEST_CASE("SpdMatrix factorization and jitter") {
  Rng rng = make_stream(6);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::MatrixXd a = random_spd(6, rng);
    SpdMatrix m(a);
    CHECK(m.jitter() == 0.0);
    Eigen::MatrixXd l = m.lower();
    CHECK((l * l.transpose() - a).norm() / a.norm() < 1e-10);
    CHECK(m.log_det() == doctest::Approx(std::log(a.determinant())).epsilon(1e-10));
    Eigen::VectorXd v = Eigen::VectorXd::Random(6);
    CHECK(m.quad_form(v) == doctest::Approx(v.dot(a.inverse() * v)).epsilon(1e-10));
    CHECK((m.correlate(m.whiten(v)) - v).norm() < 1e-10);
  }

  Eigen::MatrixXd rank_one = Eigen::MatrixXd::Ones(3, 3);
  SpdMatrix jittered(rank_one);
  CHECK(jittered.jitter() > 0.0);
  CHECK(jittered.jitter() <= 1e-6 + 1e-18);

  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(SpdMatrix{indefinite}, SingularMatrixError);

  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0.4, 1;
  CHECK_THROWS_AS(SpdMatrix{asym}, ContractError);
}

TEST_CASE("mvn_logpdf") {
  SpdMatrix eye(Eigen::MatrixXd::Identity(2, 2));
  CHECK(mvn_logpdf(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2), eye) ==
        doctest::Approx(-std::log(2 * kPi)).epsilon(1e-14));

  Eigen::VectorXd v(3);
  v << 0.5, 2.0, 3.5;
  SpdMatrix diag(Eigen::MatrixXd(v.asDiagonal()));
  Eigen::VectorXd m(3);
  m << 1, -1, 2;
  double ref = 0;
  for (int i = 0; i < 3; ++i) ref -= 0.5 * std::log(2 * kPi * v(i));
  CHECK(mvn_logpdf(m, m, diag) == doctest::Approx(ref).epsilon(1e-14));

  Rng rng = make_stream(7);
  Eigen::MatrixXd a = random_spd(4, rng);
  Eigen::VectorXd x = Eigen::VectorXd::Random(4), mu = Eigen::VectorXd::Random(4);
  CHECK(mvn_logpdf(x, mu, SpdMatrix(a)) == doctest::Approx(oracle::gp_logpdf_dense(x, mu, a)).epsilon(1e-12));

  CHECK_THROWS_AS(mvn_logpdf(Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(2), eye), ContractError);
}

TEST_CASE("mvn_logpdf integrates to one in two dimensions") {
  Eigen::Matrix2d c;
  c << 1.3, 0.4, 0.4, 0.7;
  SpdMatrix cov{Eigen::MatrixXd(c)};
  Eigen::VectorXd mean(2);
  mean << 0.2, -0.5;
  double total = oracle::integrate(
      [&](double x) {
        return oracle::integrate(
            [&](double y) {
              Eigen::VectorXd p(2);
              p << x, y;
              return std::exp(mvn_logpdf(p, mean, cov));
            },
            -12, 12, 1e-10);
      },
      -12, 12, 1e-9);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("mvn_conditional identities") {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(3);
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(3, 3);
  std::vector<Eigen::Index> obs{1};
  Eigen::VectorXd val(1);
  val << 2.0;
  auto c0 = mvn_conditional(m, eye, obs, val);
  CHECK(c0.free_idx == std::vector<Eigen::Index>{0, 2});
  CHECK(c0.mean.norm() < 1e-15);
  CHECK((c0.cov - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-15);

  double r = 0.6;
  Eigen::MatrixXd b(2, 2);
  b << 1, r, r, 1;
  Eigen::VectorXd bm(2);
  bm << 1.0, -2.0;
  std::vector<Eigen::Index> first{0};
  Eigen::VectorXd x1(1);
  x1 << 1.5;
  auto c1 = mvn_conditional(bm, b, first, x1);
  CHECK(c1.mean(0) == doctest::Approx(-2.0 + r * 0.5));
  CHECK(c1.cov(0, 0) == doctest::Approx(1 - r * r));

  Rng rng = make_stream(8);
  Eigen::MatrixXd s = random_spd(3, rng);
  Eigen::VectorXd sm = Eigen::VectorXd::Random(3);
  std::vector<Eigen::Index> o{0, 2};
  Eigen::VectorXd ov(2);
  ov << 0.3, -0.8;
  auto c3 = mvn_conditional(sm, s, o, ov);
  Eigen::Matrix3d prec = s.inverse();
  double var = 1.0 / prec(1, 1);
  double mean = sm(1) - var * (prec(1, 0) * (ov(0) - sm(0)) + prec(1, 2) * (ov(1) - sm(2)));
  CHECK(c3.cov(0, 0) == doctest::Approx(var).epsilon(1e-12));
  CHECK(c3.mean(0) == doctest::Approx(mean).epsilon(1e-12));

  std::vector<Eigen::Index> empty;
  CHECK_THROWS_AS(mvn_conditional(m, eye, empty, Eigen::VectorXd()), ContractError);
  std::vector<Eigen::Index> all{0, 1, 2};
  CHECK_THROWS_AS(mvn_conditional(m, eye, all, Eigen::VectorXd::Zero(3)), ContractError);
  Eigen::MatrixXd sing(3, 3);
  sing << 1, 2, 0, 2, 1, 0, 0, 0, 1;
  std::vector<Eigen::Index> two{0, 1};
  CHECK_THROWS_AS(mvn_conditional(m, sing, two, Eigen::VectorXd::Zero(2)), SingularMatrixError);
}

TEST_CASE("conditional draws match analytic moments") {
  Rng rng = make_stream(9);
  Eigen::MatrixXd s = random_spd(4, rng);
  Eigen::VectorXd m = Eigen::VectorXd::Random(4);
  std::vector<Eigen::Index> obs{1, 3};
  Eigen::VectorXd v(2);
  v << 0.4, -0.2;
  auto c = mvn_conditional(m, s, obs, v);
  SpdMatrix cc(c.cov);
  const int n = 100000;
  Eigen::Vector2d sum = Eigen::Vector2d::Zero();
  Eigen::Matrix2d sq = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n; ++i) {
    Eigen::Vector2d x = mvn_sample(c.mean, cc, rng);
    sum += x;
    sq += (x - c.mean) * (x - c.mean).transpose();
  }
  Eigen::Vector2d mean = sum / n;
  Eigen::Matrix2d cov = sq / n;
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(mean(i) - c.mean(i)) < 4 * std::sqrt(c.cov(i, i) / n));
    for (int j = 0; j < 2; ++j) {
      double se = std::sqrt((c.cov(i, i) * c.cov(j, j) + c.cov(i, j) * c.cov(i, j)) / n);
      CHECK(std::abs(cov(i, j) - c.cov(i, j)) < 4 * se);
    }
  }
}

TEST_CASE("inverse gamma and log-normal step") {
  Rng rng = make_stream(10);
  const int n = 100000;
  std::vector<double> draws(n);
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    draws[i] = inverse_gamma_sample(3.0, 2.0, rng);
    sum += draws[i];
    sq += draws[i] * draws[i];
  }
  double mean = sum / n;
  double sd = std::sqrt(sq / n - mean * mean);
  CHECK(std::abs(mean - 1.0) < 3 * sd / std::sqrt(n));
  double d = oracle::ks_statistic(draws, [](double x) { return oracle::inverse_gamma_cdf(x, 3.0, 2.0); });
  CHECK(d < oracle::ks_critical_1pct(n));

  // shape 2 has infinite variance, so only the mean is checked with a loose band
  double s2 = 0;
  for (int i = 0; i < n; ++i) s2 += inverse_gamma_sample(2.0, 1.0, rng);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.05));

  CHECK_THROWS_AS(inverse_gamma_sample(0.0, 1.0, rng), DomainError);
  CHECK_THROWS_AS(inverse_gamma_sample(1.0, -1.0, rng), DomainError);

  auto zero = lognormal_step(2.0, 0.0, rng);
  CHECK(zero.proposal == 2.0);
  CHECK(zero.log_hastings == 0.0);
  for (int i = 0; i < 100; ++i) {
    auto st = lognormal_step(2.0, 0.5, rng);
    CHECK(st.proposal > 0.0);
    CHECK(st.log_hastings == doctest::Approx(std::log(st.proposal / 2.0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(lognormal_step(0.0, 0.5, rng), DomainError);
  CHECK_THROWS_AS(lognormal_step(-1.0, 0.5, rng), DomainError);
}

TEST_CASE("distribution log densities") {
  CHECK(inverse_gamma_logpdf(2.0, 3.0, 1.5) ==
        doctest::Approx(3.0 * std::log(1.5) - std::lgamma(3.0) - 4.0 * std::log(2.0) - 0.75).epsilon(1e-13));
  CHECK(gamma_logpdf(2.0, 3.0, 0.5) ==
        doctest::Approx(-std::lgamma(3.0) - 3.0 * std::log(0.5) + 2.0 * std::log(2.0) - 4.0).epsilon(1e-13));
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.96) == doctest::Approx(oracle::normal_cdf(1.96, 0, 1)).epsilon(1e-14));
  CHECK(normal_logpdf(1.0, 0.0, 2.0) == doctest::Approx(-0.5 * kLogTwoPi - std::log(2.0) - 0.125));
}
