#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "bpqr/distributions.hpp"
#include "bpqr/errors.hpp"
#include "support/oracles.hpp"

using namespace bpqr;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMomentDraws = 1'000'000;
constexpr std::size_t kKsDraws = 100'000;

struct Moments {
  double mean;
  double sd;
};

template <class F>
Moments sample_moments(std::size_t n, F draw) {
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = draw();
    s += x;
    s2 += x * x;
  }
  const double m = s / static_cast<double>(n);
  return {m, std::sqrt(s2 / static_cast<double>(n) - m * m)};
}

template <class F>
std::vector<double> sample_vector(std::size_t n, F draw) {
  std::vector<double> v(n);
  for (auto& x : v) x = draw();
  return v;
}

void check_mean(const Moments& m, double expected, std::size_t n) {
  CHECK(std::abs(m.mean - expected) <= 4.0 * oracle::mc_stderr(m.sd, static_cast<double>(n)));
}

// Normal CDF written independently of the library.
double phi_ref(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("quantile constants at the three study quantiles") {
  const auto c50 = quantile_constants(0.5);
  CHECK(c50.theta == 0.0);
  CHECK(c50.tau_sq == 8.0);
  const auto c25 = quantile_constants(0.25);
  CHECK(c25.theta == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
  CHECK(c25.tau_sq == doctest::Approx(32.0 / 3.0).epsilon(1e-14));
  const auto c75 = quantile_constants(0.75);
  CHECK(c75.theta == doctest::Approx(-8.0 / 3.0).epsilon(1e-14));
  CHECK(c75.tau_sq == doctest::Approx(32.0 / 3.0).epsilon(1e-14));
  CHECK(c50.tau() == doctest::Approx(std::sqrt(8.0)));
}

TEST_CASE("quantile constants are symmetric in p and 1-p") {
  for (double p : {0.01, 0.05, 0.1, 0.2, 0.3, 0.37, 0.45, 0.5}) {
    const auto a = quantile_constants(p);
    const auto b = quantile_constants(1.0 - p);
    CHECK(a.theta == doctest::Approx(-b.theta).epsilon(1e-12));
    CHECK(a.tau_sq == doctest::Approx(b.tau_sq).epsilon(1e-12));
  }
}

TEST_CASE("quantile constants reject p outside the open unit interval") {
  for (double p : {0.0, 1.0, -0.1, 1.2, std::nan("")}) {
    CHECK_THROWS_AS(quantile_constants(p), DomainError);
  }
}

TEST_CASE("AL CDF closed-form values and limits") {
  CHECK(cdf_al(0.0, 0.0, 1.0, 0.25) == 0.25);
  CHECK(cdf_al(-1.0, 0.0, 1.0, 0.25) == doctest::Approx(0.25 * std::exp(-0.75)).epsilon(1e-15));
  CHECK(cdf_al(-1.0, 0.0, 1.0, 0.25) == doctest::Approx(0.118092).epsilon(1e-6));
  CHECK(cdf_al(kInf, 0.0, 1.0, 0.25) == 1.0);
  CHECK(cdf_al(-kInf, 0.0, 1.0, 0.25) == 0.0);
  for (double p : {0.1, 0.5, 0.9}) CHECK(cdf_al(3.0, 3.0, 2.0, p) == p);
}

TEST_CASE("AL CDF agrees with numerical integration of the density") {
  for (double p : {0.25, 0.5, 0.75}) {
    for (double x : {-3.0, -1.0, -0.2, 0.4, 2.5}) {
      const double integral =
          oracle::integrate([&](double s) { return pdf_al(s, 0.0, 1.0, p); }, -kInf, std::min(x, 0.0)) +
          (x > 0.0 ? oracle::integrate([&](double s) { return pdf_al(s, 0.0, 1.0, p); }, 0.0, x) : 0.0);
      CHECK(cdf_al(x, 0.0, 1.0, p) == doctest::Approx(integral).epsilon(1e-10));
    }
  }
}

TEST_CASE("AL CDF is nondecreasing and continuous at the location") {
  for (double p : {0.2, 0.5, 0.8}) {
    double prev = 0.0;
    for (double x = -20.0; x <= 20.0; x += 0.01) {
      const double f = cdf_al(x, 0.5, 1.5, p);
      CHECK(f >= prev);
      prev = f;
    }
    const double eps = 1e-12;
    CHECK(std::abs(cdf_al(0.5 - eps, 0.5, 1.5, p) - cdf_al(0.5 + eps, 0.5, 1.5, p)) < 1e-11);
  }
}

TEST_CASE("AL draws: mean and fraction below the location") {
  RngStream rng(101);
  check_mean(sample_moments(kMomentDraws, [&] { return sample_al(rng, 0.0, 1.0, 0.5); }), 0.0,
             kMomentDraws);
  check_mean(sample_moments(kMomentDraws, [&] { return sample_al(rng, 0.0, 1.0, 0.25); }),
             8.0 / 3.0, kMomentDraws);
  for (double p : {0.25, 0.5, 0.75}) {
    std::size_t below = 0;
    for (std::size_t i = 0; i < kMomentDraws; ++i) below += sample_al(rng, 0.0, 1.0, p) < 0.0;
    const double frac = static_cast<double>(below) / kMomentDraws;
    CHECK(std::abs(frac - p) <= 4.0 * std::sqrt(p * (1 - p) / kMomentDraws));
  }
}

TEST_CASE("AL draws pass a KS test against the closed-form CDF") {
  RngStream rng(102);
  for (double p : {0.25, 0.5, 0.75}) {
    const auto v = sample_vector(kKsDraws, [&] { return sample_al(rng, 1.0, 2.0, p); });
    const double d = oracle::ks_statistic(v, [&](double x) {
      return oracle::al_cdf_ref((x - 1.0) / 2.0, p);
    });
    CHECK(d < oracle::ks_critical_1pct(kKsDraws));
  }
}

TEST_CASE("truncated normal: half-normal means") {
  RngStream rng(201);
  const double half_normal_mean = std::sqrt(2.0 / std::numbers::pi);
  check_mean(sample_moments(kMomentDraws, [&] { return sample_truncnorm(rng, 0.0, 1.0, 0.0, kInf); }),
             half_normal_mean, kMomentDraws);
  check_mean(sample_moments(kMomentDraws, [&] { return sample_truncnorm(rng, 0.0, 1.0, -kInf, 0.0); }),
             -half_normal_mean, kMomentDraws);
  CHECK(half_normal_mean == doctest::Approx(0.79788).epsilon(1e-5));
}

TEST_CASE("truncated normal: support is respected on every draw") {
  RngStream rng(202);
  for (std::size_t i = 0; i < 200'000; ++i) {
    const double x = sample_truncnorm(rng, 3.0, 2.0, -kInf, 0.0);
    REQUIRE(x <= 0.0);
    const double y = sample_truncnorm(rng, -3.0, 2.0, 0.0, kInf);
    REQUIRE(y > 0.0);
    const double z = sample_truncnorm(rng, 0.3, 0.5, -0.2, 0.1);
    REQUIRE(z > -0.2);
    REQUIRE(z <= 0.1);
  }
}

TEST_CASE("truncated normal: far-tail path is finite and concentrates at the boundary") {
  RngStream rng(203);
  // Mean 40 sd below the lower bound: the interval mass underflows.
  const auto m = sample_moments(100'000, [&] {
    const double x = sample_truncnorm(rng, -40.0, 1.0, 0.0, kInf);
    REQUIRE(std::isfinite(x));
    REQUIRE(x > 0.0);
    return x;
  });
  // Asymptotic inverse Mills ratio: phi(a)/Q(a) - a = 1/a - 2/a^3 + 10/a^5 - ...
  const double a = 40.0;
  const double expected = 1.0 / a - 2.0 / (a * a * a) + 10.0 / std::pow(a, 5);
  CHECK(std::abs(m.mean - expected) <= 4.0 * oracle::mc_stderr(m.sd, 100'000));
  for (int i = 0; i < 1000; ++i) {
    const double x = sample_truncnorm(rng, 1e6, 1.0, -kInf, 0.0);
    REQUIRE(std::isfinite(x));
    REQUIRE(x <= 0.0);
  }
}

TEST_CASE("truncated normal: mean far inside the region behaves like the untruncated normal") {
  RngStream rng(204);
  const auto m = sample_moments(kMomentDraws, [&] { return sample_truncnorm(rng, 9.0, 1.0, 0.0, kInf); });
  check_mean(m, 9.0, kMomentDraws);
  CHECK(m.sd == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("truncated normal passes KS tests on the inverse-CDF and tail paths") {
  RngStream rng(205);
  struct Case {
    double mu, var, lo, hi;
  };
  for (const Case c : {Case{0.0, 1.0, 0.0, kInf}, Case{3.0, 2.0, -kInf, 0.0}, Case{0.5, 0.25, -0.5, 1.0},
                       Case{0.0, 1.0, 5.5, kInf}, Case{0.0, 1.0, -kInf, -6.0}, Case{0.0, 1.0, 6.0, 6.3}}) {
    const auto v = sample_vector(kKsDraws, [&] { return sample_truncnorm(rng, c.mu, c.var, c.lo, c.hi); });
    const double sd = std::sqrt(c.var);
    const double a = (c.lo - c.mu) / sd, b = (c.hi - c.mu) / sd;
    double d;
    if (a > 0.0) {
      // Upper tail: use survival functions for precision.
      const auto sf = [](double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); };
      d = oracle::ks_statistic(v, [&](double x) {
        return (sf(a) - sf((x - c.mu) / sd)) / (sf(a) - sf(b));
      });
    } else {
      d = oracle::ks_statistic(v, [&](double x) {
        return (phi_ref((x - c.mu) / sd) - phi_ref(a)) / (phi_ref(b) - phi_ref(a));
      });
    }
    CHECK(d < oracle::ks_critical_1pct(kKsDraws));
  }
}

TEST_CASE("truncated normal rejects empty intervals and bad variance") {
  RngStream rng(206);
  CHECK_THROWS_AS(sample_truncnorm(rng, 0.0, 1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(sample_truncnorm(rng, 0.0, 1.0, 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(sample_truncnorm(rng, 0.0, 0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(sample_truncnorm(rng, 0.0, -1.0, 0.0, 1.0), DomainError);
}

TEST_CASE("GIG(1/2) closed-form mean agrees with numerical integration") {
  for (auto [lambda, eta] : {std::pair{1.0, 2.0}, std::pair{4.0, 4.0}, std::pair{0.01, 8.0 / 3.0}}) {
    const auto f = [&](double x) { return oracle::gig_half_density(x, lambda, eta); };
    const double mass = oracle::integrate(f, 0.0, 200.0);
    const double mean = oracle::integrate([&](double x) { return x * f(x); }, 0.0, 200.0);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(gig_half_mean(lambda, eta) == doctest::Approx(mean).epsilon(1e-9));
  }
  CHECK(gig_half_mean(1.0, 2.0) == doctest::Approx(std::sqrt(0.5) + 0.5).epsilon(1e-15));
  CHECK(gig_half_mean(1.0, 2.0) == doctest::Approx(1.20711).epsilon(1e-5));
  CHECK(gig_half_mean(4.0, 4.0) == 1.25);
}

TEST_CASE("GIG(1/2) draws: means and positivity") {
  RngStream rng(301);
  for (auto [lambda, eta] : {std::pair{1.0, 2.0}, std::pair{4.0, 4.0}}) {
    const auto m = sample_moments(kMomentDraws, [&] {
      const double x = sample_gig_half(rng, lambda, eta);
      REQUIRE(x > 0.0);
      return x;
    });
    check_mean(m, gig_half_mean(lambda, eta), kMomentDraws);
  }
}

TEST_CASE("GIG(1/2) passes a KS test against the integrated density") {
  RngStream rng(302);
  for (auto [lambda, eta] : {std::pair{1.0, 2.0}, std::pair{4.0, 4.0}, std::pair{1e-3, 8.0 / 3.0}, std::pair{25.0, 2.0}}) {
    auto v = sample_vector(kKsDraws, [&] { return sample_gig_half(rng, lambda, eta); });
    std::sort(v.begin(), v.end());
    const auto cdf = oracle::cdf_by_quadrature(
        v, [&](double x) { return oracle::gig_half_density(x, lambda, eta); }, 0.0);
    CHECK(oracle::ks_statistic_sorted(cdf) < oracle::ks_critical_1pct(kKsDraws));
  }
}

TEST_CASE("GIG(1/2) with zero lambda is clamped and stays positive and finite") {
  RngStream rng(303);
  for (int i = 0; i < 100'000; ++i) {
    const double x = sample_gig_half(rng, 0.0, 2.0);
    REQUIRE(std::isfinite(x));
    REQUIRE(x > 0.0);
  }
  CHECK_THROWS_AS(sample_gig_half(rng, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(sample_gig_half(rng, 1.0, -1.0), DomainError);
}

TEST_CASE("inverse gamma draws: means, support and KS") {
  RngStream rng(401);
  for (auto [shape, scale] : {std::pair{6.0, 5.5}, std::pair{5.0, 4.5}}) {
    const auto m = sample_moments(kMomentDraws, [&] {
      const double x = sample_invgamma(rng, shape, scale);
      REQUIRE(x > 0.0);
      return x;
    });
    check_mean(m, scale / (shape - 1.0), kMomentDraws);
  }
  const auto v = sample_vector(kKsDraws, [&] { return sample_invgamma(rng, 5.0, 4.5); });
  const double d = oracle::ks_statistic(v, [](double x) { return boost::math::gamma_q(5.0, 4.5 / x); });
  CHECK(d < oracle::ks_critical_1pct(kKsDraws));
  CHECK_THROWS_AS(sample_invgamma(rng, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(sample_invgamma(rng, 1.0, -1.0), DomainError);
}

TEST_CASE("multivariate normal: sample covariance matches the input") {
  RngStream rng(501);
  Eigen::VectorXd mean(2);
  mean << 1.0, 2.0;
  for (int variant = 0; variant < 2; ++variant) {
    Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(2, 2);
    if (variant == 1) cov << 2.0, 1.0, 1.0, 2.0;
    const Eigen::MatrixXd factor = cov.llt().matrixL();
    Eigen::VectorXd s = Eigen::VectorXd::Zero(2);
    Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(2, 2);
    for (std::size_t i = 0; i < kMomentDraws; ++i) {
      const Eigen::VectorXd x = sample_mvn(rng, mean, factor);
      s += x;
      s2 += x * x.transpose();
    }
    const double n = kMomentDraws;
    const Eigen::VectorXd m = s / n;
    const Eigen::MatrixXd c = s2 / n - m * m.transpose();
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(m[i] - mean[i]) <= 4.0 * std::sqrt(cov(i, i) / n));
      for (int j = 0; j < 2; ++j) {
        // Var of x_i x_j for centered Gaussians.
        const double v = cov(i, i) * cov(j, j) + cov(i, j) * cov(i, j);
        CHECK(std::abs(c(i, j) - cov(i, j)) <= 4.0 * std::sqrt(v / n));
      }
    }
  }
}

TEST_CASE("multivariate normal: degenerate factor returns the mean, bad factor throws") {
  RngStream rng(502);
  Eigen::VectorXd mean(3);
  mean << -1.0, 0.5, 7.0;
  const Eigen::VectorXd x = sample_mvn(rng, mean, Eigen::MatrixXd::Zero(3, 3));
  CHECK((x - mean).norm() == 0.0);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  bad(1, 0) = std::nan("");
  CHECK_THROWS_AS(sample_mvn(rng, mean, bad), NumericError);
}

TEST_CASE("equal seeds give identical sequences across all samplers") {
  RngStream a(777), b(777);
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(2, 2);
  for (int i = 0; i < 2000; ++i) {
    REQUIRE(sample_al(a, 0.0, 1.0, 0.3) == sample_al(b, 0.0, 1.0, 0.3));
    REQUIRE(sample_truncnorm(a, 0.2, 1.0, 0.0, kInf) == sample_truncnorm(b, 0.2, 1.0, 0.0, kInf));
    REQUIRE(sample_truncnorm(a, 0.0, 1.0, 7.0, kInf) == sample_truncnorm(b, 0.0, 1.0, 7.0, kInf));
    REQUIRE(sample_gig_half(a, 0.7, 2.0) == sample_gig_half(b, 0.7, 2.0));
    REQUIRE(sample_invgamma(a, 5.0, 4.5) == sample_invgamma(b, 5.0, 4.5));
    REQUIRE(sample_mvn(a, Eigen::VectorXd::Zero(2), f) == sample_mvn(b, Eigen::VectorXd::Zero(2), f));
  }
  RngStream c(778);
  CHECK(RngStream(777).uniform() != c.uniform());
}

TEST_CASE("substreams are deterministic and distinct") {
  const RngStream root(99);
  RngStream s1 = root.substream(3), s2 = root.substream(3), s3 = root.substream(4);
  const double a = s1.uniform();
  CHECK(a == s2.uniform());
  CHECK(a != s3.uniform());
  RngStream t1 = root.substream(3, 1), t2 = root.substream(1, 3);
  CHECK(t1.uniform() != t2.uniform());
}
