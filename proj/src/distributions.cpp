#include "bpqr/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "bpqr/errors.hpp"

namespace bpqr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Draw from N(0,1) restricted to (a, +inf) with a > 0 far in the tail.
double upper_tail_exponential_rejection(RngStream& rng, double a, double b) {
  const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double x = a + rng.exponential() / rate;
    if (x >= b) continue;
    const double d = x - rate;
    if (std::log(rng.uniform()) <= -0.5 * d * d) return x;
  }
}

// Uniform proposal on a short interval [a, b] with a >= 0.
double uniform_rejection(RngStream& rng, double a, double b) {
  for (;;) {
    const double x = a + (b - a) * rng.uniform();
    if (std::log(rng.uniform()) <= 0.5 * (a * a - x * x)) return x;
  }
}

// Standard normal restricted to (a, b) where the mass is tiny. Requires
// either a >= 0 or b <= 0 (otherwise the mass cannot be tiny unless the
// interval is extremely short, which the uniform proposal handles).
double tail_sample(RngStream& rng, double a, double b) {
  if (b <= 0.0) return -tail_sample(rng, -b, -a);
  if (a < 0.0) {
    // Short interval straddling zero; density ratio bounded below.
    for (;;) {
      const double x = a + (b - a) * rng.uniform();
      if (std::log(rng.uniform()) <= -0.5 * x * x) return x;
    }
  }
  const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
  // Exponential proposal is efficient unless the interval is much shorter
  // than the proposal scale.
  if (b - a > 1.0 / rate) return upper_tail_exponential_rejection(rng, a, b);
  return uniform_rejection(rng, a, b);
}

// Standard-normal mass of (a, b), evaluated on the side of the distribution
// where it is numerically accurate.
double standard_interval_mass(double a, double b) {
  if (a >= 0.0) return 0.5 * (std::erfc(a / std::numbers::sqrt2) - std::erfc(b / std::numbers::sqrt2));
  if (b <= 0.0) return 0.5 * (std::erfc(-b / std::numbers::sqrt2) - std::erfc(-a / std::numbers::sqrt2));
  return normal_cdf(b) - normal_cdf(a);
}

}  // namespace

double QuantileConstants::tau() const { return std::sqrt(tau_sq); }

QuantileConstants quantile_constants(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("quantile p must lie in (0, 1), got " + std::to_string(p));
  }
  const double pq = p * (1.0 - p);
  return {p, (1.0 - 2.0 * p) / pq, 2.0 / pq};
}

double sample_al(RngStream& rng, double location, double scale, double p) {
  if (!(scale > 0.0)) throw DomainError("AL scale must be positive");
  const QuantileConstants qc = quantile_constants(p);
  const double w = rng.exponential();
  const double u = rng.normal();
  return location + scale * (qc.theta * w + qc.tau() * std::sqrt(w) * u);
}

double cdf_al(double x, double location, double scale, double p) {
  if (!(scale > 0.0)) throw DomainError("AL scale must be positive");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("AL quantile must lie in (0, 1)");
  const double s = (x - location) / scale;
  if (s <= 0.0) return p * std::exp((1.0 - p) * s);
  return 1.0 - (1.0 - p) * std::exp(-p * s);
}

double pdf_al(double x, double location, double scale, double p) {
  if (!(scale > 0.0)) throw DomainError("AL scale must be positive");
  const double s = (x - location) / scale;
  const double check = s < 0.0 ? s * (p - 1.0) : s * p;
  return p * (1.0 - p) / scale * std::exp(-check);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double u) {
  if (u <= 0.0) return -kInf;
  if (u >= 1.0) return kInf;
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

double sample_truncnorm(RngStream& rng, double mu, double var, double lower,
                        double upper) {
  if (!(var > 0.0) || !std::isfinite(var)) {
    throw DomainError("truncated normal variance must be positive and finite");
  }
  if (!(lower < upper)) throw DomainError("truncated normal interval is empty");
  if (!std::isfinite(mu)) throw DomainError("truncated normal mean is not finite");

  const double sd = std::sqrt(var);
  double a = (lower - mu) / sd;
  double b = (upper - mu) / sd;

  // Work in the lower half so that CDF values near the interval are small
  // and carry full relative precision.
  const bool flip = a > 0.0 || b == kInf;
  if (flip) {
    const double t = a;
    a = -b;
    b = -t;
  }

  double x;
  if (standard_interval_mass(a, b) >= kTruncNormInverseCdfMinMass) {
    const double fa = normal_cdf(a);
    const double fb = normal_cdf(b);
    x = normal_quantile(fa + (fb - fa) * rng.uniform());
    if (!std::isfinite(x)) x = tail_sample(rng, a, b);
  } else {
    x = tail_sample(rng, a, b);
  }
  if (flip) x = -x;

  double draw = mu + sd * x;
  if (draw <= lower) draw = std::nextafter(lower, kInf);
  if (draw > upper) draw = upper;
  return draw;
}

double sample_gig_half(RngStream& rng, double lambda, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw DomainError("GIG eta must be positive and finite");
  }
  if (!(lambda >= kGigLambdaFloor)) lambda = kGigLambdaFloor;

  // Y = 1/X is inverse Gaussian with mean mu = sqrt(eta/lambda) and shape
  // eta. Write Y = mu * R where R ~ IG(1, phi), phi = sqrt(eta*lambda), so
  // X = sqrt(lambda/eta) / R.
  const double phi = std::sqrt(eta * lambda);
  const double nu = rng.normal();
  const double y0 = nu * nu;
  // Roots r1 <= 1 <= r2 of the MSH quadratic, r1 * r2 = 1. r2 computed
  // without cancellation.
  const double half = y0 / (2.0 * phi);
  const double r2 = 1.0 + half + std::sqrt(half * (2.0 + half));
  const double r1 = 1.0 / r2;
  const double r = rng.uniform() <= 1.0 / (1.0 + r1) ? r1 : r2;
  return std::sqrt(lambda / eta) / r;
}

double gig_half_mean(double lambda, double eta) {
  return std::sqrt(lambda / eta) + 1.0 / eta;
}

double sample_invgamma(RngStream& rng, double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw DomainError("inverse-gamma shape and scale must be positive");
  }
  return scale / rng.gamma(shape);
}

Eigen::VectorXd standard_normal_vector(RngStream& rng, Eigen::Index size) {
  Eigen::VectorXd z(size);
  for (Eigen::Index i = 0; i < size; ++i) z[i] = rng.normal();
  return z;
}

Eigen::VectorXd sample_mvn(RngStream& rng, const Eigen::VectorXd& mean,
                           const Eigen::MatrixXd& cov_factor) {
  if (cov_factor.rows() != mean.size() || cov_factor.cols() != mean.size()) {
    throw DomainError("covariance factor dimension does not match mean");
  }
  if (!cov_factor.allFinite()) throw NumericError("covariance factor has non-finite entries");
  const Eigen::VectorXd z = standard_normal_vector(rng, mean.size());
  return mean + cov_factor.triangularView<Eigen::Lower>() * z;
}

}  // namespace bpqr
