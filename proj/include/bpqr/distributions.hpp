#pragma once

#include <Eigen/Core>

#include "bpqr/rng.hpp"

namespace bpqr {

/// Constants of the normal-exponential mixture form of AL(0, 1, p).
struct QuantileConstants {
  double p;
  double theta;
  double tau_sq;

  double tau() const;
};

/// theta = (1 - 2p) / (p(1 - p)), tau^2 = 2 / (p(1 - p)). Throws DomainError
/// unless 0 < p < 1.
QuantileConstants quantile_constants(double p);

/// Asymmetric Laplace draw via location + scale * (theta*w + tau*sqrt(w)*u).
double sample_al(RngStream& rng, double location, double scale, double p);

/// CDF of AL(location, scale, p).
double cdf_al(double x, double location, double scale, double p);

/// Density of AL(location, scale, p).
double pdf_al(double x, double location, double scale, double p);

double normal_cdf(double x);
double normal_quantile(double u);

/// Normal mass below which the truncated-normal sampler switches from
/// inverse-CDF to exponential rejection.
inline constexpr double kTruncNormInverseCdfMinMass = 1e-6;

/// Draw from N(mu, var) restricted to (lower, upper). Infinite bounds are
/// allowed. Throws DomainError on an empty interval or non-positive variance.
double sample_truncnorm(RngStream& rng, double mu, double var, double lower,
                        double upper);

/// Lower clamp on the lambda argument of the GIG(1/2) sampler.
inline constexpr double kGigLambdaFloor = 1e-10;

/// Draw from GIG(1/2, lambda, eta), density proportional to
/// x^{-1/2} exp(-(lambda/x + eta*x)/2).
///
/// Implemented as the reciprocal of an inverse-Gaussian draw with mean
/// sqrt(eta/lambda) and shape eta, generated with the Michael-Schucany-Haas
/// transformation. lambda is clamped below by kGigLambdaFloor.
double sample_gig_half(RngStream& rng, double lambda, double eta);

/// Mean of GIG(1/2, lambda, eta): sqrt(lambda/eta) + 1/eta.
double gig_half_mean(double lambda, double eta);

/// Inverse-gamma draw, density proportional to x^{-(shape+1)} exp(-scale/x).
double sample_invgamma(RngStream& rng, double shape, double scale);

/// mean + cov_factor * z with z iid standard normal.
Eigen::VectorXd sample_mvn(RngStream& rng, const Eigen::VectorXd& mean,
                           const Eigen::MatrixXd& cov_factor);

/// Fill a vector with iid standard normal draws.
Eigen::VectorXd standard_normal_vector(RngStream& rng, Eigen::Index size);

}  // namespace bpqr
