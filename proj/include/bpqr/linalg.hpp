#pragma once

#include <string_view>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "bpqr/rng.hpp"

namespace bpqr {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Cholesky factor of a symmetric positive-definite matrix. On failure a
/// jitter of 1e-10 * mean(diag) is added to the diagonal and the
/// factorization retried once; a second failure throws NumericError naming
/// `context`.
Eigen::LLT<Eigen::MatrixXd> spd_factor(const Eigen::MatrixXd& a, std::string_view context);

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a, std::string_view context);

/// Gaussian in information form: precision Q and linear term b, so that the
/// mean is Q^{-1} b.
struct GaussianCanonical {
  Eigen::MatrixXd precision;
  Eigen::VectorXd linear;
};

/// Moment form of a canonical Gaussian.
struct GaussianMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

GaussianMoments to_moments(const GaussianCanonical& g, std::string_view context);

/// Draw from N(Q^{-1} b, Q^{-1}) without forming the inverse:
/// mean + L^{-T} z where Q = L L^T.
Eigen::VectorXd sample_canonical(RngStream& rng, const GaussianCanonical& g,
                                 std::string_view context);

}  // namespace bpqr
