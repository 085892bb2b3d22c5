#include "bpqr/linalg.hpp"

#include <string>

#include "bpqr/distributions.hpp"
#include "bpqr/errors.hpp"

namespace bpqr {

Eigen::LLT<Eigen::MatrixXd> spd_factor(const Eigen::MatrixXd& a, std::string_view context) {
  if (!a.allFinite()) {
    throw NumericError(std::string(context) + ": matrix has non-finite entries");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) return llt;

  const double jitter = 1e-10 * a.diagonal().mean();
  Eigen::MatrixXd bumped = a;
  bumped.diagonal().array() += jitter;
  llt.compute(bumped);
  if (llt.info() != Eigen::Success) {
    throw NumericError(std::string(context) + ": matrix is not positive definite");
  }
  return llt;
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a, std::string_view context) {
  return spd_factor(a, context).solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
}

GaussianMoments to_moments(const GaussianCanonical& g, std::string_view context) {
  const auto llt = spd_factor(g.precision, context);
  const auto n = g.precision.rows();
  return {llt.solve(g.linear), llt.solve(Eigen::MatrixXd::Identity(n, n))};
}

Eigen::VectorXd sample_canonical(RngStream& rng, const GaussianCanonical& g,
                                 std::string_view context) {
  const auto llt = spd_factor(g.precision, context);
  const Eigen::VectorXd mean = llt.solve(g.linear);
  const Eigen::VectorXd z = standard_normal_vector(rng, mean.size());
  return mean + llt.matrixU().solve(z);
}

}  // namespace bpqr
