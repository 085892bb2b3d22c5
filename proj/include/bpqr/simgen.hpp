#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bpqr/panel.hpp"
#include "bpqr/rng.hpp"

namespace bpqr {

/// How one non-intercept covariate is generated.
struct CovariateSpec {
  enum class Kind { uniform, bernoulli };

  std::string name;
  Kind kind = Kind::uniform;
  double low = -2.0;   // uniform
  double high = 2.0;   // uniform
  double prob = 0.5;   // bernoulli
  /// Drawn once per individual and repeated over all periods.
  bool time_invariant = false;
};

/// Data-generating process
///   z_it = x_it' beta + alpha_i + eps_it,  eps_it ~ AL(0, 1, p)
///   alpha_i = m̄_i' zeta + xi_i,           xi_i ~ N(0, sigma_alpha^2)
///   y_it = 1{z_it > 0},  T_i ~ U{t_min, ..., t_max}.
struct SimSpec {
  std::size_t n = 1000;
  std::size_t t_min = 5;
  std::size_t t_max = 15;
  std::vector<CovariateSpec> covariates;
  /// Names of the covariates whose individual means enter alpha_i.
  std::vector<std::string> mundlak;
  Eigen::VectorXd beta_true;
  Eigen::VectorXd zeta_true;
  double sigma_alpha_sq_true = 1.0;
  double p = 0.5;
  std::uint64_t seed = 0;
};

/// n = 1000, T_i ~ U{5..15}, x2, x3, x4 ~ U(-2, 2), beta = (0.5, 1, 0.6, -0.8),
/// zeta = (-1, 1) on x3 and x4, sigma_alpha^2 = 1.
SimSpec default_sim_spec(double p = 0.5, std::uint64_t seed = 0);

/// Throws ConfigError on inconsistent dimensions or ranges.
void validate(const SimSpec& spec);

struct SimOutput {
  PanelData data;
  Eigen::VectorXd z;
  Eigen::VectorXd alpha;
  Eigen::VectorXd xi;
  Eigen::VectorXd eps;
  std::size_t zeros = 0;
  std::size_t ones = 0;
};

SimOutput generate(const SimSpec& spec, RngStream& rng);

/// Convenience overload seeding the stream from spec.seed.
SimOutput generate(const SimSpec& spec);

}  // namespace bpqr
