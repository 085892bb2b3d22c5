#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bpqr/distributions.hpp"
#include "bpqr/linalg.hpp"
#include "bpqr/panel.hpp"
#include "bpqr/rng.hpp"

namespace bpqr {

/// Quantile, mixture constants and priors.
///
/// Priors are held in information form so that flat (zero-precision)
/// components can be expressed:
///   beta  ~ N(beta0, beta_precision^{-1})
///   zeta  ~ N(zeta0, zeta_precision^{-1})
///   sigma_alpha^2 ~ IG(c1/2, d1/2), density ∝ s^{-(c1/2+1)} exp(-d1/(2s))
struct ModelSpec {
  QuantileConstants qc;
  Eigen::VectorXd beta0;
  Eigen::MatrixXd beta_precision;
  Eigen::VectorXd zeta0;
  Eigen::MatrixXd zeta_precision;
  double c1 = 10.0;
  double d1 = 9.0;

  Eigen::Index k() const { return beta0.size(); }
  Eigen::Index q() const { return zeta0.size(); }
};

/// Prior in covariance form, as written in configuration files.
struct PriorSpec {
  Eigen::VectorXd beta_mean;
  Eigen::MatrixXd beta_cov;
  Eigen::VectorXd zeta_mean;
  Eigen::MatrixXd zeta_cov;
  double c1 = 10.0;
  double d1 = 9.0;
};

/// beta ~ N(0, 1e3 I_k), zeta ~ N(0, 1e3 I_q), sigma_alpha^2 ~ IG(5, 4.5).
PriorSpec default_prior(Eigen::Index k, Eigen::Index q);

/// Validates p and the priors (covariances must be SPD, c1, d1 > 0) and
/// converts to information form. Throws ConfigError / DomainError.
ModelSpec make_model_spec(double p, const PriorSpec& prior);

/// Throws ConfigError if the spec dimensions do not match the panel.
void check_dimensions(const ModelSpec& spec, const PanelData& data);

/// Current values of all parameters and latent variables of one chain.
struct ChainState {
  Eigen::VectorXd beta;
  Eigen::VectorXd alpha;
  Eigen::VectorXd zeta;
  double sigma_alpha_sq = 1.0;
  Eigen::VectorXd z;
  Eigen::VectorXd w;
};

/// beta = beta0, zeta = zeta0, sigma^2 = d1/c1, alpha = 0, w = 1 and z a
/// sign-feasible half-normal draw.
ChainState initialize_state(const PanelData& data, const ModelSpec& spec, RngStream& rng);

/// Floor applied to every w draw.
inline constexpr double kWFloor = 1e-10;

// Full conditionals shared by both samplers. The *_conditional functions
// return the distribution parameters; the update_* functions draw from them
// and write the result into the state.

GaussianCanonical beta_conditional_nonblocked(const ChainState& s, const PanelData& data,
                                              const ModelSpec& spec);
void update_beta_nonblocked(ChainState& s, const PanelData& data, const ModelSpec& spec,
                            RngStream& rng);

struct ScalarNormal {
  double mean;
  double var;
};

ScalarNormal alpha_conditional(const ChainState& s, const PanelData& data, const ModelSpec& spec,
                               std::size_t i);
void update_alpha(ChainState& s, const PanelData& data, const ModelSpec& spec, RngStream& rng);

/// eta of the w conditional: theta^2 / tau^2 + 2.
double w_conditional_eta(const QuantileConstants& qc);
void update_w(ChainState& s, const PanelData& data, const ModelSpec& spec, RngStream& rng);

struct InvGammaParams {
  double shape;
  double scale;
};

InvGammaParams sigma_alpha_conditional(const ChainState& s, const PanelData& data,
                                       const ModelSpec& spec);
void update_sigma_alpha(ChainState& s, const PanelData& data, const ModelSpec& spec,
                        RngStream& rng);

GaussianCanonical zeta_conditional(const ChainState& s, const PanelData& data,
                                   const ModelSpec& spec);
void update_zeta(ChainState& s, const PanelData& data, const ModelSpec& spec, RngStream& rng);

void update_z_nonblocked(ChainState& s, const PanelData& data, const ModelSpec& spec,
                         RngStream& rng);

/// m̄_i' zeta for every individual.
Eigen::VectorXd cre_means(const ChainState& s, const PanelData& data);

enum class Algorithm { nonblocked, blocked };

std::string to_string(Algorithm a);
/// Throws ConfigError for anything other than "nonblocked" / "blocked".
Algorithm parse_algorithm(const std::string& name);

struct SamplerConfig {
  std::size_t iterations = 16000;
  std::size_t burn_in = 1000;
  std::size_t thin = 10;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::blocked;
  bool store_alpha = true;
};

/// Throws ConfigError unless burn_in < iterations and thin >= 1.
void validate(const SamplerConfig& config);

/// floor((iterations - burn_in) / thin).
std::size_t kept_draws(const SamplerConfig& config);

/// Burn-in trimmed, thinned draws of one chain.
struct PosteriorDraws {
  Eigen::MatrixXd beta;            // M x k
  Eigen::MatrixXd zeta;            // M x q
  Eigen::VectorXd sigma_alpha_sq;  // M
  Eigen::MatrixXd alpha;           // M x n, or 0 x 0 when not stored

  double p = 0.5;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::blocked;
  SamplerConfig config;
  double wall_seconds = 0.0;
  std::vector<std::string> beta_names;
  std::vector<std::string> zeta_names;

  Eigen::Index size() const { return beta.rows(); }
  bool has_alpha() const { return alpha.rows() > 0; }

  /// beta columns, zeta columns and sigma_alpha^2 side by side.
  Eigen::MatrixXd parameter_matrix() const;
  /// Column labels of parameter_matrix(): beta_1..beta_k, zeta_<name>...,
  /// sigma_alpha2.
  std::vector<std::string> parameter_names() const;
};

}  // namespace bpqr
