#pragma once

#include <functional>

#include <Eigen/Core>

#include "bpqr/model.hpp"

namespace bpqr {

// ---------------------------------------------------------------------------
// Structured covariance of z_i marginal of alpha_i:
//   Omega_i = sigma_alpha^2 * 1 1' + diag(d),  d_t = tau^2 w_it.
// ---------------------------------------------------------------------------

/// Dense Omega for a single individual.
Eigen::MatrixXd omega_dense(double sigma_alpha_sq, const Eigen::VectorXd& d);

/// Omega^{-1} = D^{-1} - s D^{-1} 1 1' D^{-1} / (1 + s 1'D^{-1}1)
/// (Sherman-Morrison), returned densely.
Eigen::MatrixXd omega_inverse(double sigma_alpha_sq, const Eigen::VectorXd& d);

/// Mean and variance of z_t given z_{-t} under N(mu, Omega).
struct ConditionalMoments {
  double mean;
  double var;
};

/// O(T) conditional moments using the rank-one structure of Omega.
ConditionalMoments z_conditional_rank_one(double sigma_alpha_sq, const Eigen::VectorXd& d,
                                          const Eigen::VectorXd& mu, const Eigen::VectorXd& z,
                                          Eigen::Index t);

/// Partitioned-matrix conditional moments for an arbitrary SPD covariance.
ConditionalMoments z_conditional_dense(const Eigen::MatrixXd& omega, const Eigen::VectorXd& mu,
                                       const Eigen::VectorXd& z, Eigen::Index t);

GaussianCanonical beta_conditional_blocked(const ChainState& s, const PanelData& data,
                                           const ModelSpec& spec);
void update_beta_blocked(ChainState& s, const PanelData& data, const ModelSpec& spec,
                         RngStream& rng);

enum class ZSweepMethod { rank_one, dense };

/// One coordinate-wise pass over t = 1..T_i of the truncated multivariate
/// normal full conditionals, for every individual.
void update_z_blocked(ChainState& s, const PanelData& data, const ModelSpec& spec,
                      RngStream& rng, ZSweepMethod method = ZSweepMethod::rank_one);

/// beta, alpha, w, sigma_alpha^2, zeta, z (single-site Gibbs).
void sweep_nonblocked(ChainState& s, const PanelData& data, const ModelSpec& spec,
                      RngStream& rng);

/// (beta, z) marginal of alpha, then alpha, w, sigma_alpha^2, zeta.
void sweep_blocked(ChainState& s, const PanelData& data, const ModelSpec& spec, RngStream& rng);

void sweep(Algorithm algorithm, ChainState& s, const PanelData& data, const ModelSpec& spec,
           RngStream& rng);

/// Runs config.iterations sweeps from initialize_state, discards burn-in
/// and stores every thin-th state. Numeric errors are rethrown with the
/// iteration index attached.
PosteriorDraws run_chain(const PanelData& data, const ModelSpec& spec,
                         const SamplerConfig& config, RngStream& rng);

PosteriorDraws run_chain_nonblocked(const PanelData& data, const ModelSpec& spec,
                                    SamplerConfig config, RngStream& rng);
PosteriorDraws run_chain_blocked(const PanelData& data, const ModelSpec& spec,
                                 SamplerConfig config, RngStream& rng);

}  // namespace bpqr
