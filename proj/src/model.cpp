#include "bpqr/model.hpp"

#include <cmath>
#include <limits>

#include "bpqr/errors.hpp"

namespace bpqr {

namespace {

using Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

}  // namespace

PriorSpec default_prior(Index k, Index q) {
  PriorSpec prior;
  prior.beta_mean = Eigen::VectorXd::Zero(k);
  prior.beta_cov = 1e3 * Eigen::MatrixXd::Identity(k, k);
  prior.zeta_mean = Eigen::VectorXd::Zero(q);
  prior.zeta_cov = 1e3 * Eigen::MatrixXd::Identity(q, q);
  prior.c1 = 10.0;
  prior.d1 = 9.0;
  return prior;
}

ModelSpec make_model_spec(double p, const PriorSpec& prior) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("quantile must lie in (0, 1), got " + std::to_string(p));
  }
  if (prior.beta_cov.rows() != prior.beta_mean.size() ||
      prior.beta_cov.cols() != prior.beta_mean.size()) {
    throw ConfigError("beta prior covariance does not match the prior mean dimension");
  }
  if (prior.zeta_cov.rows() != prior.zeta_mean.size() ||
      prior.zeta_cov.cols() != prior.zeta_mean.size()) {
    throw ConfigError("zeta prior covariance does not match the prior mean dimension");
  }
  if (!(prior.c1 > 0.0) || !(prior.d1 > 0.0)) {
    throw ConfigError("inverse-gamma prior requires c1 > 0 and d1 > 0");
  }
  if (!prior.beta_cov.isApprox(prior.beta_cov.transpose()) ||
      !prior.zeta_cov.isApprox(prior.zeta_cov.transpose())) {
    throw ConfigError("prior covariance matrices must be symmetric");
  }
  ModelSpec spec;
  spec.qc = quantile_constants(p);
  spec.beta0 = prior.beta_mean;
  spec.zeta0 = prior.zeta_mean;
  try {
    spec.beta_precision = spd_inverse(prior.beta_cov, "beta prior covariance");
    spec.zeta_precision = spd_inverse(prior.zeta_cov, "zeta prior covariance");
  } catch (const NumericError& e) {
    throw ConfigError(e.what());
  }
  spec.c1 = prior.c1;
  spec.d1 = prior.d1;
  return spec;
}

void check_dimensions(const ModelSpec& spec, const PanelData& data) {
  if (static_cast<std::size_t>(spec.k()) != data.num_covariates()) {
    throw ConfigError("beta prior has dimension " + std::to_string(spec.k()) +
                      " but the design matrix has " + std::to_string(data.num_covariates()) +
                      " columns");
  }
  if (static_cast<std::size_t>(spec.q()) != data.num_mundlak()) {
    throw ConfigError("zeta prior has dimension " + std::to_string(spec.q()) + " but " +
                      std::to_string(data.num_mundlak()) + " Mundlak columns are selected");
  }
}

ChainState initialize_state(const PanelData& data, const ModelSpec& spec, RngStream& rng) {
  check_dimensions(spec, data);
  ChainState s;
  s.beta = spec.beta0;
  s.zeta = spec.zeta0;
  s.sigma_alpha_sq = spec.d1 / spec.c1;
  s.alpha = Eigen::VectorXd::Zero(idx(data.num_individuals()));
  s.w = Eigen::VectorXd::Ones(idx(data.num_observations()));
  s.z.resize(idx(data.num_observations()));
  for (std::size_t r = 0; r < data.num_observations(); ++r) {
    double v = std::abs(rng.normal());
    if (data.y[r] == 1 && v == 0.0) v = 1e-300;
    s.z[idx(r)] = data.y[r] == 1 ? v : -v;
  }
  return s;
}

Eigen::VectorXd cre_means(const ChainState& s, const PanelData& data) {
  if (data.num_mundlak() == 0) return Eigen::VectorXd::Zero(idx(data.num_individuals()));
  return data.mbar * s.zeta;
}

GaussianCanonical beta_conditional_nonblocked(const ChainState& s, const PanelData& data,
                                              const ModelSpec& spec) {
  const double theta = spec.qc.theta;
  const Eigen::ArrayXd dinv = 1.0 / (spec.qc.tau_sq * s.w.array());
  Eigen::VectorXd resid(idx(data.num_observations()));
  for (std::size_t i = 0; i < data.num_individuals(); ++i) {
    for (std::size_t r = data.begin(i); r < data.end(i); ++r) {
      resid[idx(r)] = s.z[idx(r)] - s.alpha[idx(i)] - s.w[idx(r)] * theta;
    }
  }
  const RowMatrix weighted = data.x.array().colwise() * dinv;
  GaussianCanonical g;
  g.precision = weighted.transpose() * data.x + spec.beta_precision;
  g.linear = weighted.transpose() * resid + spec.beta_precision * spec.beta0;
  return g;
}

void update_beta_nonblocked(ChainState& s, const PanelData& data, const ModelSpec& spec,
                            RngStream& rng) {
  s.beta = sample_canonical(rng, beta_conditional_nonblocked(s, data, spec),
                            "beta conditional precision (non-blocked)");
}

ScalarNormal alpha_conditional(const ChainState& s, const PanelData& data, const ModelSpec& spec,
                               std::size_t i) {
  const double theta = spec.qc.theta;
  const double prior_prec = 1.0 / s.sigma_alpha_sq;
  const double prior_mean =
      data.num_mundlak() == 0 ? 0.0 : data.mbar.row(idx(i)).dot(s.zeta);
  double prec = prior_prec;
  double lin = prior_prec * prior_mean;
  for (std::size_t r = data.begin(i); r < data.end(i); ++r) {
    const double dinv = 1.0 / (spec.qc.tau_sq * s.w[idx(r)]);
    const double xb = data.x.row(idx(r)).dot(s.beta);
    prec += dinv;
    lin += dinv * (s.z[idx(r)] - xb - s.w[idx(r)] * theta);
  }
  return {lin / prec, 1.0 / prec};
}

void update_alpha(ChainState& s, const PanelData& data, const ModelSpec& spec, RngStream& rng) {
  if (!(s.sigma_alpha_sq > 0.0)) throw DomainError("sigma_alpha^2 must be positive");
  for (std::size_t i = 0; i < data.num_individuals(); ++i) {
    const ScalarNormal c = alpha_conditional(s, data, spec, i);
    s.alpha[idx(i)] = c.mean + std::sqrt(c.var) * rng.normal();
  }
}

double w_conditional_eta(const QuantileConstants& qc) {
  return qc.theta * qc.theta / qc.tau_sq + 2.0;
}

void update_w(ChainState& s, const PanelData& data, const ModelSpec& spec, RngStream& rng) {
  const double eta = w_conditional_eta(spec.qc);
  const Eigen::VectorXd xb = data.x * s.beta;
  for (std::size_t i = 0; i < data.num_individuals(); ++i) {
    for (std::size_t r = data.begin(i); r < data.end(i); ++r) {
      const double e = s.z[idx(r)] - xb[idx(r)] - s.alpha[idx(i)];
      const double lambda = e * e / spec.qc.tau_sq;
      s.w[idx(r)] = std::max(sample_gig_half(rng, lambda, eta), kWFloor);
    }
  }
}

InvGammaParams sigma_alpha_conditional(const ChainState& s, const PanelData& data,
                                       const ModelSpec& spec) {
  const Eigen::VectorXd resid = s.alpha - cre_means(s, data);
  const double n = static_cast<double>(data.num_individuals());
  return {(n + spec.c1) / 2.0, (spec.d1 + resid.squaredNorm()) / 2.0};
}

void update_sigma_alpha(ChainState& s, const PanelData& data, const ModelSpec& spec,
                        RngStream& rng) {
  const InvGammaParams ig = sigma_alpha_conditional(s, data, spec);
  s.sigma_alpha_sq = sample_invgamma(rng, ig.shape, ig.scale);
}

GaussianCanonical zeta_conditional(const ChainState& s, const PanelData& data,
                                   const ModelSpec& spec) {
  const double inv_sigma = 1.0 / s.sigma_alpha_sq;
  GaussianCanonical g;
  g.precision = inv_sigma * (data.mbar.transpose() * data.mbar) + spec.zeta_precision;
  g.linear = inv_sigma * (data.mbar.transpose() * s.alpha) + spec.zeta_precision * spec.zeta0;
  return g;
}

void update_zeta(ChainState& s, const PanelData& data, const ModelSpec& spec, RngStream& rng) {
  if (!(s.sigma_alpha_sq > 0.0)) throw DomainError("sigma_alpha^2 must be positive");
  if (spec.q() == 0) return;
  s.zeta = sample_canonical(rng, zeta_conditional(s, data, spec), "zeta conditional precision");
}

void update_z_nonblocked(ChainState& s, const PanelData& data, const ModelSpec& spec,
                         RngStream& rng) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double theta = spec.qc.theta;
  const Eigen::VectorXd xb = data.x * s.beta;
  for (std::size_t i = 0; i < data.num_individuals(); ++i) {
    for (std::size_t r = data.begin(i); r < data.end(i); ++r) {
      const double mean = xb[idx(r)] + s.alpha[idx(i)] + s.w[idx(r)] * theta;
      const double var = spec.qc.tau_sq * s.w[idx(r)];
      s.z[idx(r)] = data.y[r] == 1 ? sample_truncnorm(rng, mean, var, 0.0, inf)
                                   : sample_truncnorm(rng, mean, var, -inf, 0.0);
    }
  }
}

std::string to_string(Algorithm a) {
  return a == Algorithm::blocked ? "blocked" : "nonblocked";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "blocked") return Algorithm::blocked;
  if (name == "nonblocked") return Algorithm::nonblocked;
  throw ConfigError("algorithm must be 'blocked' or 'nonblocked', got '" + name + "'");
}

void validate(const SamplerConfig& config) {
  if (config.thin < 1) throw ConfigError("thin must be at least 1");
  if (config.burn_in >= config.iterations) {
    throw ConfigError("burn_in (" + std::to_string(config.burn_in) +
                      ") must be smaller than iterations (" +
                      std::to_string(config.iterations) + ")");
  }
}

std::size_t kept_draws(const SamplerConfig& config) {
  return (config.iterations - config.burn_in) / config.thin;
}

Eigen::MatrixXd PosteriorDraws::parameter_matrix() const {
  Eigen::MatrixXd out(beta.rows(), beta.cols() + zeta.cols() + 1);
  out << beta, zeta, sigma_alpha_sq;
  return out;
}

std::vector<std::string> PosteriorDraws::parameter_names() const {
  std::vector<std::string> names = beta_names;
  names.insert(names.end(), zeta_names.begin(), zeta_names.end());
  names.push_back("sigma_alpha2");
  return names;
}

}  // namespace bpqr
