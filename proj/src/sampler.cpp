#include "bpqr/sampler.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "bpqr/errors.hpp"

namespace bpqr {

namespace {

using Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

constexpr double kInf = std::numeric_limits<double>::infinity();

double draw_sign_constrained(RngStream& rng, std::uint8_t y, double mean, double var) {
  return y == 1 ? sample_truncnorm(rng, mean, var, 0.0, kInf)
                : sample_truncnorm(rng, mean, var, -kInf, 0.0);
}

}  // namespace

Eigen::MatrixXd omega_dense(double sigma_alpha_sq, const Eigen::VectorXd& d) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Constant(d.size(), d.size(), sigma_alpha_sq);
  omega.diagonal() += d;
  return omega;
}

Eigen::MatrixXd omega_inverse(double sigma_alpha_sq, const Eigen::VectorXd& d) {
  if (sigma_alpha_sq < 0.0) throw DomainError("sigma_alpha^2 must be non-negative");
  if ((d.array() <= 0.0).any()) throw DomainError("Omega diagonal terms must be positive");
  const Eigen::VectorXd dinv = d.cwiseInverse();
  const double c = sigma_alpha_sq / (1.0 + sigma_alpha_sq * dinv.sum());
  Eigen::MatrixXd inv = -c * dinv * dinv.transpose();
  inv.diagonal() += dinv;
  return inv;
}

ConditionalMoments z_conditional_rank_one(double sigma_alpha_sq, const Eigen::VectorXd& d,
                                          const Eigen::VectorXd& mu, const Eigen::VectorXd& z,
                                          Index t) {
  // Given the others, the shared effect has precision 1/s + sum_{u!=t} 1/d_u
  // and z_t adds independent noise of variance d_t.
  double prec_others = 0.0;
  double lin_others = 0.0;
  for (Index u = 0; u < d.size(); ++u) {
    if (u == t) continue;
    prec_others += 1.0 / d[u];
    lin_others += (z[u] - mu[u]) / d[u];
  }
  const double denom = 1.0 + sigma_alpha_sq * prec_others;
  return {mu[t] + sigma_alpha_sq * lin_others / denom, d[t] + sigma_alpha_sq / denom};
}

ConditionalMoments z_conditional_dense(const Eigen::MatrixXd& omega, const Eigen::VectorXd& mu,
                                       const Eigen::VectorXd& z, Index t) {
  const Index n = omega.rows();
  if (n == 1) return {mu[0], omega(0, 0)};
  Eigen::MatrixXd rest(n - 1, n - 1);
  Eigen::VectorXd cross(n - 1);
  Eigen::VectorXd dev(n - 1);
  for (Index a = 0, ra = 0; a < n; ++a) {
    if (a == t) continue;
    cross[ra] = omega(t, a);
    dev[ra] = z[a] - mu[a];
    for (Index b = 0, rb = 0; b < n; ++b) {
      if (b == t) continue;
      rest(ra, rb) = omega(a, b);
      ++rb;
    }
    ++ra;
  }
  const auto llt = spd_factor(rest, "Omega_{-t,-t}");
  const Eigen::VectorXd gain = llt.solve(cross);
  return {mu[t] + gain.dot(dev), omega(t, t) - gain.dot(cross)};
}

GaussianCanonical beta_conditional_blocked(const ChainState& s, const PanelData& data,
                                           const ModelSpec& spec) {
  const double theta = spec.qc.theta;
  const double sig = s.sigma_alpha_sq;
  const Index k = spec.k();
  const Eigen::VectorXd cre = cre_means(s, data);
  const Eigen::ArrayXd dinv = 1.0 / (spec.qc.tau_sq * s.w.array());

  Eigen::VectorXd resid(idx(data.num_observations()));
  for (std::size_t i = 0; i < data.num_individuals(); ++i) {
    for (std::size_t r = data.begin(i); r < data.end(i); ++r) {
      resid[idx(r)] = s.z[idx(r)] - cre[idx(i)] - s.w[idx(r)] * theta;
    }
  }
  // Diagonal part X' D^{-1} X, X' D^{-1} r over all rows at once.
  const RowMatrix weighted = data.x.array().colwise() * dinv;
  GaussianCanonical g;
  g.precision = weighted.transpose() * data.x + spec.beta_precision;
  g.linear = weighted.transpose() * resid + spec.beta_precision * spec.beta0;

  // Rank-one corrections, one per individual.
  if (sig > 0.0) {
    Eigen::VectorXd u(k);
    for (std::size_t i = 0; i < data.num_individuals(); ++i) {
      u.setZero();
      double dsum = 0.0;
      double rsum = 0.0;
      for (std::size_t r = data.begin(i); r < data.end(i); ++r) {
        u += weighted.row(idx(r)).transpose();
        dsum += dinv[idx(r)];
        rsum += dinv[idx(r)] * resid[idx(r)];
      }
      const double c = sig / (1.0 + sig * dsum);
      g.precision.noalias() -= c * u * u.transpose();
      g.linear.noalias() -= (c * rsum) * u;
    }
  }
  return g;
}

void update_beta_blocked(ChainState& s, const PanelData& data, const ModelSpec& spec,
                         RngStream& rng) {
  s.beta = sample_canonical(rng, beta_conditional_blocked(s, data, spec),
                            "beta conditional precision (blocked)");
}

void update_z_blocked(ChainState& s, const PanelData& data, const ModelSpec& spec,
                      RngStream& rng, ZSweepMethod method) {
  const double theta = spec.qc.theta;
  const double sig = s.sigma_alpha_sq;
  const Eigen::VectorXd xb = data.x * s.beta;
  const Eigen::VectorXd cre = cre_means(s, data);

  for (std::size_t i = 0; i < data.num_individuals(); ++i) {
    const std::size_t b = data.begin(i);
    const Index len = idx(data.length(i));

    if (method == ZSweepMethod::dense) {
      Eigen::VectorXd d(len), mu(len), zi(len);
      for (Index t = 0; t < len; ++t) {
        const Index r = idx(b) + t;
        d[t] = spec.qc.tau_sq * s.w[r];
        mu[t] = xb[r] + cre[idx(i)] + s.w[r] * theta;
        zi[t] = s.z[r];
      }
      const Eigen::MatrixXd omega = omega_dense(sig, d);
      for (Index t = 0; t < len; ++t) {
        const ConditionalMoments cm = z_conditional_dense(omega, mu, zi, t);
        zi[t] = draw_sign_constrained(rng, data.y[b + static_cast<std::size_t>(t)], cm.mean, cm.var);
        s.z[idx(b) + t] = zi[t];
      }
      continue;
    }

    // Running sums over the individual's observations; the t-th term is
    // removed to get the "others" quantities.
    double prec_all = 0.0;
    double lin_all = 0.0;
    for (Index t = 0; t < len; ++t) {
      const Index r = idx(b) + t;
      const double dinv = 1.0 / (spec.qc.tau_sq * s.w[r]);
      prec_all += dinv;
      lin_all += dinv * (s.z[r] - xb[r] - cre[idx(i)] - s.w[r] * theta);
    }
    for (Index t = 0; t < len; ++t) {
      const Index r = idx(b) + t;
      const double d = spec.qc.tau_sq * s.w[r];
      const double dinv = 1.0 / d;
      const double mu = xb[r] + cre[idx(i)] + s.w[r] * theta;
      const double old_dev = s.z[r] - mu;
      const double prec_others = prec_all - dinv;
      const double lin_others = lin_all - dinv * old_dev;
      const double denom = 1.0 + sig * prec_others;
      const double mean = mu + sig * lin_others / denom;
      const double var = d + sig / denom;
      s.z[r] = draw_sign_constrained(rng, data.y[b + static_cast<std::size_t>(t)], mean, var);
      lin_all = lin_others + dinv * (s.z[r] - mu);
    }
  }
}

void sweep_nonblocked(ChainState& s, const PanelData& data, const ModelSpec& spec,
                      RngStream& rng) {
  update_beta_nonblocked(s, data, spec, rng);
  update_alpha(s, data, spec, rng);
  update_w(s, data, spec, rng);
  update_sigma_alpha(s, data, spec, rng);
  update_zeta(s, data, spec, rng);
  update_z_nonblocked(s, data, spec, rng);
}

void sweep_blocked(ChainState& s, const PanelData& data, const ModelSpec& spec, RngStream& rng) {
  update_beta_blocked(s, data, spec, rng);
  update_z_blocked(s, data, spec, rng);
  update_alpha(s, data, spec, rng);
  update_w(s, data, spec, rng);
  update_sigma_alpha(s, data, spec, rng);
  update_zeta(s, data, spec, rng);
}

void sweep(Algorithm algorithm, ChainState& s, const PanelData& data, const ModelSpec& spec,
           RngStream& rng) {
  if (algorithm == Algorithm::blocked) {
    sweep_blocked(s, data, spec, rng);
  } else {
    sweep_nonblocked(s, data, spec, rng);
  }
}

PosteriorDraws run_chain(const PanelData& data, const ModelSpec& spec,
                         const SamplerConfig& config, RngStream& rng) {
  validate(config);
  check_dimensions(spec, data);
  const auto start = std::chrono::steady_clock::now();

  const Index m = idx(kept_draws(config));
  const Index n = idx(data.num_individuals());
  PosteriorDraws out;
  out.beta.resize(m, spec.k());
  out.zeta.resize(m, spec.q());
  out.sigma_alpha_sq.resize(m);
  if (config.store_alpha) out.alpha.resize(m, n);
  out.p = spec.qc.p;
  out.seed = config.seed;
  out.algorithm = config.algorithm;
  out.config = config;
  for (Index j = 0; j < spec.k(); ++j) out.beta_names.push_back("beta_" + std::to_string(j + 1));
  for (const std::size_t c : data.mundlak_cols) out.zeta_names.push_back("zeta_" + data.column_names[c]);

  ChainState s = initialize_state(data, spec, rng);
  Index stored = 0;
  for (std::size_t it = 1; it <= config.iterations; ++it) {
    try {
      sweep(config.algorithm, s, data, spec, rng);
    } catch (const NumericError& e) {
      throw NumericError("iteration " + std::to_string(it) + ": " + e.what());
    }
    if (it <= config.burn_in || (it - config.burn_in) % config.thin != 0) continue;
    if (stored >= m) break;
    out.beta.row(stored) = s.beta.transpose();
    out.zeta.row(stored) = s.zeta.transpose();
    out.sigma_alpha_sq[stored] = s.sigma_alpha_sq;
    if (config.store_alpha) out.alpha.row(stored) = s.alpha.transpose();
    ++stored;
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

PosteriorDraws run_chain_nonblocked(const PanelData& data, const ModelSpec& spec,
                                    SamplerConfig config, RngStream& rng) {
  config.algorithm = Algorithm::nonblocked;
  return run_chain(data, spec, config, rng);
}

PosteriorDraws run_chain_blocked(const PanelData& data, const ModelSpec& spec,
                                 SamplerConfig config, RngStream& rng) {
  config.algorithm = Algorithm::blocked;
  return run_chain(data, spec, config, rng);
}

}  // namespace bpqr
