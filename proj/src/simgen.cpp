#include "bpqr/simgen.hpp"

#include <algorithm>
#include <cmath>

#include "bpqr/distributions.hpp"
#include "bpqr/errors.hpp"

namespace bpqr {

namespace {

using Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

double draw_covariate(const CovariateSpec& c, RngStream& rng) {
  if (c.kind == CovariateSpec::Kind::bernoulli) return rng.uniform() < c.prob ? 1.0 : 0.0;
  return c.low + (c.high - c.low) * rng.uniform();
}

}  // namespace

SimSpec default_sim_spec(double p, std::uint64_t seed) {
  SimSpec s;
  s.covariates = {{"x2"}, {"x3"}, {"x4"}};
  s.mundlak = {"x3", "x4"};
  s.beta_true = Eigen::Vector4d(0.5, 1.0, 0.6, -0.8);
  s.zeta_true = Eigen::Vector2d(-1.0, 1.0);
  s.sigma_alpha_sq_true = 1.0;
  s.p = p;
  s.seed = seed;
  return s;
}

void validate(const SimSpec& spec) {
  if (spec.n < 1) throw ConfigError("simulation requires at least one individual");
  if (spec.t_min < 1 || spec.t_max < spec.t_min) {
    throw ConfigError("simulation requires 1 <= t_min <= t_max");
  }
  if (!(spec.p > 0.0 && spec.p < 1.0)) {
    throw ConfigError("simulation quantile p must lie in (0, 1), got " + std::to_string(spec.p));
  }
  if (static_cast<std::size_t>(spec.beta_true.size()) != spec.covariates.size() + 1) {
    throw ConfigError("beta_true must have one entry per covariate plus the intercept");
  }
  if (static_cast<std::size_t>(spec.zeta_true.size()) != spec.mundlak.size()) {
    throw ConfigError("zeta_true must have one entry per Mundlak covariate");
  }
  if (!(spec.sigma_alpha_sq_true >= 0.0)) throw ConfigError("sigma_alpha_sq_true must be >= 0");
  for (const CovariateSpec& c : spec.covariates) {
    if (c.kind == CovariateSpec::Kind::uniform && !(c.low < c.high)) {
      throw ConfigError("covariate '" + c.name + "' needs low < high");
    }
    if (c.kind == CovariateSpec::Kind::bernoulli && !(c.prob >= 0.0 && c.prob <= 1.0)) {
      throw ConfigError("covariate '" + c.name + "' needs a probability in [0, 1]");
    }
  }
}

SimOutput generate(const SimSpec& spec, RngStream& rng) {
  validate(spec);
  const std::size_t k = spec.covariates.size() + 1;

  std::vector<std::size_t> lengths(spec.n);
  for (auto& len : lengths) {
    len = static_cast<std::size_t>(rng.uniform_int(static_cast<long>(spec.t_min),
                                                   static_cast<long>(spec.t_max)));
  }
  std::size_t total = 0;
  for (const auto len : lengths) total += len;

  SimOutput out;
  PanelData& data = out.data;
  data.column_names.push_back("(Intercept)");
  for (const auto& c : spec.covariates) data.column_names.push_back(c.name);
  for (const auto& name : spec.mundlak) data.mundlak_cols.push_back(data.column_index(name));
  data.x.resize(idx(total), idx(k));
  data.y.resize(total);
  data.periods.resize(total);
  data.ids.resize(spec.n);
  data.offsets.assign(1, 0);

  std::size_t row = 0;
  std::vector<double> fixed(k);
  for (std::size_t i = 0; i < spec.n; ++i) {
    data.ids[i] = std::to_string(i + 1);
    for (std::size_t j = 1; j < k; ++j) {
      if (spec.covariates[j - 1].time_invariant) fixed[j] = draw_covariate(spec.covariates[j - 1], rng);
    }
    for (std::size_t t = 0; t < lengths[i]; ++t, ++row) {
      data.x(idx(row), 0) = 1.0;
      data.periods[row] = static_cast<long>(t + 1);
      for (std::size_t j = 1; j < k; ++j) {
        const CovariateSpec& c = spec.covariates[j - 1];
        data.x(idx(row), idx(j)) = c.time_invariant ? fixed[j] : draw_covariate(c, rng);
      }
    }
    data.offsets.push_back(row);
  }
  compute_mundlak_means(data);

  const Index n = idx(spec.n);
  out.xi.resize(n);
  out.alpha.resize(n);
  const double sd = std::sqrt(spec.sigma_alpha_sq_true);
  for (Index i = 0; i < n; ++i) {
    out.xi[i] = sd * rng.normal();
    const double cre = spec.zeta_true.size() > 0 ? data.mbar.row(i).dot(spec.zeta_true) : 0.0;
    out.alpha[i] = cre + out.xi[i];
  }

  out.z.resize(idx(total));
  out.eps.resize(idx(total));
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t r = data.begin(i); r < data.end(i); ++r) {
      out.eps[idx(r)] = sample_al(rng, 0.0, 1.0, spec.p);
      out.z[idx(r)] = data.x.row(idx(r)).dot(spec.beta_true) + out.alpha[idx(i)] + out.eps[idx(r)];
      data.y[r] = out.z[idx(r)] > 0.0 ? 1 : 0;
      if (data.y[r] == 1) {
        ++out.ones;
      } else {
        ++out.zeros;
      }
    }
  }
  return out;
}

SimOutput generate(const SimSpec& spec) {
  RngStream rng(spec.seed);
  return generate(spec, rng);
}

}  // namespace bpqr
