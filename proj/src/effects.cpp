#include "bpqr/effects.hpp"

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "bpqr/distributions.hpp"
#include "bpqr/errors.hpp"
#include "bpqr/rng.hpp"

namespace bpqr {

namespace {

using Eigen::Index;

Index idx(std::size_t v) { return static_cast<Index>(v); }

void check_inputs(const PosteriorDraws& draws, const PanelData& data, const Contrast& contrast) {
  if (!draws.has_alpha()) {
    throw ConfigError("effects need stored alpha draws; rerun the fit with store_alpha=true");
  }
  if (contrast.column == 0 || contrast.column >= data.num_covariates()) {
    throw ConfigError("contrast column must be a non-intercept covariate");
  }
  if (static_cast<std::size_t>(draws.beta.cols()) != data.num_covariates()) {
    throw ConfigError("beta draws do not match the design matrix width");
  }
  if (static_cast<std::size_t>(draws.alpha.cols()) != data.num_individuals()) {
    throw ConfigError("alpha draws do not match the number of individuals");
  }
}

std::vector<std::size_t> selected_individuals(const PanelData& data, const EffectOptions& options) {
  std::vector<std::size_t> ids(data.num_individuals());
  std::iota(ids.begin(), ids.end(), 0);
  if (options.subsample_individuals && *options.subsample_individuals < ids.size()) {
    RngStream rng(options.subsample_seed);
    std::shuffle(ids.begin(), ids.end(), rng.engine());
    ids.resize(*options.subsample_individuals);
    std::sort(ids.begin(), ids.end());
  }
  return ids;
}

EffectSummary summarize_effect(const Eigen::VectorXd& v) {
  const std::span<const double> s(v.data(), static_cast<std::size_t>(v.size()));
  EffectSummary out;
  out.mean = mean(s);
  out.std = stddev(s);
  out.hpdi = v.size() >= 10 ? hpdi(s) : Interval{v.minCoeff(), v.maxCoeff()};
  return out;
}

double clamp_probability(double h) {
  return std::clamp(h, kProbabilityFloor, 1.0 - kProbabilityFloor);
}

}  // namespace

std::string to_string(EffectKind kind) {
  switch (kind) {
    case EffectKind::ame: return "ame";
    case EffectKind::rr: return "rr";
    case EffectKind::odds_ratio: return "or";
  }
  return "unknown";
}

double prob_success(double index, double p) { return 1.0 - cdf_al(-index, 0.0, 1.0, p); }

double prob_success(const Eigen::Ref<const Eigen::RowVectorXd>& x_row,
                    const Eigen::VectorXd& beta, double alpha_i, double p) {
  return prob_success(x_row.dot(beta) + alpha_i, p);
}

EffectTable compute_effects(const PosteriorDraws& draws, const PanelData& data,
                            const Contrast& contrast, const EffectOptions& options) {
  check_inputs(draws, data, contrast);
  const double p = draws.p;
  const Index m = draws.size();
  const Index j = idx(contrast.column);
  const std::vector<std::size_t> ids = selected_individuals(data, options);

  std::size_t obs = 0;
  for (const std::size_t i : ids) obs += data.length(i);

  EffectTable table{p,
                    {EffectKind::ame, Eigen::VectorXd::Zero(m), {}},
                    {EffectKind::rr, Eigen::VectorXd::Zero(m), {}},
                    {EffectKind::odds_ratio, Eigen::VectorXd::Zero(m), {}}};
  if (obs == 0) throw DataError("no observations available for effects");

  for (Index d = 0; d < m; ++d) {
    const Eigen::VectorXd beta = draws.beta.row(d).transpose();
    const double bj = beta[j];
    double ame = 0.0, rr = 0.0, odds = 0.0;
    for (const std::size_t i : ids) {
      const double alpha = draws.alpha(d, idx(i));
      for (std::size_t r = data.begin(i); r < data.end(i); ++r) {
        const auto row = data.x.row(idx(r));
        // x'beta without the j-th term.
        const double rest = row.dot(beta) - row[j] * bj + alpha;
        const double ha = prob_success(rest + contrast.from * bj, p);
        const double hb = prob_success(rest + contrast.to * bj, p);
        ame += hb - ha;
        const double ca = clamp_probability(ha);
        const double cb = clamp_probability(hb);
        rr += cb / ca;
        odds += (cb / (1.0 - cb)) / (ca / (1.0 - ca));
      }
    }
    const double denom = static_cast<double>(obs);
    table.ame.per_draw[d] = ame / denom;
    table.rr.per_draw[d] = rr / denom;
    table.odds_ratio.per_draw[d] = odds / denom;
  }
  table.ame.summary = summarize_effect(table.ame.per_draw);
  table.rr.summary = summarize_effect(table.rr.per_draw);
  table.odds_ratio.summary = summarize_effect(table.odds_ratio.per_draw);
  return table;
}

EffectResult average_marginal_effect(const PosteriorDraws& draws, const PanelData& data,
                                     const Contrast& contrast, const EffectOptions& options) {
  return compute_effects(draws, data, contrast, options).ame;
}

EffectResult relative_risk(const PosteriorDraws& draws, const PanelData& data,
                           const Contrast& contrast, const EffectOptions& options) {
  return compute_effects(draws, data, contrast, options).rr;
}

EffectResult odds_ratio(const PosteriorDraws& draws, const PanelData& data,
                        const Contrast& contrast, const EffectOptions& options) {
  return compute_effects(draws, data, contrast, options).odds_ratio;
}

}  // namespace bpqr
