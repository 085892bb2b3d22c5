#include "bpqr/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bpqr/errors.hpp"

namespace bpqr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double ss = 0.0;
  for (const double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

std::vector<double> batch_means(std::span<const double> x, std::size_t batch) {
  const std::size_t nb = x.size() / batch;
  std::vector<double> means(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    means[b] = mean(x.subspan(b * batch, batch));
  }
  return means;
}

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  return v;
}

double quantile_type7(const std::vector<double>& sorted, double prob) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double mean(std::span<const double> draws) {
  if (draws.empty()) return kNaN;
  return std::accumulate(draws.begin(), draws.end(), 0.0) / static_cast<double>(draws.size());
}

double stddev(std::span<const double> draws) { return std::sqrt(sample_variance(draws)); }

double median(std::span<const double> draws) {
  if (draws.empty()) return kNaN;
  return quantile_type7(sorted_copy(draws), 0.5);
}

double autocorrelation(std::span<const double> draws, std::size_t lag) {
  const std::size_t m = draws.size();
  if (lag >= m) throw DomainError("autocorrelation lag must be smaller than the series length");
  if (lag == 0) return 1.0;
  const double mu = mean(draws);
  double c0 = 0.0;
  double ck = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    const double a = draws[t] - mu;
    c0 += a * a;
    if (t + lag < m) ck += a * (draws[t + lag] - mu);
  }
  if (c0 == 0.0) return 0.0;
  return ck / c0;
}

double batch_means_long_run_variance(std::span<const double> draws) {
  const auto batch = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(draws.size()))));
  if (batch < 1 || draws.size() / batch < 2) return sample_variance(draws);
  const std::vector<double> bm = batch_means(draws, batch);
  return static_cast<double>(batch) * sample_variance(bm);
}

InefficiencyFactor inefficiency_factor(std::span<const double> draws) {
  if (draws.size() < 100) {
    throw DomainError("inefficiency factor needs at least 100 draws");
  }
  const auto [lo, hi] = std::minmax_element(draws.begin(), draws.end());
  const double var = sample_variance(draws);
  if (*lo == *hi || !(var > 0.0)) return {1.0, true};
  return {batch_means_long_run_variance(draws) / var, false};
}

double mcse(std::span<const double> draws) {
  return std::sqrt(batch_means_long_run_variance(draws) / static_cast<double>(draws.size()));
}

double geweke_z(std::span<const double> draws, double frac_a, double frac_b) {
  if (!(frac_a > 0.0) || !(frac_b > 0.0) || frac_a + frac_b > 1.0) {
    throw ConfigError("Geweke segments must be non-empty and must not overlap (frac_a + frac_b <= 1)");
  }
  const std::size_t m = draws.size();
  const auto na = static_cast<std::size_t>(std::floor(frac_a * static_cast<double>(m)));
  const auto nb = static_cast<std::size_t>(std::floor(frac_b * static_cast<double>(m)));
  if (na < 2 || nb < 2) throw DomainError("Geweke segments are too short");
  const auto a = draws.first(na);
  const auto b = draws.last(nb);
  const double diff = mean(a) - mean(b);
  const double se2 = batch_means_long_run_variance(a) / static_cast<double>(na) +
                     batch_means_long_run_variance(b) / static_cast<double>(nb);
  if (!(se2 > 0.0)) {
    if (diff == 0.0) return 0.0;
    return std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  return diff / std::sqrt(se2);
}

Interval hpdi(std::span<const double> draws, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("HPDI level must lie in (0, 1)");
  if (draws.size() < 10) throw DomainError("HPDI needs at least 10 draws");
  const std::vector<double> v = sorted_copy(draws);
  const std::size_t m = v.size();
  const auto count = std::min<std::size_t>(
      m, static_cast<std::size_t>(std::ceil(level * static_cast<double>(m))));
  std::size_t best = 0;
  double width = v[count - 1] - v[0];
  for (std::size_t i = 1; i + count <= m; ++i) {
    const double w = v[i + count - 1] - v[i];
    if (w < width) {
      width = w;
      best = i;
    }
  }
  return {v[best], v[best + count - 1]};
}

Interval equal_tailed_interval(std::span<const double> draws, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("interval level must lie in (0, 1)");
  if (draws.empty()) throw DomainError("interval needs at least one draw");
  // Same draw count as the HPDI window, with the excluded draws split
  // evenly between the two tails.
  const std::vector<double> v = sorted_copy(draws);
  const std::size_t m = v.size();
  const auto count = std::min<std::size_t>(
      m, static_cast<std::size_t>(std::ceil(level * static_cast<double>(m))));
  const std::size_t lo = (m - count) / 2;
  return {v[lo], v[lo + count - 1]};
}

ParameterSummary summarize_series(const std::string& name, std::span<const double> draws) {
  ParameterSummary s;
  s.name = name;
  s.mean = mean(draws);
  s.std = stddev(draws);
  s.median = median(draws);
  s.hpdi = draws.size() >= 10 ? hpdi(draws) : Interval{kNaN, kNaN};
  if (draws.size() >= 100) {
    const InefficiencyFactor f = inefficiency_factor(draws);
    s.inefficiency = f.value;
    s.inefficiency_degenerate = f.degenerate;
  } else {
    s.inefficiency = kNaN;
    s.inefficiency_degenerate = false;
  }
  try {
    s.geweke_z = geweke_z(draws);
  } catch (const DomainError&) {
    s.geweke_z = kNaN;
  }
  const auto acf = [&](std::size_t lag) {
    return lag < draws.size() ? autocorrelation(draws, lag) : kNaN;
  };
  s.acf1 = acf(1);
  s.acf5 = acf(5);
  s.acf10 = acf(10);
  return s;
}

ChainSummary summarize(const Eigen::MatrixXd& parameters, const std::vector<std::string>& names) {
  if (static_cast<std::size_t>(parameters.cols()) != names.size()) {
    throw DomainError("parameter name count does not match the draw matrix");
  }
  ChainSummary out;
  out.reserve(names.size());
  for (Eigen::Index j = 0; j < parameters.cols(); ++j) {
    const Eigen::VectorXd col = parameters.col(j);
    out.push_back(summarize_series(names[static_cast<std::size_t>(j)],
                                   std::span<const double>(col.data(), static_cast<std::size_t>(col.size()))));
  }
  return out;
}

ChainSummary summarize(const PosteriorDraws& draws) {
  return summarize(draws.parameter_matrix(), draws.parameter_names());
}

}  // namespace bpqr
