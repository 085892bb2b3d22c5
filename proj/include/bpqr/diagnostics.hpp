#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bpqr/model.hpp"

namespace bpqr {

/// Sample autocorrelation at `lag`, mean-centred with the biased 1/M
/// normalization. Throws DomainError if lag >= length.
double autocorrelation(std::span<const double> draws, std::size_t lag);

struct InefficiencyFactor {
  double value;
  /// Set when the series has zero variance; value is then 1.
  bool degenerate;
};

/// Batch-means inefficiency factor with batch size floor(sqrt(M)) and
/// floor(M / B) non-overlapping batches. Requires M >= 100.
InefficiencyFactor inefficiency_factor(std::span<const double> draws);

/// Batch-means estimate of the long-run variance (the variance of
/// sqrt(M) * sample mean).
double batch_means_long_run_variance(std::span<const double> draws);

/// Geweke convergence Z-score comparing the first `frac_a` and the last
/// `frac_b` of the chain. Throws ConfigError if the segments overlap.
double geweke_z(std::span<const double> draws, double frac_a = 0.1, double frac_b = 0.4);

struct Interval {
  double lower;
  double upper;
};

/// Shortest window of sorted draws containing ceil(level * M) draws.
Interval hpdi(std::span<const double> draws, double level = 0.95);

/// Equal-tailed interval: the ceil(level*M) central order statistics.
Interval equal_tailed_interval(std::span<const double> draws, double level = 0.95);

double mean(std::span<const double> draws);
/// Sample standard deviation (n - 1 denominator).
double stddev(std::span<const double> draws);
double median(std::span<const double> draws);

/// Monte Carlo standard error of the mean, sqrt(long-run variance / M).
double mcse(std::span<const double> draws);

struct ParameterSummary {
  std::string name;
  double mean;
  double std;
  double median;
  Interval hpdi;
  double inefficiency;
  bool inefficiency_degenerate;
  double geweke_z;
  double acf1;
  double acf5;
  double acf10;
};

using ChainSummary = std::vector<ParameterSummary>;

/// Summary of one named series. Lags that do not fit are reported as NaN.
ParameterSummary summarize_series(const std::string& name, std::span<const double> draws);

/// Summary of every column of `parameters`.
ChainSummary summarize(const Eigen::MatrixXd& parameters, const std::vector<std::string>& names);

/// Summary of beta, zeta and sigma_alpha^2.
ChainSummary summarize(const PosteriorDraws& draws);

}  // namespace bpqr
