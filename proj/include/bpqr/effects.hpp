#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "bpqr/diagnostics.hpp"
#include "bpqr/model.hpp"
#include "bpqr/panel.hpp"

namespace bpqr {

/// Move covariate column `column` (never the intercept) from value `from`
/// to value `to`.
struct Contrast {
  std::size_t column;
  double from;
  double to;
};

enum class EffectKind { ame, rr, odds_ratio };

std::string to_string(EffectKind kind);

struct EffectSummary {
  double mean;
  double std;
  Interval hpdi;
};

struct EffectResult {
  EffectKind kind;
  /// One value per posterior draw: the functional averaged over all
  /// observations (or the subsample) for that draw.
  Eigen::VectorXd per_draw;
  EffectSummary summary;
};

/// Guard applied to success probabilities inside the RR / OR ratios.
inline constexpr double kProbabilityFloor = 1e-12;

/// Pr(y = 1 | index) = 1 - F_AL(-index; 0, 1, p) where index = x'beta + alpha.
double prob_success(double index, double p);
double prob_success(const Eigen::Ref<const Eigen::RowVectorXd>& x_row,
                    const Eigen::VectorXd& beta, double alpha_i, double p);

struct EffectOptions {
  /// Use only this many individuals drawn without replacement (all when
  /// unset).
  std::optional<std::size_t> subsample_individuals;
  std::uint64_t subsample_seed = 0;
};

EffectResult average_marginal_effect(const PosteriorDraws& draws, const PanelData& data,
                                     const Contrast& contrast, const EffectOptions& options = {});
EffectResult relative_risk(const PosteriorDraws& draws, const PanelData& data,
                           const Contrast& contrast, const EffectOptions& options = {});
EffectResult odds_ratio(const PosteriorDraws& draws, const PanelData& data,
                        const Contrast& contrast, const EffectOptions& options = {});

struct EffectTable {
  double p;
  EffectResult ame;
  EffectResult rr;
  EffectResult odds_ratio;
};

/// All three functionals in a single pass over (draw, individual, period).
EffectTable compute_effects(const PosteriorDraws& draws, const PanelData& data,
                            const Contrast& contrast, const EffectOptions& options = {});

}  // namespace bpqr
