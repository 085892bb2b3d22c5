#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bpqr/linalg.hpp"

namespace bpqr {

/// Unbalanced binary-outcome panel.
///
/// Observations are stored contiguously by individual: rows
/// offsets[i] .. offsets[i+1]-1 of `x` and `y` belong to individual i.
/// Column 0 of `x` is the intercept. `mundlak_cols` lists the (0-based,
/// non-intercept) columns whose individual means enter the correlated
/// random effect; `mbar` holds those means, one row per individual.
struct PanelData {
  std::vector<std::string> ids;
  std::vector<long> periods;
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint8_t> y;
  RowMatrix x;
  std::vector<std::string> column_names;
  std::vector<std::size_t> mundlak_cols;
  Eigen::MatrixXd mbar;

  std::size_t num_individuals() const { return offsets.size() - 1; }
  std::size_t num_observations() const { return y.size(); }
  std::size_t num_covariates() const { return static_cast<std::size_t>(x.cols()); }
  std::size_t num_mundlak() const { return mundlak_cols.size(); }
  std::size_t length(std::size_t i) const { return offsets[i + 1] - offsets[i]; }
  std::size_t begin(std::size_t i) const { return offsets[i]; }
  std::size_t end(std::size_t i) const { return offsets[i + 1]; }

  /// Index of a named column, or throws ConfigError.
  std::size_t column_index(const std::string& name) const;
};

/// Fill `mbar` from `x` and `mundlak_cols`. Throws DataError on empty
/// individuals and ConfigError on an invalid column selection.
void compute_mundlak_means(PanelData& data);

/// Check the structural invariants (binary y, intercept column, lengths,
/// Mundlak means consistent with x). Throws DataError.
void validate_panel(const PanelData& data);

/// Empty panel (n = 0) with the given covariate names after the intercept.
PanelData empty_panel(const std::vector<std::string>& covariates,
                      const std::vector<std::size_t>& mundlak_cols);

/// Indices of all non-intercept columns.
std::vector<std::size_t> all_non_intercept(const PanelData& data);

}  // namespace bpqr
