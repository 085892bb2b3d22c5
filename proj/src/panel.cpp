#include "bpqr/panel.hpp"

#include <algorithm>

#include "bpqr/errors.hpp"

namespace bpqr {

std::size_t PanelData::column_index(const std::string& name) const {
  const auto it = std::find(column_names.begin(), column_names.end(), name);
  if (it == column_names.end()) throw ConfigError("unknown covariate column '" + name + "'");
  return static_cast<std::size_t>(it - column_names.begin());
}

void compute_mundlak_means(PanelData& data) {
  const std::size_t n = data.num_individuals();
  const std::size_t q = data.mundlak_cols.size();
  for (const std::size_t c : data.mundlak_cols) {
    if (c == 0 || c >= data.num_covariates()) {
      throw ConfigError("Mundlak column index " + std::to_string(c) +
                        " must be a non-intercept column");
    }
  }
  data.mbar.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(q));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = data.length(i);
    if (len == 0) throw DataError("individual " + std::to_string(i) + " has no observations");
    for (std::size_t j = 0; j < q; ++j) {
      double sum = 0.0;
      for (std::size_t r = data.begin(i); r < data.end(i); ++r) {
        sum += data.x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(data.mundlak_cols[j]));
      }
      data.mbar(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          sum / static_cast<double>(len);
    }
  }
}

void validate_panel(const PanelData& data) {
  const std::size_t n = data.num_individuals();
  if (data.offsets.empty() || data.offsets.front() != 0) throw DataError("panel offsets must start at 0");
  if (data.offsets.back() != data.y.size()) throw DataError("panel offsets do not cover y");
  if (static_cast<std::size_t>(data.x.rows()) != data.y.size()) {
    throw DataError("design matrix row count differs from outcome length");
  }
  if (data.column_names.size() != data.num_covariates()) {
    throw DataError("column name count differs from design matrix width");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (data.length(i) == 0) throw DataError("individual " + std::to_string(i) + " has no observations");
  }
  for (std::size_t r = 0; r < data.y.size(); ++r) {
    if (data.y[r] > 1) throw DataError("outcome at row " + std::to_string(r) + " is not binary");
    if (data.x.cols() == 0 || data.x(static_cast<Eigen::Index>(r), 0) != 1.0) {
      throw DataError("design matrix column 1 must be the intercept (row " + std::to_string(r) + ")");
    }
  }
  if (static_cast<std::size_t>(data.mbar.rows()) != n ||
      static_cast<std::size_t>(data.mbar.cols()) != data.mundlak_cols.size()) {
    throw DataError("Mundlak means have the wrong shape");
  }
}

PanelData empty_panel(const std::vector<std::string>& covariates,
                      const std::vector<std::size_t>& mundlak_cols) {
  PanelData data;
  data.column_names.push_back("(Intercept)");
  data.column_names.insert(data.column_names.end(), covariates.begin(), covariates.end());
  data.x.resize(0, static_cast<Eigen::Index>(data.column_names.size()));
  data.mundlak_cols = mundlak_cols;
  compute_mundlak_means(data);
  return data;
}

std::vector<std::size_t> all_non_intercept(const PanelData& data) {
  std::vector<std::size_t> cols;
  for (std::size_t c = 1; c < data.num_covariates(); ++c) cols.push_back(c);
  return cols;
}

}  // namespace bpqr
