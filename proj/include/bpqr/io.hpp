#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bpqr/diagnostics.hpp"
#include "bpqr/effects.hpp"
#include "bpqr/model.hpp"
#include "bpqr/panel.hpp"

namespace bpqr {

/// Read a panel CSV with header `id,t,y,<covariates...>`.
///
/// Rows must be grouped contiguously by id and strictly increasing in t
/// within an id. The intercept column is prepended and the Mundlak means
/// are computed over all non-intercept columns. Throws DataError naming the
/// line (and column for bad cells).
PanelData ingest_panel_csv(const std::filesystem::path& path);

/// Write `data` in the format read by ingest_panel_csv (round-trip exact).
void write_panel_csv(const std::filesystem::path& path, const PanelData& data);

/// Replace the Mundlak selection by the named columns and recompute m̄.
void select_mundlak(PanelData& data, const std::vector<std::string>& names);

/// Subtract the column mean.
void demean_column(PanelData& data, const std::string& name);
/// Divide the column by `factor`.
void scale_column(PanelData& data, const std::string& name, double factor);

/// Generic numeric table with a header row.
struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;

  /// Column index or -1.
  Eigen::Index find(const std::string& name) const;
};

CsvTable read_numeric_csv(const std::filesystem::path& path);

/// Columns beta_1..beta_k, zeta_<name>..., sigma_alpha2, then alpha_1..alpha_n
/// when stored. One row per kept draw.
void write_draws_csv(const std::filesystem::path& path, const PosteriorDraws& draws);

/// Parse a draws file back into PosteriorDraws (p is not stored in the CSV).
PosteriorDraws read_draws_csv(const std::filesystem::path& path, double p);

/// One row per parameter: name,mean,std,hpdi_lo,hpdi_hi,if,geweke_z,acf1,acf5,acf10.
void write_summary_csv(const std::filesystem::path& path, const ChainSummary& summary);
void write_summary_json(const std::filesystem::path& path, const ChainSummary& summary);

/// Formats a quantile for file names, e.g. 0.25 -> "0.25".
std::string format_quantile(double p);

/// Shortest decimal representation that round-trips.
std::string format_double(double v);

/// Write text, creating parent directories. Throws std::runtime_error with
/// the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace bpqr
