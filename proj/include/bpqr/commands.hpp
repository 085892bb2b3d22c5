#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bpqr/config.hpp"
#include "bpqr/diagnostics.hpp"

namespace bpqr {

// Batch commands behind the `bpqr` executable. Each one reads and writes
// files only; the executable adds argument parsing and exit codes.

/// Writes `data.csv` and `truth.json` into out_dir.
void cmd_simulate(const ConfigDocument& doc, const std::filesystem::path& out_dir);

/// Runs one chain per configured quantile and writes `draws_<p>.csv` and
/// `meta_<p>.json` into the configured output directory. Returns the draws
/// paths in quantile order.
std::vector<std::filesystem::path> cmd_fit(const ConfigDocument& doc);

/// Writes `summary.csv` and `summary.json` into out_dir.
ChainSummary cmd_diagnose(const std::filesystem::path& draws_path,
                          const std::filesystem::path& out_dir);

struct EffectsRequest {
  std::vector<std::filesystem::path> draws;
  std::filesystem::path data;
  std::string covariate;
  double from = 0.0;
  double to = 1.0;
  /// Used when a draws file has no sibling meta file.
  std::optional<double> quantile;
  std::filesystem::path out_dir = ".";
  std::optional<std::size_t> subsample;
};

/// Writes `effects.json` (one block per draws file) and returns its content.
nlohmann::json cmd_effects(const EffectsRequest& request);

/// Path of the meta file written next to a `draws_<p>.csv` file.
std::filesystem::path meta_path_for(const std::filesystem::path& draws_path);

}  // namespace bpqr
