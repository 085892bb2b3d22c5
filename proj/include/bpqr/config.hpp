#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bpqr/model.hpp"
#include "bpqr/panel.hpp"
#include "bpqr/simgen.hpp"

namespace bpqr {

/// Environment variable that replaces the built-in default seed.
inline constexpr const char* kSeedEnvVar = "BPQR_SEED";
inline constexpr std::uint64_t kDefaultSeed = 20210611;

/// Flat configuration document with dotted keys, e.g.
///
///   {"data": "data.csv", "out": "run", "model.quantiles": [0.25, 0.5],
///    "model.mundlak": ["x3", "x4"], "prior.beta_var": 1000,
///    "sampler.iterations": 16000, "sampler.algorithm": "blocked"}
///
/// Recognized keys and defaults are listed in README.md. Unknown keys are
/// rejected.
class ConfigDocument {
 public:
  ConfigDocument() = default;
  explicit ConfigDocument(nlohmann::json values);

  static ConfigDocument from_file(const std::filesystem::path& path);

  /// Set a key from command-line text. The value is parsed as JSON when
  /// possible and kept as a string otherwise.
  void set_from_text(const std::string& key, const std::string& text);
  void set(const std::string& key, nlohmann::json value);

  bool contains(const std::string& key) const;
  const nlohmann::json& values() const { return values_; }

 private:
  nlohmann::json values_ = nlohmann::json::object();
};

struct Transform {
  enum class Kind { demean, scale };
  Kind kind;
  std::string column;
  double factor = 1.0;
};

/// Everything needed for a `fit` run.
struct RunConfig {
  std::filesystem::path data_path;
  std::filesystem::path out_dir = ".";
  std::vector<double> quantiles{0.5};
  std::optional<std::vector<std::string>> mundlak;
  std::vector<Transform> transforms;
  SamplerConfig sampler;
  nlohmann::json prior = nlohmann::json::object();
};

/// Validates and converts. Throws ConfigError naming the offending key.
RunConfig parse_run_config(const ConfigDocument& doc);

/// Builds the prior for a panel from the "prior.*" keys: numbers give
/// scaled identities (variances) or constant vectors (means), arrays give
/// vectors or diagonal variances, arrays of arrays give full covariances.
PriorSpec build_prior(const nlohmann::json& prior_keys, Eigen::Index k, Eigen::Index q);

/// Apply Mundlak selection and transformations to a freshly ingested panel.
void prepare_panel(PanelData& data, const std::optional<std::vector<std::string>>& mundlak,
                   const std::vector<Transform>& transforms);

nlohmann::json transforms_to_json(const std::vector<Transform>& transforms);
std::vector<Transform> transforms_from_json(const nlohmann::json& j);

/// Simulation settings from the "sim.*" keys (defaults reproduce the
/// reference design with n = 1000).
SimSpec parse_sim_config(const ConfigDocument& doc);

nlohmann::json sim_spec_to_json(const SimSpec& spec);

/// Seed for the chain at quantile p, derived from the run seed so that the
/// same p always gets the same stream regardless of list order.
std::uint64_t chain_seed(std::uint64_t run_seed, double p);

/// Seed precedence: explicit value, then the config document, then the
/// environment variable, then kDefaultSeed.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const ConfigDocument& doc,
                           const std::string& key);

}  // namespace bpqr
