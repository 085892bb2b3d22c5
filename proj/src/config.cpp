#include "bpqr/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#include "bpqr/errors.hpp"
#include "bpqr/io.hpp"
#include "bpqr/rng.hpp"

namespace bpqr {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "data",           "out",
      "model.quantiles", "model.mundlak",
      "prior.beta_mean", "prior.beta_var",
      "prior.zeta_mean", "prior.zeta_var",
      "prior.c1",        "prior.d1",
      "sampler.iterations", "sampler.burn_in",
      "sampler.thin",    "sampler.seed",
      "sampler.algorithm", "sampler.store_alpha",
      "preprocess.demean", "preprocess.scale",
      "sim.n",           "sim.t_min",
      "sim.t_max",       "sim.p",
      "sim.seed",        "sim.beta",
      "sim.zeta",        "sim.sigma_alpha2",
      "sim.covariates",  "sim.mundlak",
  };
  return keys;
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) bad(key, "expected a number");
  return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& key) {
  if (!j.is_number_integer() && !(j.is_number() && std::floor(j.get<double>()) == j.get<double>())) {
    bad(key, "expected a non-negative integer");
  }
  const double v = j.get<double>();
  if (v < 0) bad(key, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

std::vector<std::string> get_strings(const json& j, const std::string& key) {
  if (j.is_string()) return {j.get<std::string>()};
  if (!j.is_array()) bad(key, "expected a list of column names");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) bad(key, "expected a list of column names");
    out.push_back(e.get<std::string>());
  }
  return out;
}

Eigen::VectorXd get_vector(const json& j, const std::string& key, Eigen::Index size) {
  if (j.is_number()) return Eigen::VectorXd::Constant(size, j.get<double>());
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size) {
    bad(key, "expected a number or a list of " + std::to_string(size) + " numbers");
  }
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = get_number(j[static_cast<std::size_t>(i)], key);
  return v;
}

Eigen::MatrixXd get_covariance(const json& j, const std::string& key, Eigen::Index size) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!(v > 0.0)) bad(key, "variance must be positive");
    return v * Eigen::MatrixXd::Identity(size, size);
  }
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size) {
    bad(key, "expected a number, " + std::to_string(size) + " variances or a " +
                 std::to_string(size) + "x" + std::to_string(size) + " matrix");
  }
  if (size > 0 && j[0].is_array()) {
    Eigen::MatrixXd m(size, size);
    for (Eigen::Index r = 0; r < size; ++r) {
      const json& row = j[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != size) bad(key, "matrix rows must all have length " + std::to_string(size));
      for (Eigen::Index c = 0; c < size; ++c) m(r, c) = get_number(row[static_cast<std::size_t>(c)], key);
    }
    return m;
  }
  const Eigen::VectorXd diag = get_vector(j, key, size);
  if ((diag.array() <= 0.0).any()) bad(key, "variances must be positive");
  return diag.asDiagonal();
}

}  // namespace

ConfigDocument::ConfigDocument(nlohmann::json values) : values_(std::move(values)) {
  if (!values_.is_object()) throw ConfigError("configuration must be a JSON object");
}

ConfigDocument ConfigDocument::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  try {
    return ConfigDocument(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void ConfigDocument::set_from_text(const std::string& key, const std::string& text) {
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    value = text;
  }
  set(key, std::move(value));
}

void ConfigDocument::set(const std::string& key, nlohmann::json value) {
  if (known_keys().count(key) == 0) throw ConfigError("unknown config key '" + key + "'");
  values_[key] = std::move(value);
}

bool ConfigDocument::contains(const std::string& key) const { return values_.contains(key); }

RunConfig parse_run_config(const ConfigDocument& doc) {
  const json& j = doc.values();
  for (const auto& [key, value] : j.items()) {
    if (known_keys().count(key) == 0) throw ConfigError("unknown config key '" + key + "'");
  }
  RunConfig rc;
  if (j.contains("data")) {
    if (!j["data"].is_string()) bad("data", "expected a path");
    rc.data_path = j["data"].get<std::string>();
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) bad("out", "expected a directory path");
    rc.out_dir = j["out"].get<std::string>();
  }
  if (j.contains("model.quantiles")) {
    const json& q = j["model.quantiles"];
    rc.quantiles.clear();
    if (q.is_number()) {
      rc.quantiles.push_back(q.get<double>());
    } else if (q.is_array()) {
      for (const auto& e : q) rc.quantiles.push_back(get_number(e, "model.quantiles"));
    } else {
      bad("model.quantiles", "expected a number or a list of numbers");
    }
  }
  if (rc.quantiles.empty()) bad("model.quantiles", "at least one quantile is required");
  for (const double p : rc.quantiles) {
    if (!(p > 0.0 && p < 1.0)) bad("model.quantiles", "every quantile must lie in (0, 1), got " + std::to_string(p));
  }
  if (j.contains("model.mundlak")) rc.mundlak = get_strings(j["model.mundlak"], "model.mundlak");

  if (j.contains("preprocess.demean")) {
    for (const auto& c : get_strings(j["preprocess.demean"], "preprocess.demean")) {
      rc.transforms.push_back({Transform::Kind::demean, c, 1.0});
    }
  }
  if (j.contains("preprocess.scale")) {
    const json& s = j["preprocess.scale"];
    if (!s.is_object()) bad("preprocess.scale", "expected an object {column: factor}");
    for (const auto& [col, factor] : s.items()) {
      const double f = get_number(factor, "preprocess.scale");
      if (!(f != 0.0)) bad("preprocess.scale", "factor for '" + col + "' must be non-zero");
      rc.transforms.push_back({Transform::Kind::scale, col, f});
    }
  }

  SamplerConfig& sc = rc.sampler;
  if (j.contains("sampler.iterations")) sc.iterations = get_count(j["sampler.iterations"], "sampler.iterations");
  if (j.contains("sampler.burn_in")) sc.burn_in = get_count(j["sampler.burn_in"], "sampler.burn_in");
  if (j.contains("sampler.thin")) sc.thin = get_count(j["sampler.thin"], "sampler.thin");
  if (j.contains("sampler.algorithm")) {
    if (!j["sampler.algorithm"].is_string()) bad("sampler.algorithm", "expected 'blocked' or 'nonblocked'");
    sc.algorithm = parse_algorithm(j["sampler.algorithm"].get<std::string>());
  }
  if (j.contains("sampler.store_alpha")) {
    if (!j["sampler.store_alpha"].is_boolean()) bad("sampler.store_alpha", "expected true or false");
    sc.store_alpha = j["sampler.store_alpha"].get<bool>();
  }
  sc.seed = resolve_seed(std::nullopt, doc, "sampler.seed");
  try {
    validate(sc);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("sampler settings: ") + e.what());
  }

  for (const char* key : {"prior.beta_mean", "prior.beta_var", "prior.zeta_mean", "prior.zeta_var",
                          "prior.c1", "prior.d1"}) {
    if (j.contains(key)) rc.prior[key] = j[key];
  }
  return rc;
}

PriorSpec build_prior(const json& keys, Eigen::Index k, Eigen::Index q) {
  PriorSpec prior = default_prior(k, q);
  if (keys.contains("prior.beta_mean")) prior.beta_mean = get_vector(keys["prior.beta_mean"], "prior.beta_mean", k);
  if (keys.contains("prior.beta_var")) prior.beta_cov = get_covariance(keys["prior.beta_var"], "prior.beta_var", k);
  if (keys.contains("prior.zeta_mean")) prior.zeta_mean = get_vector(keys["prior.zeta_mean"], "prior.zeta_mean", q);
  if (keys.contains("prior.zeta_var")) prior.zeta_cov = get_covariance(keys["prior.zeta_var"], "prior.zeta_var", q);
  if (keys.contains("prior.c1")) prior.c1 = get_number(keys["prior.c1"], "prior.c1");
  if (keys.contains("prior.d1")) prior.d1 = get_number(keys["prior.d1"], "prior.d1");
  if (!(prior.c1 > 0.0)) bad("prior.c1", "must be positive");
  if (!(prior.d1 > 0.0)) bad("prior.d1", "must be positive");
  return prior;
}

void prepare_panel(PanelData& data, const std::optional<std::vector<std::string>>& mundlak,
                   const std::vector<Transform>& transforms) {
  for (const Transform& t : transforms) {
    if (t.kind == Transform::Kind::demean) {
      demean_column(data, t.column);
    } else {
      scale_column(data, t.column, t.factor);
    }
  }
  if (mundlak) {
    select_mundlak(data, *mundlak);
  } else {
    data.mundlak_cols = all_non_intercept(data);
    compute_mundlak_means(data);
  }
}

json transforms_to_json(const std::vector<Transform>& transforms) {
  json out = json::array();
  for (const Transform& t : transforms) {
    if (t.kind == Transform::Kind::demean) {
      out.push_back({{"op", "demean"}, {"column", t.column}});
    } else {
      out.push_back({{"op", "scale"}, {"column", t.column}, {"factor", t.factor}});
    }
  }
  return out;
}

std::vector<Transform> transforms_from_json(const json& j) {
  std::vector<Transform> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw ConfigError("preprocess record must be a list");
  for (const auto& e : j) {
    const std::string op = e.at("op").get<std::string>();
    const std::string col = e.at("column").get<std::string>();
    if (op == "demean") {
      out.push_back({Transform::Kind::demean, col, 1.0});
    } else if (op == "scale") {
      out.push_back({Transform::Kind::scale, col, e.at("factor").get<double>()});
    } else {
      throw ConfigError("unknown preprocess op '" + op + "'");
    }
  }
  return out;
}

SimSpec parse_sim_config(const ConfigDocument& doc) {
  const json& j = doc.values();
  for (const auto& [key, value] : j.items()) {
    if (known_keys().count(key) == 0) throw ConfigError("unknown config key '" + key + "'");
  }
  SimSpec spec = default_sim_spec();
  if (j.contains("sim.n")) spec.n = get_count(j["sim.n"], "sim.n");
  if (j.contains("sim.t_min")) spec.t_min = get_count(j["sim.t_min"], "sim.t_min");
  if (j.contains("sim.t_max")) spec.t_max = get_count(j["sim.t_max"], "sim.t_max");
  if (j.contains("sim.p")) spec.p = get_number(j["sim.p"], "sim.p");
  if (!(spec.p > 0.0 && spec.p < 1.0)) bad("sim.p", "quantile must lie in (0, 1), got " + std::to_string(spec.p));
  if (spec.t_min < 1 || spec.t_max < spec.t_min) bad("sim.t_min", "need 1 <= t_min <= t_max");
  if (j.contains("sim.covariates")) {
    const json& cs = j["sim.covariates"];
    if (!cs.is_array()) bad("sim.covariates", "expected a list of covariate objects");
    spec.covariates.clear();
    for (const auto& c : cs) {
      CovariateSpec cov;
      if (!c.is_object() || !c.contains("name") || !c["name"].is_string()) bad("sim.covariates", "each covariate needs a name");
      cov.name = c["name"].get<std::string>();
      const std::string kind = c.value("kind", "uniform");
      if (kind == "uniform") {
        cov.kind = CovariateSpec::Kind::uniform;
      } else if (kind == "bernoulli") {
        cov.kind = CovariateSpec::Kind::bernoulli;
      } else {
        bad("sim.covariates", "kind must be 'uniform' or 'bernoulli'");
      }
      cov.low = c.value("low", -2.0);
      cov.high = c.value("high", 2.0);
      cov.prob = c.value("prob", 0.5);
      cov.time_invariant = c.value("time_invariant", false);
      spec.covariates.push_back(cov);
    }
  }
  if (j.contains("sim.mundlak")) spec.mundlak = get_strings(j["sim.mundlak"], "sim.mundlak");
  const auto k = static_cast<Eigen::Index>(spec.covariates.size() + 1);
  const auto q = static_cast<Eigen::Index>(spec.mundlak.size());
  if (j.contains("sim.beta")) {
    spec.beta_true = get_vector(j["sim.beta"], "sim.beta", k);
  } else if (spec.beta_true.size() != k) {
    bad("sim.beta", "required when the covariate list changes");
  }
  if (j.contains("sim.zeta")) {
    spec.zeta_true = get_vector(j["sim.zeta"], "sim.zeta", q);
  } else if (spec.zeta_true.size() != q) {
    bad("sim.zeta", "required when the Mundlak list changes");
  }
  if (j.contains("sim.sigma_alpha2")) spec.sigma_alpha_sq_true = get_number(j["sim.sigma_alpha2"], "sim.sigma_alpha2");
  spec.seed = resolve_seed(std::nullopt, doc, "sim.seed");
  try {
    validate(spec);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("simulation settings: ") + e.what());
  }
  return spec;
}

json sim_spec_to_json(const SimSpec& spec) {
  json covs = json::array();
  for (const auto& c : spec.covariates) {
    json e = {{"name", c.name}, {"time_invariant", c.time_invariant}};
    if (c.kind == CovariateSpec::Kind::uniform) {
      e["kind"] = "uniform";
      e["low"] = c.low;
      e["high"] = c.high;
    } else {
      e["kind"] = "bernoulli";
      e["prob"] = c.prob;
    }
    covs.push_back(e);
  }
  return {{"n", spec.n},
          {"t_min", spec.t_min},
          {"t_max", spec.t_max},
          {"p", spec.p},
          {"seed", spec.seed},
          {"beta", std::vector<double>(spec.beta_true.data(), spec.beta_true.data() + spec.beta_true.size())},
          {"zeta", std::vector<double>(spec.zeta_true.data(), spec.zeta_true.data() + spec.zeta_true.size())},
          {"sigma_alpha2", spec.sigma_alpha_sq_true},
          {"mundlak", spec.mundlak},
          {"covariates", covs}};
}

std::uint64_t chain_seed(std::uint64_t run_seed, double p) {
  const auto label = static_cast<std::uint64_t>(std::llround(p * 1e6));
  return mix_seed(run_seed ^ mix_seed(label));
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const ConfigDocument& doc,
                           const std::string& key) {
  if (flag) return *flag;
  const json& j = doc.values();
  if (j.contains(key)) {
    const json& v = j[key];
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      bad(key, "seed must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  if (const char* env = std::getenv(kSeedEnvVar); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == nullptr || *end != '\0') {
      throw ConfigError(std::string(kSeedEnvVar) + " must be a non-negative integer");
    }
    return v;
  }
  return kDefaultSeed;
}

}  // namespace bpqr
