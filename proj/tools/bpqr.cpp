// bpqr: Bayesian panel quantile regression for binary outcomes with
// correlated random effects.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "bpqr/commands.hpp"
#include "bpqr/errors.hpp"
#include "bpqr/io.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitOther = 1;

bpqr::ConfigDocument load_config(const std::string& path) {
  return path.empty() ? bpqr::ConfigDocument{} : bpqr::ConfigDocument::from_file(path);
}

void apply_sets(bpqr::ConfigDocument& doc, const std::vector<std::string>& sets) {
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw bpqr::ConfigError("--set expects key=value, got '" + kv + "'");
    doc.set_from_text(kv.substr(0, eq), kv.substr(eq + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian panel quantile regression for binary outcomes"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic panel (data.csv, truth.json)");
  std::string sim_config;
  std::string sim_out = ".";
  std::optional<std::size_t> sim_n;
  std::optional<double> sim_p;
  std::optional<std::uint64_t> sim_seed;
  std::vector<std::string> sim_sets;
  sim->add_option("--config", sim_config, "JSON configuration file");
  sim->add_option("--out", sim_out, "Output directory");
  sim->add_option("--n", sim_n, "Number of individuals");
  sim->add_option("--quantile", sim_p, "Quantile of the AL error");
  sim->add_option("--seed", sim_seed, "Random seed");
  sim->add_option("--set", sim_sets, "Override a config key (key=value)");

  // fit
  auto* fit = app.add_subcommand("fit", "Run the Gibbs sampler (draws_<p>.csv, meta_<p>.json)");
  std::string fit_config;
  std::optional<std::string> fit_data, fit_out, fit_algorithm;
  std::vector<double> fit_quantiles;
  std::optional<std::size_t> fit_iterations, fit_burn_in, fit_thin;
  std::optional<std::uint64_t> fit_seed;
  std::vector<std::string> fit_mundlak, fit_demean, fit_sets;
  std::vector<std::pair<std::string, double>> fit_scale;
  bool fit_no_alpha = false;
  fit->add_option("--config", fit_config, "JSON configuration file");
  fit->add_option("--data", fit_data, "Panel CSV (id,t,y,covariates...)");
  fit->add_option("--out", fit_out, "Output directory");
  fit->add_option("--quantile", fit_quantiles, "Quantile (repeatable)");
  fit->add_option("--algorithm", fit_algorithm, "blocked | nonblocked");
  fit->add_option("--iterations", fit_iterations, "Total MCMC iterations");
  fit->add_option("--burn-in", fit_burn_in, "Discarded initial iterations");
  fit->add_option("--thin", fit_thin, "Thinning factor");
  fit->add_option("--seed", fit_seed, "Random seed");
  fit->add_option("--mundlak", fit_mundlak, "Covariate entering the Mundlak means (repeatable)");
  fit->add_option("--demean", fit_demean, "Demean a covariate before fitting (repeatable)");
  fit->add_option("--scale", fit_scale, "Divide a covariate by a factor: --scale <col> <factor>");
  fit->add_flag("--no-alpha", fit_no_alpha, "Do not store alpha draws");
  fit->add_option("--set", fit_sets, "Override a config key (key=value)");

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "Summarize a draws file (summary.csv, summary.json)");
  std::string diag_draws;
  std::optional<std::string> diag_out;
  diag->add_option("--draws", diag_draws, "draws_<p>.csv file")->required();
  diag->add_option("--out", diag_out, "Output directory (default: next to the draws file)");

  // effects
  auto* eff = app.add_subcommand("effects", "Average marginal effect, relative risk, odds ratio");
  bpqr::EffectsRequest req;
  std::vector<std::string> eff_draws;
  std::string eff_data, eff_out = ".";
  std::optional<double> eff_quantile;
  std::optional<std::size_t> eff_subsample;
  eff->add_option("--draws", eff_draws, "draws_<p>.csv file (repeatable)")->required();
  eff->add_option("--data", eff_data, "Panel CSV used for the fit")->required();
  eff->add_option("--covariate", req.covariate, "Covariate to move")->required();
  eff->add_option("--from", req.from, "Baseline value a")->required();
  eff->add_option("--to", req.to, "Counterfactual value b")->required();
  eff->add_option("--quantile", eff_quantile, "Quantile, when no meta file is present");
  eff->add_option("--subsample", eff_subsample, "Use only this many individuals");
  eff->add_option("--out", eff_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sim) {
      bpqr::ConfigDocument doc = load_config(sim_config);
      if (sim_n) doc.set("sim.n", *sim_n);
      if (sim_p) doc.set("sim.p", *sim_p);
      if (sim_seed) doc.set("sim.seed", *sim_seed);
      apply_sets(doc, sim_sets);
      bpqr::cmd_simulate(doc, sim_out);
    } else if (*fit) {
      bpqr::ConfigDocument doc = load_config(fit_config);
      if (fit_data) doc.set("data", *fit_data);
      if (fit_out) doc.set("out", *fit_out);
      if (!fit_quantiles.empty()) doc.set("model.quantiles", fit_quantiles);
      if (fit_algorithm) {
        bpqr::parse_algorithm(*fit_algorithm);
        doc.set("sampler.algorithm", *fit_algorithm);
      }
      if (fit_iterations) doc.set("sampler.iterations", *fit_iterations);
      if (fit_burn_in) doc.set("sampler.burn_in", *fit_burn_in);
      if (fit_thin) doc.set("sampler.thin", *fit_thin);
      if (fit_seed) doc.set("sampler.seed", *fit_seed);
      if (!fit_mundlak.empty()) doc.set("model.mundlak", fit_mundlak);
      if (!fit_demean.empty()) doc.set("preprocess.demean", fit_demean);
      if (!fit_scale.empty()) {
        nlohmann::json scale = nlohmann::json::object();
        for (const auto& [col, factor] : fit_scale) scale[col] = factor;
        doc.set("preprocess.scale", scale);
      }
      if (fit_no_alpha) doc.set("sampler.store_alpha", false);
      apply_sets(doc, fit_sets);
      for (const auto& path : bpqr::cmd_fit(doc)) std::cout << path.string() << '\n';
    } else if (*diag) {
      const std::filesystem::path draws = diag_draws;
      bpqr::cmd_diagnose(draws, diag_out ? std::filesystem::path(*diag_out) : draws.parent_path());
    } else if (*eff) {
      for (const auto& d : eff_draws) req.draws.emplace_back(d);
      req.data = eff_data;
      req.quantile = eff_quantile;
      req.subsample = eff_subsample;
      req.out_dir = eff_out;
      bpqr::cmd_effects(req);
    }
  } catch (const bpqr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const bpqr::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const bpqr::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const bpqr::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
  return 0;
}
