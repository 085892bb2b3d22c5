#include "bpqr/commands.hpp"

#include <fstream>

#include "bpqr/effects.hpp"
#include "bpqr/errors.hpp"
#include "bpqr/io.hpp"
#include "bpqr/sampler.hpp"
#include "bpqr/simgen.hpp"

namespace bpqr {

namespace {

using nlohmann::json;

json interval_block(const EffectSummary& s) {
  return {{"mean", s.mean}, {"std", s.std}, {"hpdi_lo", s.hpdi.lower}, {"hpdi_hi", s.hpdi.upper}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

}  // namespace

void cmd_simulate(const ConfigDocument& doc, const std::filesystem::path& out_dir) {
  const SimSpec spec = parse_sim_config(doc);
  const SimOutput sim = generate(spec);
  write_panel_csv(out_dir / "data.csv", sim.data);
  const json truth = {{"seed", spec.seed},
                      {"simulation", sim_spec_to_json(spec)},
                      {"n_individuals", sim.data.num_individuals()},
                      {"n_observations", sim.data.num_observations()},
                      {"zeros", sim.zeros},
                      {"ones", sim.ones}};
  write_text_file(out_dir / "truth.json", truth.dump(2) + "\n");
}

std::vector<std::filesystem::path> cmd_fit(const ConfigDocument& doc) {
  const RunConfig rc = parse_run_config(doc);
  if (rc.data_path.empty()) throw ConfigError("config key 'data': a data file is required");
  PanelData data = ingest_panel_csv(rc.data_path);
  prepare_panel(data, rc.mundlak, rc.transforms);
  const PriorSpec prior = build_prior(rc.prior, static_cast<Eigen::Index>(data.num_covariates()),
                                      static_cast<Eigen::Index>(data.num_mundlak()));

  std::vector<std::string> mundlak_names;
  for (const std::size_t c : data.mundlak_cols) mundlak_names.push_back(data.column_names[c]);

  std::vector<std::filesystem::path> outputs;
  for (const double p : rc.quantiles) {
    const ModelSpec spec = make_model_spec(p, prior);
    SamplerConfig sc = rc.sampler;
    sc.seed = chain_seed(rc.sampler.seed, p);
    RngStream rng(sc.seed);
    const PosteriorDraws draws = run_chain(data, spec, sc, rng);

    const std::string tag = format_quantile(p);
    const auto draws_path = rc.out_dir / ("draws_" + tag + ".csv");
    write_draws_csv(draws_path, draws);
    const json meta = {{"p", p},
                       {"seed", rc.sampler.seed},
                       {"chain_seed", sc.seed},
                       {"algorithm", to_string(sc.algorithm)},
                       {"wall_seconds", draws.wall_seconds},
                       {"iterations", sc.iterations},
                       {"burn_in", sc.burn_in},
                       {"thin", sc.thin},
                       {"kept_draws", draws.size()},
                       {"store_alpha", sc.store_alpha},
                       {"data", rc.data_path.string()},
                       {"n_individuals", data.num_individuals()},
                       {"n_observations", data.num_observations()},
                       {"column_names", data.column_names},
                       {"mundlak", mundlak_names},
                       {"preprocess", transforms_to_json(rc.transforms)},
                       {"config", doc.values()}};
    write_text_file(rc.out_dir / ("meta_" + tag + ".json"), meta.dump(2) + "\n");
    outputs.push_back(draws_path);
  }
  return outputs;
}

ChainSummary cmd_diagnose(const std::filesystem::path& draws_path,
                          const std::filesystem::path& out_dir) {
  const PosteriorDraws draws = read_draws_csv(draws_path, 0.5);
  const ChainSummary summary = summarize(draws);
  write_summary_csv(out_dir / "summary.csv", summary);
  write_summary_json(out_dir / "summary.json", summary);
  return summary;
}

std::filesystem::path meta_path_for(const std::filesystem::path& draws_path) {
  std::string stem = draws_path.stem().string();
  if (stem.rfind("draws_", 0) == 0) stem = stem.substr(6);
  return draws_path.parent_path() / ("meta_" + stem + ".json");
}

json cmd_effects(const EffectsRequest& request) {
  if (request.draws.empty()) throw ConfigError("at least one draws file is required");
  if (request.covariate.empty()) throw ConfigError("a contrast covariate is required");

  json blocks = json::array();
  for (const auto& draws_path : request.draws) {
    double p = 0.0;
    std::vector<Transform> transforms;
    const auto meta_path = meta_path_for(draws_path);
    if (std::filesystem::exists(meta_path)) {
      const json meta = read_json_file(meta_path);
      p = meta.at("p").get<double>();
      if (meta.contains("preprocess")) transforms = transforms_from_json(meta["preprocess"]);
    } else if (request.quantile) {
      p = *request.quantile;
    } else {
      throw ConfigError("no meta file next to '" + draws_path.string() +
                        "'; pass the quantile explicitly");
    }
    PanelData data = ingest_panel_csv(request.data);
    prepare_panel(data, std::nullopt, transforms);
    const std::size_t column = data.column_index(request.covariate);
    if (column == 0) throw ConfigError("the intercept cannot be a contrast covariate");

    const PosteriorDraws draws = read_draws_csv(draws_path, p);
    EffectOptions options;
    options.subsample_individuals = request.subsample;
    const EffectTable table = compute_effects(draws, data, {column, request.from, request.to}, options);
    blocks.push_back({{"p", p},
                      {"draws_file", draws_path.string()},
                      {"n_draws", draws.size()},
                      {"ame", interval_block(table.ame.summary)},
                      {"rr", interval_block(table.rr.summary)},
                      {"or", interval_block(table.odds_ratio.summary)}});
  }
  const json out = {{"covariate", request.covariate},
                    {"from", request.from},
                    {"to", request.to},
                    {"blocks", blocks}};
  write_text_file(request.out_dir / "effects.json", out.dump(2) + "\n");
  return out;
}

}  // namespace bpqr
