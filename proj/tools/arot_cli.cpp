// arot: synthetic data generation, ingestion, feature extraction, model
// training and the two evaluation experiments, wired for reproducible runs.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "arot/csv.hpp"
#include "arot/dataset.hpp"
#include "arot/experiments.hpp"
#include "arot/features.hpp"
#include "arot/ingest.hpp"
#include "arot/manifest.hpp"
#include "arot/modelsel.hpp"
#include "arot/synthgen.hpp"

namespace fs = std::filesystem;
using namespace arot;

namespace {

std::string default_out(const std::string& sub) {
  if (const char* root = std::getenv("AROT_OUT_ROOT"))
    return (fs::path(root) / sub).string();
  return sub + "_out";
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<Variant> parse_variants(const std::string& s) {
  std::vector<Variant> out;
  if (s == "all")
    return {Variant::Categorical, Variant::Numerical, Variant::Mixed};
  for (const auto& name : split_list(s)) {
    Variant v;
    if (!parse_variant(name, v))
      throw CLI::ValidationError("--variants", "unknown variant: " + name);
    out.push_back(v);
  }
  return out;
}

std::vector<Algo> parse_algos(const std::string& s) {
  std::vector<Algo> out;
  if (s == "all") return {Algo::Dt, Algo::Rf, Algo::Gbm};
  for (const auto& name : split_list(s)) {
    Algo a;
    if (!parse_algo(name, a))
      throw CLI::ValidationError("--algos", "unknown algorithm: " + name);
    out.push_back(a);
  }
  return out;
}

GridPreset parse_grid(const std::string& s) {
  if (s == "full") return GridPreset::Full;
  if (s == "reduced") return GridPreset::Reduced;
  throw CLI::ValidationError("--grid", "expected full or reduced");
}

struct InputFiles {
  std::string regions, tracks, weather, runways;
};

InputFiles input_files(const std::string& data_dir) {
  const fs::path d(data_dir);
  return {(d / "regions.csv").string(), (d / "tracks.csv").string(),
          (d / "weather.csv").string(), (d / "runways.csv").string()};
}

// shared pipeline front end: parse + join + features
std::vector<FeatureRow> pipeline_features(const std::string& data_dir,
                                          const FeatureConfig& fcfg,
                                          JoinStats* jstats = nullptr,
                                          FeatureTallies* tallies = nullptr) {
  const InputFiles in = input_files(data_dir);
  RawBundle bundle = parse_bundle(in.regions, in.tracks, in.weather, in.runways);
  std::vector<FlightRecord> flights = join_flights(bundle, jstats);
  return compute_features(flights, bundle.runways, bundle.weather, fcfg,
                          tallies);
}

nlohmann::ordered_json tree_to_json(const TreeModel& t) {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const auto& n : t.nodes) {
    nodes.push_back({{"feature", n.feature},
                     {"threshold", n.threshold},
                     {"left", n.left},
                     {"right", n.right},
                     {"value", n.value},
                     {"n", n.n_samples}});
  }
  return nodes;
}

int run_synth(const std::string& profile, int n, std::uint64_t seed,
              double noise, const std::string& out) {
  AirportProfile p;
  if (fs::exists(profile) && fs::is_regular_file(profile))
    p = load_profile_file(profile);
  else
    p = builtin_profile(profile);
  p.noise_scale = noise;

  SynthSummary s = generate_airport(p, n, seed, out);

  RunManifest m;
  m.subcommand = "synth";
  m.master_seed = seed;
  m.config["profile"] = profile;
  m.config["n"] = std::to_string(n);
  m.config["noise"] = format_double(noise, 3);
  m.config["out"] = out;
  m.write(out);

  std::ofstream prof(fs::path(out) / "profile_used.txt", std::ios::binary);
  prof << profile_to_text(p);

  std::cout << p.icao << ": " << s.n_flights
            << " flights, AROT mean=" << format_double(s.arot_sample_mean_s, 2)
            << " s sigma=" << format_double(s.arot_sample_sigma_s, 2)
            << " s (noise sigma " << format_double(s.noise_sigma_s, 2)
            << " s)\n";
  return 0;
}

int run_ingest(const std::string& data, const std::string& out) {
  const InputFiles in = input_files(data);
  RawBundle bundle = parse_bundle(in.regions, in.tracks, in.weather, in.runways);
  JoinStats js;
  std::vector<FlightRecord> flights = join_flights(bundle, &js);

  fs::create_directories(out);
  {
    std::ofstream f(fs::path(out) / "ingest_summary.csv", std::ios::binary);
    f << "metric,value\n";
    f << "region_rows," << bundle.region_stats.rows_read << "\n";
    f << "region_rows_rejected," << bundle.region_stats.rows_rejected << "\n";
    f << "track_rows," << bundle.track_stats.rows_read << "\n";
    f << "track_rows_rejected," << bundle.track_stats.rows_rejected << "\n";
    f << "weather_rows," << bundle.weather_stats.rows_read << "\n";
    f << "weather_rows_rejected," << bundle.weather_stats.rows_rejected << "\n";
    f << "runway_rows," << bundle.runway_stats.rows_read << "\n";
    f << "distinct_join_keys," << js.distinct_keys << "\n";
    f << "flights_emitted," << flights.size() << "\n";
    f << "dropped_no_runway_occupancy," << js.dropped_no_runway_occupancy << "\n";
    f << "dropped_no_tracks," << js.dropped_no_tracks << "\n";
    f << "dropped_conflicting_fields," << js.dropped_conflicting_fields << "\n";
    f << "dropped_no_matching_arot," << js.dropped_no_matching_arot << "\n";
  }
  RunManifest m;
  m.subcommand = "ingest";
  m.config["data"] = data;
  m.config["out"] = out;
  m.input_digests[in.regions] = to_hex(fnv1a64_file(in.regions));
  m.input_digests[in.tracks] = to_hex(fnv1a64_file(in.tracks));
  m.input_digests[in.weather] = to_hex(fnv1a64_file(in.weather));
  m.input_digests[in.runways] = to_hex(fnv1a64_file(in.runways));
  m.write(out);

  std::cout << "joined " << flights.size() << " of " << js.distinct_keys
            << " flight keys\n";
  return 0;
}

int run_features(const std::string& data, double faf_nm,
                 const std::string& out) {
  FeatureConfig fcfg;
  fcfg.faf_distance_nm = faf_nm;
  JoinStats js;
  FeatureTallies tallies;
  std::vector<FeatureRow> rows = pipeline_features(data, fcfg, &js, &tallies);

  fs::create_directories(out);
  write_features_csv((fs::path(out) / "features.csv").string(), rows);
  write_snapshots_csv((fs::path(out) / "snapshots.csv").string(), rows);
  write_prediction_points_csv(
      (fs::path(out) / "prediction_points.csv").string(),
      prediction_point_summary(rows));

  const InputFiles in = input_files(data);
  RunManifest m;
  m.subcommand = "features";
  m.config["data"] = data;
  m.config["faf-nm"] = format_double(faf_nm, 2);
  m.config["out"] = out;
  m.input_digests[in.regions] = to_hex(fnv1a64_file(in.regions));
  m.input_digests[in.tracks] = to_hex(fnv1a64_file(in.tracks));
  m.input_digests[in.weather] = to_hex(fnv1a64_file(in.weather));
  m.input_digests[in.runways] = to_hex(fnv1a64_file(in.runways));
  m.write(out);

  std::cout << "features for " << rows.size() << " flights ("
            << tallies.no_prediction_point << " without prediction point, "
            << tallies.no_weather << " without weather, "
            << tallies.no_post_landing_samples << " without taxi samples)\n";
  return 0;
}

int run_train(const std::string& features_file, const std::string& algo_s,
              const std::string& variant_s, const std::string& grid_s,
              std::uint64_t seed, int k_inner, const std::string& out) {
  Algo algo;
  Variant variant;
  if (!parse_algo(algo_s, algo))
    throw CLI::ValidationError("--algo", "unknown algorithm: " + algo_s);
  if (!parse_variant(variant_s, variant))
    throw CLI::ValidationError("--variant", "unknown variant: " + variant_s);

  std::vector<FeatureRow> rows = read_features_csv(features_file);
  Dataset ds = build_dataset(rows, variant);
  ParamGrid grid = make_grid(algo, parse_grid(grid_s));

  GridSearchResult gs = grid_search_cv(ds, grid, k_inner, seed);
  Encoder enc = Encoder::fit(ds);
  Eigen::MatrixXd X = enc.transform(ds);
  FittedModel model = fit_model(X, ds.target, gs.best_params,
                                derive_seed(seed, 99));
  const double train_mae = mean_absolute_error(ds.target, model.predict(X));

  fs::create_directories(out);
  nlohmann::ordered_json j;
  j["algo"] = algo_name(algo);
  j["variant"] = variant_name(variant);
  j["params"] = gs.best_params.to_string();
  j["cv_mae_s"] = gs.mean_mae[gs.best_index];
  j["train_mae_s"] = train_mae;
  j["n_rows"] = ds.row_count();
  if (const auto* t = std::get_if<TreeModel>(&model.model)) {
    j["tree"] = tree_to_json(*t);
  } else if (const auto* f = std::get_if<ForestModel>(&model.model)) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& t2 : f->trees) arr.push_back(tree_to_json(t2));
    j["trees"] = arr;
  } else if (const auto* g = std::get_if<GbmModel>(&model.model)) {
    j["f0"] = g->f0;
    j["learning_rate"] = g->params.learning_rate;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& t2 : g->stages) arr.push_back(tree_to_json(t2));
    j["stages"] = arr;
  }
  {
    std::ofstream f(fs::path(out) / "model.json", std::ios::binary);
    f << j.dump(2) << "\n";
  }

  RunManifest m;
  m.subcommand = "train";
  m.master_seed = seed;
  m.config["features"] = features_file;
  m.config["algo"] = algo_s;
  m.config["variant"] = variant_s;
  m.config["grid"] = grid_s;
  m.config["k-inner"] = std::to_string(k_inner);
  m.config["out"] = out;
  m.input_digests[features_file] = to_hex(fnv1a64_file(features_file));
  m.write(out);

  std::cout << "selected " << gs.best_params.to_string()
            << " (cv mae " << format_double(gs.mean_mae[gs.best_index], 3)
            << " s, train mae " << format_double(train_mae, 3) << " s)\n";
  return 0;
}

void add_input_digests(RunManifest& m, const ExperimentConfig& cfg) {
  for (const auto& ap : cfg.airports) {
    std::string lower = ap;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    const std::string f =
        (fs::path(cfg.data_root) / lower / "features.csv").string();
    m.input_digests[f] = to_hex(fnv1a64_file(f));
  }
}

int run_eval_unseen(ExperimentConfig cfg, const std::string& grid_s) {
  UnseenReport rep = run_unseen_experiment(cfg);

  RunManifest m;
  m.subcommand = "eval-unseen";
  m.master_seed = cfg.master_seed;
  m.config["airports"] = [&] {
    std::string s;
    for (const auto& a : cfg.airports) s += (s.empty() ? "" : ",") + a;
    return s;
  }();
  m.config["grid"] = grid_s;
  m.config["repeats"] = std::to_string(cfg.nested.repeats);
  m.config["k-outer"] = std::to_string(cfg.nested.k_outer);
  m.config["k-inner"] = std::to_string(cfg.nested.k_inner);
  m.config["out"] = cfg.out_dir;
  add_input_digests(m, cfg);
  m.write(cfg.out_dir);

  for (const auto& c : rep.cells) {
    std::cout << c.airport << ' ' << algo_name(c.algo) << ' '
              << variant_name(c.variant) << ": mae "
              << format_double(c.report.mae_mean(), 3) << " +- "
              << format_double(c.report.mae_stddev(), 3)
              << " s, uncertainty reduction "
              << format_double(c.metrics.uncertainty_reduction, 3) << "\n";
  }
  return 0;
}

int run_eval_generalized(ExperimentConfig cfg, const std::string& mode,
                         const std::string& grid_s) {
  const bool one = mode == "one-source" || mode == "both";
  const bool two = mode == "two-source" || mode == "both";
  if (!one && !two)
    throw CLI::ValidationError("--mode",
                               "expected one-source, two-source or both");
  GeneralizedReport rep = run_generalized_experiment(cfg, one, two);

  RunManifest m;
  m.subcommand = "eval-generalized";
  m.master_seed = cfg.master_seed;
  m.config["mode"] = mode;
  m.config["grid"] = grid_s;
  m.config["repeats"] = std::to_string(cfg.repeats);
  m.config["out"] = cfg.out_dir;
  add_input_digests(m, cfg);
  m.write(cfg.out_dir);

  std::size_t done = 0, skipped = 0;
  for (const auto& c : rep.cells) (c.skipped ? skipped : done)++;
  std::cout << done << " cells evaluated, " << skipped << " skipped\n";
  return 0;
}

int run_report(const std::string& data_root,
               const std::vector<std::string>& airports,
               const std::string& out) {
  std::vector<FeatureRow> all;
  RunManifest m;
  m.subcommand = "report";
  for (const auto& ap : airports) {
    std::string lower = ap;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    const std::string f =
        (fs::path(data_root) / lower / "snapshots.csv").string();
    auto rows = read_snapshots_csv(f);
    all.insert(all.end(), rows.begin(), rows.end());
    m.input_digests[f] = to_hex(fnv1a64_file(f));
  }
  fs::create_directories(out);
  write_prediction_points_csv((fs::path(out) / "prediction_points.csv").string(),
                              prediction_point_summary(all));
  m.config["out"] = out;
  m.write(out);
  std::cout << "prediction point summary for " << airports.size()
            << " airports written\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arrival runway occupancy time prediction workbench"};
  app.require_subcommand(1);
  // let --seed / --jobs appear after the subcommand name
  app.fallthrough();

  std::uint64_t seed = 7;
  int jobs = 1;
  app.add_option("--seed", seed, "master seed")->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads")->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "generate synthetic airport data");
  std::string sy_profile = "dca", sy_out;
  int sy_n = 1232;
  double sy_noise = 1.0;
  synth->add_option("--profile", sy_profile,
                    "builtin profile (dca|mia|phx) or profile file path");
  synth->add_option("--n", sy_n, "number of flights");
  synth->add_option("--noise", sy_noise, "AROT noise scale (0 disables)");
  synth->add_option("--out", sy_out, "output directory");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "parse and join the input CSVs");
  std::string in_data, in_out;
  ingest->add_option("--data", in_data, "directory with the four input CSVs")
      ->required();
  ingest->add_option("--out", in_out, "output directory");

  // features
  auto* features = app.add_subcommand("features", "compute model features");
  std::string fe_data, fe_out;
  double fe_faf = 5.0;
  features->add_option("--data", fe_data, "directory with the four input CSVs")
      ->required();
  features->add_option("--faf-nm", fe_faf, "prediction ring distance (NM)");
  features->add_option("--out", fe_out, "output directory");

  // train
  auto* train = app.add_subcommand("train", "grid-search and fit one model");
  std::string tr_features, tr_algo = "gbm", tr_variant = "mixed",
              tr_grid = "reduced", tr_out;
  int tr_k_inner = 3;
  train->add_option("--features", tr_features, "features.csv path")->required();
  train->add_option("--algo", tr_algo, "dt|rf|gbm");
  train->add_option("--variant", tr_variant, "categorical|numerical|mixed");
  train->add_option("--grid", tr_grid, "full|reduced");
  train->add_option("--k-inner", tr_k_inner, "inner CV folds");
  train->add_option("--out", tr_out, "output directory");

  // eval-unseen
  auto* unseen = app.add_subcommand("eval-unseen",
                                    "nested-CV unseen-data experiment");
  std::string un_airports = "DCA,MIA,PHX", un_data = ".",
              un_variants = "all", un_algos = "all", un_grid = "reduced",
              un_out;
  int un_repeats = 3, un_k_outer = 5, un_k_inner = 3;
  bool un_no_plots = false;
  unseen->add_option("--airports", un_airports, "comma-separated airports");
  unseen->add_option("--data", un_data,
                     "root directory with <airport>/features.csv");
  unseen->add_option("--variants", un_variants, "all or comma list");
  unseen->add_option("--algos", un_algos, "all or comma list");
  unseen->add_option("--grid", un_grid, "full|reduced");
  unseen->add_option("--repeats", un_repeats, "nested CV repeats");
  unseen->add_option("--k-outer", un_k_outer, "outer folds");
  unseen->add_option("--k-inner", un_k_inner, "inner folds");
  unseen->add_flag("--no-plots", un_no_plots, "skip SVG output");
  unseen->add_option("--out", un_out, "output directory");

  // eval-generalized
  auto* gen = app.add_subcommand("eval-generalized",
                                 "source-to-target transfer experiment");
  std::string ge_airports = "DCA,MIA,PHX", ge_data = ".", ge_algos = "rf,gbm",
              ge_alphas = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9",
              ge_grid = "reduced", ge_mode = "both", ge_out;
  int ge_repeats = 9, ge_k_inner = 3;
  bool ge_no_plots = false;
  gen->add_option("--airports", ge_airports, "comma-separated airports");
  gen->add_option("--data", ge_data,
                  "root directory with <airport>/features.csv");
  gen->add_option("--algos", ge_algos, "algorithms for the two-source runs");
  gen->add_option("--alphas", ge_alphas, "target data fractions");
  gen->add_option("--repeats", ge_repeats, "repeats per alpha");
  gen->add_option("--grid", ge_grid, "full|reduced");
  gen->add_option("--k-inner", ge_k_inner, "inner CV folds");
  gen->add_option("--mode", ge_mode, "one-source|two-source|both");
  gen->add_flag("--no-plots", ge_no_plots, "skip SVG output");
  gen->add_option("--out", ge_out, "output directory");

  // report
  auto* report = app.add_subcommand("report", "prediction point summary");
  std::string re_airports = "DCA,MIA,PHX", re_data = ".", re_out;
  report->add_option("--airports", re_airports, "comma-separated airports");
  report->add_option("--data", re_data,
                     "root directory with <airport>/snapshots.csv");
  report->add_option("--out", re_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      return run_synth(sy_profile, sy_n, seed, sy_noise,
                       sy_out.empty() ? default_out("synth") : sy_out);
    }
    if (ingest->parsed()) {
      return run_ingest(in_data,
                        in_out.empty() ? default_out("ingest") : in_out);
    }
    if (features->parsed()) {
      return run_features(fe_data, fe_faf,
                          fe_out.empty() ? default_out("features") : fe_out);
    }
    if (train->parsed()) {
      return run_train(tr_features, tr_algo, tr_variant, tr_grid, seed,
                       tr_k_inner,
                       tr_out.empty() ? default_out("train") : tr_out);
    }
    if (unseen->parsed()) {
      ExperimentConfig cfg;
      cfg.airports = split_list(un_airports);
      cfg.data_root = un_data;
      cfg.variants = parse_variants(un_variants);
      cfg.algos = parse_algos(un_algos);
      cfg.grid = parse_grid(un_grid);
      cfg.nested = {un_k_outer, un_k_inner, un_repeats};
      cfg.master_seed = seed;
      cfg.jobs = jobs;
      cfg.write_plots = !un_no_plots;
      cfg.out_dir = un_out.empty() ? default_out("eval_unseen") : un_out;
      return run_eval_unseen(cfg, un_grid);
    }
    if (gen->parsed()) {
      ExperimentConfig cfg;
      cfg.airports = split_list(ge_airports);
      cfg.data_root = ge_data;
      cfg.algos = parse_algos(ge_algos);
      for (const auto& a : split_list(ge_alphas))
        cfg.alphas.push_back(std::stod(a));
      cfg.repeats = ge_repeats;
      cfg.grid = parse_grid(ge_grid);
      cfg.nested.k_inner = ge_k_inner;
      cfg.master_seed = seed;
      cfg.jobs = jobs;
      cfg.write_plots = !ge_no_plots;
      cfg.out_dir = ge_out.empty() ? default_out("eval_generalized") : ge_out;
      return run_eval_generalized(cfg, ge_mode, ge_grid);
    }
    if (report->parsed()) {
      return run_report(re_data, split_list(re_airports),
                        re_out.empty() ? default_out("report") : re_out);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
