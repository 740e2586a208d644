#include "arot/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include "arot/csv.hpp"
#include "arot/jobs.hpp"
#include "arot/svg.hpp"

namespace arot {
namespace {

std::string features_path(const ExperimentConfig& cfg,
                          const std::string& airport) {
  std::string lower = airport;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return (std::filesystem::path(cfg.data_root) / lower / "features.csv")
      .string();
}

std::pair<double, double> mean_sigma(const Eigen::VectorXd& v) {
  const double m = v.mean();
  if (v.size() < 2) return {m, 0.0};
  const double var = (v.array() - m).square().sum() / (v.size() - 1);
  return {m, std::sqrt(var)};
}

const char* mode_name(SourceMode m) {
  return m == SourceMode::OneSource ? "one-source" : "two-source";
}

std::string join_names(const std::vector<std::string>& v, char sep = '+') {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

UnseenReport run_unseen_experiment(const ExperimentConfig& cfg) {
  if (cfg.airports.empty() || cfg.variants.empty() || cfg.algos.empty())
    throw std::invalid_argument("run_unseen_experiment: empty configuration");

  // load features per airport up front; missing data is fatal
  std::map<std::string, std::vector<FeatureRow>> features;
  for (const auto& ap : cfg.airports)
    features[ap] = read_features_csv(features_path(cfg, ap));

  struct Cell {
    std::size_t airport_idx, variant_idx, algo_idx;
  };
  std::vector<Cell> cells;
  for (std::size_t a = 0; a < cfg.airports.size(); ++a)
    for (std::size_t v = 0; v < cfg.variants.size(); ++v)
      for (std::size_t g = 0; g < cfg.algos.size(); ++g)
        cells.push_back({a, v, g});

  UnseenReport rep;
  rep.cells.resize(cells.size());

  parallel_for(cells.size(), cfg.jobs, [&](std::size_t i) {
    const Cell& c = cells[i];
    const std::string& airport = cfg.airports[c.airport_idx];
    const Variant variant = cfg.variants[c.variant_idx];
    const Algo algo = cfg.algos[c.algo_idx];

    Dataset ds = build_dataset(features.at(airport), variant);
    ParamGrid grid = make_grid(algo, cfg.grid);
    // seed derives from the cell identity, not the schedule
    std::uint64_t cell_seed = derive_seed(
        cfg.master_seed,
        (c.airport_idx * 16 + c.variant_idx) * 16 + c.algo_idx);

    UnseenCell out;
    out.airport = airport;
    out.variant = variant;
    out.algo = algo;
    out.report = nested_cv(ds, grid, cfg.nested, cell_seed);
    auto [m, s] = mean_sigma(ds.target);
    out.arot_mean_s = m;
    out.arot_sigma_s = s;
    out.metrics = EvalMetrics{out.report.mae_mean(), s,
                              1.0 - out.report.mae_mean() / s};
    rep.cells[i] = std::move(out);
  });

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    const auto path = [&](const std::string& name) {
      return (std::filesystem::path(cfg.out_dir) / name).string();
    };
    write_unseen_report_csv(path("unseen_report.csv"), rep);
    write_unseen_summary_csv(path("unseen_summary.csv"), rep);
    if (cfg.write_plots) {
      for (const auto& ap : cfg.airports) {
        std::vector<BoxSeries> series;
        for (const auto& cell : rep.cells) {
          if (cell.airport != ap) continue;
          BoxSeries s;
          s.label = std::string(algo_name(cell.algo)) + " / " +
                    variant_name(cell.variant);
          for (const auto& e : cell.report.entries)
            s.values.push_back(e.test_mae_s);
          if (cell.variant == Variant::Numerical) s.color = "#4878a8";
          else if (cell.variant == Variant::Categorical) s.color = "#d1605e";
          else s.color = "#6aa56a";
          series.push_back(std::move(s));
        }
        write_box_plot_svg(path("unseen_" + ap + ".svg"),
                           ap + " prediction error by model",
                           "mean absolute error (s)", series);
      }
    }
  }
  return rep;
}

GeneralizedReport run_generalized_experiment(const ExperimentConfig& cfg,
                                             bool one_source,
                                             bool two_source) {
  if (cfg.airports.size() < 2)
    throw std::invalid_argument(
        "run_generalized_experiment: need at least two airports");

  std::map<std::string, Dataset> numerical;
  for (const auto& ap : cfg.airports)
    numerical.emplace(
        ap, build_dataset(read_features_csv(features_path(cfg, ap)),
                          Variant::Numerical));

  struct Case {
    SourceMode mode;
    std::vector<std::string> sources;
    std::string target;
    Algo algo;
  };
  std::vector<Case> cases;
  if (one_source) {
    // one-source transfer is defined for the random forest only
    for (const auto& src : cfg.airports)
      for (const auto& tgt : cfg.airports)
        if (src != tgt) cases.push_back({SourceMode::OneSource, {src}, tgt, Algo::Rf});
  }
  if (two_source && cfg.airports.size() >= 3) {
    for (const auto& tgt : cfg.airports) {
      std::vector<std::string> srcs;
      for (const auto& ap : cfg.airports)
        if (ap != tgt) srcs.push_back(ap);
      for (Algo algo : cfg.algos)
        cases.push_back({SourceMode::TwoSource, srcs, tgt, algo});
    }
  }

  struct Task {
    std::size_t case_idx;
    std::size_t alpha_idx;
    int repeat;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < cases.size(); ++c)
    for (std::size_t a = 0; a < cfg.alphas.size(); ++a)
      for (int r = 0; r < cfg.repeats; ++r) tasks.push_back({c, a, r});

  GeneralizedReport rep;
  rep.cells.resize(tasks.size());

  parallel_for(tasks.size(), cfg.jobs, [&](std::size_t ti) {
    const Task& t = tasks[ti];
    const Case& cs = cases[t.case_idx];
    const double alpha = cfg.alphas[t.alpha_idx];
    const Dataset& target_ds = numerical.at(cs.target);
    const int n = static_cast<int>(target_ds.row_count());

    GeneralizedCell cell;
    cell.mode = cs.mode;
    cell.sources = cs.sources;
    cell.target = cs.target;
    cell.algo = cs.algo;
    cell.alpha = alpha;
    cell.repeat = t.repeat;

    // one shuffle per (case, repeat); the alpha share is a prefix so the
    // alpha sweep is nested
    const std::uint64_t shuffle_seed = derive_seed(
        derive_seed(cfg.master_seed, 77 + t.case_idx), static_cast<std::uint64_t>(t.repeat));
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    Rng(shuffle_seed).shuffle(order);

    const int k = static_cast<int>(std::lround(alpha * n));
    if (k < cfg.nested.k_inner || n - k < 1) {
      cell.skipped = true;
      rep.cells[ti] = std::move(cell);
      return;
    }

    std::vector<int> head(order.begin(), order.begin() + k);
    std::vector<int> tail(order.begin() + k, order.end());
    std::sort(head.begin(), head.end());
    std::sort(tail.begin(), tail.end());

    Dataset target_head = target_ds.subset(head);
    Dataset test = target_ds.subset(tail);
    Dataset train_gen = target_head;
    for (const auto& src : cs.sources)
      train_gen = Dataset::concat(train_gen, numerical.at(src));

    const ParamGrid grid = make_grid(cs.algo, cfg.grid);
    const std::uint64_t cell_seed = derive_seed(
        derive_seed(shuffle_seed, 1 + t.alpha_idx), 0);

    // both models get the same tuning budget and identical test rows
    auto fit_and_eval = [&](const Dataset& train, std::uint64_t seed) {
      GridSearchResult gs =
          grid_search_cv(train, grid, cfg.nested.k_inner, seed);
      Encoder enc = Encoder::fit(train);
      FittedModel m = fit_model(enc.transform(train), train.target,
                                gs.best_params, derive_seed(seed, 99));
      return mean_absolute_error(test.target, m.predict(enc.transform(test)));
    };
    cell.mae_generalized_s = fit_and_eval(train_gen, derive_seed(cell_seed, 1));
    cell.mae_normal_s = fit_and_eval(target_head, derive_seed(cell_seed, 2));
    cell.n_test = static_cast<int>(tail.size());
    rep.cells[ti] = std::move(cell);
  });

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_generalized_report_csv(
        (std::filesystem::path(cfg.out_dir) / "generalized_report.csv").string(),
        rep);
    if (cfg.write_plots) {
      for (std::size_t c = 0; c < cases.size(); ++c) {
        const Case& cs = cases[c];
        std::vector<BoxSeries> series;
        for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
          BoxSeries gen, norm;
          gen.label = "a=" + format_double(cfg.alphas[a], 1) + " generalized";
          gen.color = "#4878a8";
          norm.label = "a=" + format_double(cfg.alphas[a], 1) + " normal";
          norm.color = "#d1605e";
          for (const auto& cell : rep.cells) {
            if (cell.skipped || cell.target != cs.target ||
                cell.mode != cs.mode || cell.algo != cs.algo ||
                cell.sources != cs.sources ||
                std::fabs(cell.alpha - cfg.alphas[a]) > 1e-9)
              continue;
            gen.values.push_back(cell.mae_generalized_s);
            norm.values.push_back(cell.mae_normal_s);
          }
          if (!gen.values.empty()) {
            series.push_back(std::move(gen));
            series.push_back(std::move(norm));
          }
        }
        const std::string name = std::string("generalized_") +
                                 mode_name(cs.mode) + "_" +
                                 join_names(cs.sources, '-') + "_to_" +
                                 cs.target + "_" + algo_name(cs.algo) + ".svg";
        write_box_plot_svg(
            (std::filesystem::path(cfg.out_dir) / name).string(),
            join_names(cs.sources) + " to " + cs.target + " (" +
                algo_name(cs.algo) + ")",
            "mean absolute error (s)", series);
      }
    }
  }
  return rep;
}

std::vector<PredictionPointRow> prediction_point_summary(
    const std::vector<FeatureRow>& rows) {
  std::map<std::pair<std::string, std::string>, std::vector<const FeatureRow*>>
      groups;
  for (const auto& r : rows)
    groups[{r.airport, r.runway_assigned}].push_back(&r);

  std::vector<PredictionPointRow> out;
  for (const auto& [key, members] : groups) {
    PredictionPointRow row;
    row.airport = key.first;
    row.runway = key.second;
    row.n_flights = static_cast<int>(members.size());
    double sd = 0, sv = 0, st = 0;
    for (const FeatureRow* m : members) {
      sd += m->distance_to_threshold_nm;
      sv += m->snapshot_speed_kt;
      st += m->distance_to_threshold_nm / m->snapshot_speed_kt * 3600.0;
    }
    row.mean_distance_nm = sd / row.n_flights;
    row.mean_speed_kt = sv / row.n_flights;
    row.mean_seconds_to_threshold = st / row.n_flights;
    out.push_back(std::move(row));
  }
  return out;
}

void write_prediction_points_csv(const std::string& path,
                                 const std::vector<PredictionPointRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "airport,runway,n_flights,avg_distance_nm,avg_speed_kt,"
         "avg_seconds_to_threshold\n";
  for (const auto& r : rows) {
    out << r.airport << ',' << r.runway << ',' << r.n_flights << ','
        << format_double(r.mean_distance_nm, 2) << ','
        << format_double(r.mean_speed_kt, 2) << ','
        << format_double(r.mean_seconds_to_threshold, 2) << '\n';
  }
}

void write_snapshots_csv(const std::string& path,
                         const std::vector<FeatureRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "airport,runway,distance_to_threshold_nm,speed_kt\n";
  for (const auto& r : rows) {
    out << r.airport << ',' << r.runway_assigned << ','
        << format_double(r.distance_to_threshold_nm, 6) << ','
        << format_double(r.snapshot_speed_kt, 2) << '\n';
  }
}

std::vector<FeatureRow> read_snapshots_csv(const std::string& path) {
  CsvTable t = CsvTable::read_file(path);
  const std::size_t ap = t.column("airport");
  const std::size_t rw = t.column("runway");
  const std::size_t d = t.column("distance_to_threshold_nm");
  const std::size_t v = t.column("speed_kt");
  std::vector<FeatureRow> rows;
  rows.reserve(t.row_count());
  for (std::size_t i = 0; i < t.row_count(); ++i) {
    FeatureRow r;
    r.airport = t.row(i)[ap];
    r.runway_assigned = t.row(i)[rw];
    r.distance_to_threshold_nm = std::strtod(t.row(i)[d].c_str(), nullptr);
    r.snapshot_speed_kt = std::strtod(t.row(i)[v].c_str(), nullptr);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_unseen_report_csv(const std::string& path, const UnseenReport& rep) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "airport,repeat,fold,algo,variant,params,mae_s\n";
  for (const auto& cell : rep.cells) {
    for (const auto& e : cell.report.entries) {
      out << cell.airport << ',' << e.repeat << ',' << e.fold << ','
          << algo_name(cell.algo) << ',' << variant_name(cell.variant) << ','
          << csv_quote(e.chosen_params.to_string()) << ','
          << format_double(e.test_mae_s, 6) << '\n';
    }
  }
}

void write_unseen_summary_csv(const std::string& path,
                              const UnseenReport& rep) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "airport,arot_mean_s,arot_sigma_s,algo,variant,mae_mean_s,"
         "mae_stddev_s,uncertainty_reduction\n";
  for (const auto& cell : rep.cells) {
    out << cell.airport << ',' << format_double(cell.arot_mean_s, 2) << ','
        << format_double(cell.arot_sigma_s, 2) << ',' << algo_name(cell.algo)
        << ',' << variant_name(cell.variant) << ','
        << format_double(cell.report.mae_mean(), 3) << ','
        << format_double(cell.report.mae_stddev(), 3) << ','
        << format_double(cell.metrics.uncertainty_reduction, 4) << '\n';
  }
}

void write_generalized_report_csv(const std::string& path,
                                  const GeneralizedReport& rep) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "mode,sources,target,algo,alpha,repeat,mae_generalized_s,"
         "mae_normal_s,n_test,skipped\n";
  for (const auto& c : rep.cells) {
    out << mode_name(c.mode) << ',' << join_names(c.sources) << ',' << c.target
        << ',' << algo_name(c.algo) << ',' << format_double(c.alpha, 2) << ','
        << c.repeat << ','
        << (c.skipped ? "" : format_double(c.mae_generalized_s, 6)) << ','
        << (c.skipped ? "" : format_double(c.mae_normal_s, 6)) << ','
        << c.n_test << ',' << (c.skipped ? 1 : 0) << '\n';
  }
}

}  // namespace arot
