#include "arot/modelsel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "arot/csv.hpp"

namespace arot {

Encoder Encoder::fit(const Dataset& train) {
  Encoder e;
  e.maps_.resize(train.columns.size());
  for (std::size_t j = 0; j < train.columns.size(); ++j) {
    if (!train.columns[j].is_categorical) continue;
    std::vector<std::string> cats(train.labels[j]);
    std::sort(cats.begin(), cats.end());
    cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
    int code = 1;
    for (auto& c : cats) e.maps_[j].emplace(std::move(c), code++);
  }
  return e;
}

Eigen::MatrixXd Encoder::transform(const Dataset& d) const {
  if (d.columns.size() != maps_.size())
    throw std::invalid_argument("Encoder: schema mismatch");
  Eigen::MatrixXd X = d.numeric;
  for (std::size_t j = 0; j < maps_.size(); ++j) {
    if (maps_[j].empty()) continue;
    for (Eigen::Index i = 0; i < d.row_count(); ++i) {
      auto it = maps_[j].find(d.labels[j][i]);
      X(i, static_cast<Eigen::Index>(j)) =
          it == maps_[j].end() ? 0.0 : static_cast<double>(it->second);
    }
  }
  return X;
}

std::optional<std::string> Encoder::decode(std::size_t col, int code) const {
  for (const auto& [cat, c] : maps_[col])
    if (c == code) return cat;
  return std::nullopt;
}

Algo FittedModel::algo() const {
  if (std::holds_alternative<TreeModel>(model)) return Algo::Dt;
  if (std::holds_alternative<ForestModel>(model)) return Algo::Rf;
  return Algo::Gbm;
}

Eigen::VectorXd FittedModel::predict(
    const Eigen::Ref<const Eigen::MatrixXd>& X) const {
  return std::visit([&](const auto& m) { return m.predict(X); }, model);
}

FittedModel fit_model(const Eigen::Ref<const Eigen::MatrixXd>& X,
                      const Eigen::Ref<const Eigen::VectorXd>& y,
                      const HyperParams& hp, std::uint64_t seed) {
  switch (hp.algo) {
    case Algo::Dt: {
      TreeParams tp{hp.splitter, hp.max_depth, hp.min_samples_leaf,
                    hp.max_features};
      return {fit_tree(X, y, tp, seed)};
    }
    case Algo::Rf: {
      ForestParams fp;
      fp.n_estimators = hp.n_estimators;
      fp.max_samples = hp.max_samples;
      fp.max_depth = hp.max_depth;
      fp.min_samples_leaf = hp.min_samples_leaf;
      fp.max_features = hp.max_features;
      return {fit_forest(X, y, fp, seed)};
    }
    case Algo::Gbm: {
      GbmParams gp;
      gp.n_estimators = hp.n_estimators;
      gp.learning_rate = hp.learning_rate;
      gp.subsample = hp.subsample;
      gp.max_depth = hp.max_depth;
      gp.min_samples_leaf = hp.min_samples_leaf;
      gp.max_features = hp.max_features;
      return {fit_gbm(X, y, gp, seed)};
    }
  }
  throw std::logic_error("fit_model: bad algo");
}

double mean_absolute_error(const Eigen::Ref<const Eigen::VectorXd>& y_true,
                           const Eigen::Ref<const Eigen::VectorXd>& y_pred) {
  if (y_true.size() != y_pred.size() || y_true.size() == 0)
    throw std::invalid_argument("mean_absolute_error: length mismatch");
  return (y_true - y_pred).cwiseAbs().mean();
}

EvalMetrics evaluate(const Eigen::Ref<const Eigen::VectorXd>& y_true,
                     const Eigen::Ref<const Eigen::VectorXd>& y_pred,
                     double target_sigma) {
  if (target_sigma <= 0)
    throw std::invalid_argument("evaluate: target_sigma must be positive");
  EvalMetrics m;
  m.mae_s = mean_absolute_error(y_true, y_pred);
  m.target_sigma_s = target_sigma;
  m.uncertainty_reduction = 1.0 - m.mae_s / target_sigma;
  return m;
}

std::vector<std::vector<int>> make_folds(int n, int k, std::uint64_t seed) {
  if (k < 2 || n < k) throw std::invalid_argument("make_folds: need n >= k >= 2");
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed);
  rng.shuffle(idx);

  std::vector<std::vector<int>> folds(k);
  const int base = n / k, extra = n % k;
  int pos = 0;
  for (int f = 0; f < k; ++f) {
    const int size = base + (f < extra ? 1 : 0);
    folds[f].assign(idx.begin() + pos, idx.begin() + pos + size);
    pos += size;
  }
  return folds;
}

namespace {

std::vector<int> complement_rows(const std::vector<std::vector<int>>& folds,
                                 int hold_out) {
  std::vector<int> rows;
  for (std::size_t f = 0; f < folds.size(); ++f)
    if (static_cast<int>(f) != hold_out)
      rows.insert(rows.end(), folds[f].begin(), folds[f].end());
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace

GridSearchResult grid_search_cv(const Dataset& train, const ParamGrid& grid,
                                int k_inner, std::uint64_t seed) {
  if (grid.points.empty())
    throw std::invalid_argument("grid_search_cv: empty grid");
  const int n = static_cast<int>(train.row_count());
  auto folds = make_folds(n, k_inner, derive_seed(seed, 0));

  std::vector<double> sum_mae(grid.points.size(), 0.0);

  for (int f = 0; f < k_inner; ++f) {
    std::vector<int> train_rows = complement_rows(folds, f);
    std::vector<int> val_rows = folds[f];
    std::sort(val_rows.begin(), val_rows.end());

    Dataset tr = train.subset(train_rows);
    Dataset va = train.subset(val_rows);
    Encoder enc = Encoder::fit(tr);
    Eigen::MatrixXd Xtr = enc.transform(tr);
    Eigen::MatrixXd Xva = enc.transform(va);

    for (std::size_t g = 0; g < grid.points.size(); ++g) {
      const std::uint64_t model_seed =
          derive_seed(seed, 1 + static_cast<std::uint64_t>(f) * grid.points.size() + g);
      FittedModel m = fit_model(Xtr, tr.target, grid.points[g], model_seed);
      sum_mae[g] += mean_absolute_error(va.target, m.predict(Xva));
    }
  }

  GridSearchResult res;
  res.mean_mae.resize(grid.points.size());
  for (std::size_t g = 0; g < grid.points.size(); ++g)
    res.mean_mae[g] = sum_mae[g] / k_inner;
  res.best_index = static_cast<std::size_t>(
      std::min_element(res.mean_mae.begin(), res.mean_mae.end()) -
      res.mean_mae.begin());  // min_element keeps the earliest on ties
  res.best_params = grid.points[res.best_index];
  return res;
}

CvReport nested_cv(const Dataset& dataset, const ParamGrid& grid,
                   const NestedCvConfig& cfg, std::uint64_t seed) {
  const int n = static_cast<int>(dataset.row_count());
  if (n < cfg.k_outer * cfg.k_inner)
    throw std::invalid_argument("nested_cv: insufficient rows");

  CvReport report;
  report.algo = grid.algo;
  report.variant = dataset.variant;

  for (int r = 0; r < cfg.repeats; ++r) {
    const std::uint64_t repeat_seed = derive_seed(seed, static_cast<std::uint64_t>(r));
    auto folds = make_folds(n, cfg.k_outer, derive_seed(repeat_seed, 0));

    for (int f = 0; f < cfg.k_outer; ++f) {
      std::vector<int> train_rows = complement_rows(folds, f);
      std::vector<int> test_rows = folds[f];
      std::sort(test_rows.begin(), test_rows.end());

      Dataset tr = dataset.subset(train_rows);
      Dataset te = dataset.subset(test_rows);

      const std::uint64_t fold_seed =
          derive_seed(repeat_seed, 1 + static_cast<std::uint64_t>(f));
      GridSearchResult gs = grid_search_cv(tr, grid, cfg.k_inner, fold_seed);

      Encoder enc = Encoder::fit(tr);
      FittedModel model = fit_model(enc.transform(tr), tr.target,
                                    gs.best_params, derive_seed(fold_seed, 0));
      Eigen::VectorXd pred = model.predict(enc.transform(te));

      CvFoldEntry e;
      e.repeat = r;
      e.fold = f;
      e.chosen_index = gs.best_index;
      e.chosen_params = gs.best_params;
      e.test_mae_s = mean_absolute_error(te.target, pred);
      e.n_test = static_cast<int>(test_rows.size());
      e.test_rows = test_rows;
      e.test_predictions.assign(pred.data(), pred.data() + pred.size());
      report.entries.push_back(std::move(e));
    }
  }
  return report;
}

double CvReport::mae_mean() const {
  double s = 0;
  for (const auto& e : entries) s += e.test_mae_s;
  return s / static_cast<double>(entries.size());
}

double CvReport::mae_stddev() const {
  if (entries.size() < 2) return 0;
  const double m = mae_mean();
  double s = 0;
  for (const auto& e : entries) s += (e.test_mae_s - m) * (e.test_mae_s - m);
  return std::sqrt(s / static_cast<double>(entries.size() - 1));
}

void write_cv_report_csv(const std::string& path,
                         const std::vector<CvReport>& reports,
                         const std::vector<std::string>& airports) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "airport,repeat,fold,algo,variant,params,mae_s\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& rep = reports[i];
    for (const auto& e : rep.entries) {
      out << airports[i] << ',' << e.repeat << ',' << e.fold << ','
          << algo_name(rep.algo) << ',' << variant_name(rep.variant) << ','
          << csv_quote(e.chosen_params.to_string()) << ','
          << format_double(e.test_mae_s, 6) << '\n';
    }
  }
}

}  // namespace arot
