#include "arot/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arot {

ForestModel fit_forest(const Eigen::Ref<const Eigen::MatrixXd>& X,
                       const Eigen::Ref<const Eigen::VectorXd>& y,
                       const ForestParams& params, std::uint64_t seed) {
  const int n = static_cast<int>(X.rows());
  if (n == 0) throw std::invalid_argument("fit_forest: empty dataset");
  if (params.n_estimators < 1)
    throw std::invalid_argument("fit_forest: n_estimators must be >= 1");

  int sample_size = n;
  if (params.max_samples) {
    sample_size = static_cast<int>(std::lround(*params.max_samples * n));
    sample_size = std::clamp(sample_size, 1, n);
  }

  TreeParams tp;
  tp.splitter = Splitter::Best;
  tp.max_depth = params.max_depth;
  tp.min_samples_leaf = params.min_samples_leaf;
  tp.max_features = params.max_features;

  ForestModel model;
  model.params = params;
  model.seed = seed;
  model.trees.reserve(params.n_estimators);

  for (int t = 0; t < params.n_estimators; ++t) {
    const std::uint64_t tree_seed = derive_seed(seed, static_cast<std::uint64_t>(t));
    Rng rng(tree_seed);
    std::vector<int> rows(sample_size);
    for (int i = 0; i < sample_size; ++i)
      rows[i] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
    model.trees.push_back(
        fit_tree_rows(X, y, rows, tp, derive_seed(tree_seed, 1)));
  }
  return model;
}

double ForestModel::predict_one(
    const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  double sum = 0;
  for (const auto& t : trees) sum += t.predict_one(x);
  return sum / static_cast<double>(trees.size());
}

Eigen::VectorXd ForestModel::predict(
    const Eigen::Ref<const Eigen::MatrixXd>& X) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(X.rows());
  for (const auto& t : trees) out += t.predict(X);
  return out / static_cast<double>(trees.size());
}

GbmModel fit_gbm(const Eigen::Ref<const Eigen::MatrixXd>& X,
                 const Eigen::Ref<const Eigen::VectorXd>& y,
                 const GbmParams& params, std::uint64_t seed) {
  const int n = static_cast<int>(X.rows());
  if (n == 0) throw std::invalid_argument("fit_gbm: empty dataset");
  if (params.learning_rate < 0)
    throw std::invalid_argument("fit_gbm: learning_rate must be nonnegative");
  if (params.subsample <= 0 || params.subsample > 1)
    throw std::invalid_argument("fit_gbm: subsample must be in (0, 1]");

  TreeParams tp;
  tp.splitter = Splitter::Best;
  tp.max_depth = params.max_depth;
  tp.min_samples_leaf = params.min_samples_leaf;
  tp.max_features = params.max_features;

  const int sample_size =
      std::clamp(static_cast<int>(std::lround(params.subsample * n)), 1, n);

  GbmModel model;
  model.params = params;
  model.seed = seed;
  model.f0 = y.mean();
  model.stages.reserve(params.n_estimators);

  Eigen::VectorXd current = Eigen::VectorXd::Constant(n, model.f0);
  Eigen::VectorXd residual(n);

  for (int m = 1; m <= params.n_estimators; ++m) {
    residual = y - current;

    std::vector<int> rows;
    if (sample_size == n) {
      rows.resize(n);
      for (int i = 0; i < n; ++i) rows[i] = i;
    } else {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(m)));
      rows = rng.sample_without_replacement(n, sample_size);
      std::sort(rows.begin(), rows.end());
    }

    TreeModel tree = fit_tree_rows(
        X, residual, rows, tp,
        derive_seed(derive_seed(seed, static_cast<std::uint64_t>(m)), 1));
    current += params.learning_rate * tree.predict(X);
    model.stages.push_back(std::move(tree));
  }
  return model;
}

double GbmModel::predict_one(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  double out = f0;
  for (const auto& t : stages) out += params.learning_rate * t.predict_one(x);
  return out;
}

Eigen::VectorXd GbmModel::predict(
    const Eigen::Ref<const Eigen::MatrixXd>& X) const {
  Eigen::VectorXd out = Eigen::VectorXd::Constant(X.rows(), f0);
  for (const auto& t : stages) out += params.learning_rate * t.predict(X);
  return out;
}

}  // namespace arot
