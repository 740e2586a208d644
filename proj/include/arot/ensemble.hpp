#pragma once

#include <Eigen/Dense>
#include <optional>

#include "arot/tree.hpp"

namespace arot {

struct ForestParams {
  int n_estimators = 100;
  // Bootstrap fraction; nullopt = full size n.
  std::optional<double> max_samples;
  int max_depth = 10;
  int min_samples_leaf = 1;
  MaxFeatures max_features = MaxFeatures::all();
};

struct GbmParams {
  int n_estimators = 100;
  double learning_rate = 0.1;
  double subsample = 1.0;
  int max_depth = 3;
  int min_samples_leaf = 1;
  MaxFeatures max_features = MaxFeatures::all();
};

struct ForestModel {
  std::vector<TreeModel> trees;
  ForestParams params;
  std::uint64_t seed = 0;

  double predict_one(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  Eigen::VectorXd predict(const Eigen::Ref<const Eigen::MatrixXd>& X) const;
};

struct GbmModel {
  double f0 = 0;  // target mean
  std::vector<TreeModel> stages;
  GbmParams params;
  std::uint64_t seed = 0;

  double predict_one(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  Eigen::VectorXd predict(const Eigen::Ref<const Eigen::MatrixXd>& X) const;
};

// Bagged trees; each tree fits a with-replacement bootstrap of
// round(max_samples * n) rows drawn from substream (seed, tree index).
// Trees always use the best splitter.
ForestModel fit_forest(const Eigen::Ref<const Eigen::MatrixXd>& X,
                       const Eigen::Ref<const Eigen::VectorXd>& y,
                       const ForestParams& params, std::uint64_t seed);

// Stagewise squared-error boosting from the target mean; each stage fits the
// current residuals on a without-replacement subsample of
// round(subsample * n) rows drawn from substream (seed, stage index).
GbmModel fit_gbm(const Eigen::Ref<const Eigen::MatrixXd>& X,
                 const Eigen::Ref<const Eigen::VectorXd>& y,
                 const GbmParams& params, std::uint64_t seed);

}  // namespace arot
