#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "arot/dataset.hpp"
#include "arot/ensemble.hpp"
#include "arot/grids.hpp"

namespace arot {

// Ordinal encoder. Codes 1..n in lexicographic category order per column;
// 0 is reserved for categories unseen in the fitting data.
class Encoder {
 public:
  static Encoder fit(const Dataset& train);

  Eigen::MatrixXd transform(const Dataset& d) const;
  std::optional<std::string> decode(std::size_t col, int code) const;
  const std::map<std::string, int>& column_map(std::size_t col) const {
    return maps_[col];
  }

 private:
  std::vector<std::map<std::string, int>> maps_;  // empty map = numeric col
};

struct FittedModel {
  std::variant<TreeModel, ForestModel, GbmModel> model;

  Algo algo() const;
  Eigen::VectorXd predict(const Eigen::Ref<const Eigen::MatrixXd>& X) const;
};

FittedModel fit_model(const Eigen::Ref<const Eigen::MatrixXd>& X,
                      const Eigen::Ref<const Eigen::VectorXd>& y,
                      const HyperParams& hp, std::uint64_t seed);

struct EvalMetrics {
  double mae_s = 0;
  double target_sigma_s = 0;
  double uncertainty_reduction = 0;  // 1 - mae / sigma
};

EvalMetrics evaluate(const Eigen::Ref<const Eigen::VectorXd>& y_true,
                     const Eigen::Ref<const Eigen::VectorXd>& y_pred,
                     double target_sigma);

double mean_absolute_error(const Eigen::Ref<const Eigen::VectorXd>& y_true,
                           const Eigen::Ref<const Eigen::VectorXd>& y_pred);

// Disjoint, exhaustive folds balanced within one row; the shuffle is
// deterministic in the seed.
std::vector<std::vector<int>> make_folds(int n, int k, std::uint64_t seed);

struct GridSearchResult {
  std::size_t best_index = 0;
  HyperParams best_params;
  std::vector<double> mean_mae;  // per grid point
};

// For every grid point, k-fold CV MAE on `train`; returns the argmin of the
// mean inner MAE. Ties go to the earliest grid point. The encoder is fit on
// each fold's training portion only.
GridSearchResult grid_search_cv(const Dataset& train, const ParamGrid& grid,
                                int k_inner, std::uint64_t seed);

struct CvFoldEntry {
  int repeat = 0;
  int fold = 0;
  std::size_t chosen_index = 0;
  HyperParams chosen_params;
  double test_mae_s = 0;
  int n_test = 0;
  std::vector<int> test_rows;          // dataset row ids of the held-out fold
  std::vector<double> test_predictions;
};

struct CvReport {
  Algo algo = Algo::Dt;
  Variant variant = Variant::Mixed;
  std::vector<CvFoldEntry> entries;

  double mae_mean() const;
  double mae_stddev() const;  // sample stddev over fold entries
};

struct NestedCvConfig {
  int k_outer = 5;
  int k_inner = 3;
  int repeats = 3;
};

CvReport nested_cv(const Dataset& dataset, const ParamGrid& grid,
                   const NestedCvConfig& cfg, std::uint64_t seed);

void write_cv_report_csv(const std::string& path,
                         const std::vector<CvReport>& reports,
                         const std::vector<std::string>& airports);

}  // namespace arot
