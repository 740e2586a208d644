#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arot/rng.hpp"

namespace arot {

enum class Splitter { Best, Random };

struct MaxFeatures {
  enum class Mode { Sqrt, Fixed, All };
  Mode mode = Mode::All;
  int k = 0;  // Fixed only

  static MaxFeatures sqrt() { return {Mode::Sqrt, 0}; }
  static MaxFeatures fixed(int k) { return {Mode::Fixed, k}; }
  static MaxFeatures all() { return {Mode::All, 0}; }

  int resolve(int p) const;
  std::string to_string() const;
};

struct TreeParams {
  Splitter splitter = Splitter::Best;
  int max_depth = 10;
  int min_samples_leaf = 1;
  MaxFeatures max_features = MaxFeatures::all();
};

struct Split {
  int feature = -1;
  double threshold = 0;
  double gain = 0;  // parent SSE minus summed child SSE
};

struct TreeNode {
  int feature = -1;  // -1 = leaf
  double threshold = 0;
  int left = -1;
  int right = -1;
  double value = 0;  // leaf prediction (mean of training targets)
  int n_samples = 0;
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  TreeParams params;
  std::uint64_t seed = 0;

  double predict_one(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  Eigen::VectorXd predict(const Eigen::Ref<const Eigen::MatrixXd>& X) const;
  int depth() const;
  std::string to_text() const;
};

// Splits never improving SSE by more than this are rejected, which
// guarantees termination on constant targets.
inline constexpr double kMinSplitGain = 1e-12;

// Best (feature, threshold) over the given rows and candidate features.
// Best splitter enumerates every midpoint between consecutive distinct
// sorted values; random splitter draws one uniform threshold per candidate
// feature. Ties break toward lower feature index, then lower threshold.
std::optional<Split> best_split(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                const Eigen::Ref<const Eigen::VectorXd>& y,
                                const std::vector<int>& rows,
                                const std::vector<int>& candidate_features,
                                Splitter splitter, int min_samples_leaf,
                                Rng& rng);

TreeModel fit_tree(const Eigen::Ref<const Eigen::MatrixXd>& X,
                   const Eigen::Ref<const Eigen::VectorXd>& y,
                   const TreeParams& params, std::uint64_t seed);

// Fit restricted to a row subset (used by the ensembles).
TreeModel fit_tree_rows(const Eigen::Ref<const Eigen::MatrixXd>& X,
                        const Eigen::Ref<const Eigen::VectorXd>& y,
                        const std::vector<int>& rows, const TreeParams& params,
                        std::uint64_t seed);

}  // namespace arot
