#include "arot/tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace arot {

int MaxFeatures::resolve(int p) const {
  switch (mode) {
    case Mode::Sqrt:
      return std::max(1, static_cast<int>(std::ceil(std::sqrt(
                             static_cast<double>(p)))));
    case Mode::Fixed:
      return std::min(k, p);
    case Mode::All:
      return p;
  }
  return p;
}

std::string MaxFeatures::to_string() const {
  switch (mode) {
    case Mode::Sqrt: return "sqrt";
    case Mode::Fixed: return std::to_string(k);
    case Mode::All: return "all";
  }
  return "?";
}

namespace {

struct SplitScore {
  double children_sse = 0;
  int feature = -1;
  double threshold = 0;

  bool better_than(const SplitScore& o) const {
    if (children_sse != o.children_sse) return children_sse < o.children_sse;
    if (feature != o.feature) return feature < o.feature;
    return threshold < o.threshold;
  }
};

double node_sse(const Eigen::Ref<const Eigen::VectorXd>& y,
                const std::vector<int>& rows) {
  double sum = 0, sum2 = 0;
  for (int i : rows) {
    sum += y[i];
    sum2 += y[i] * y[i];
  }
  const double n = static_cast<double>(rows.size());
  return sum2 - sum * sum / n;
}

}  // namespace

std::optional<Split> best_split(const Eigen::Ref<const Eigen::MatrixXd>& X,
                                const Eigen::Ref<const Eigen::VectorXd>& y,
                                const std::vector<int>& rows,
                                const std::vector<int>& candidate_features,
                                Splitter splitter, int min_samples_leaf,
                                Rng& rng) {
  const int n = static_cast<int>(rows.size());
  if (n < 2 || n < 2 * min_samples_leaf) return std::nullopt;

  const double parent_sse = node_sse(y, rows);
  std::optional<SplitScore> best;

  std::vector<std::pair<double, double>> xy(n);  // (feature value, target)

  for (int f : candidate_features) {
    double lo = X(rows[0], f), hi = lo;
    for (int i : rows) {
      lo = std::min(lo, X(i, f));
      hi = std::max(hi, X(i, f));
    }
    if (lo == hi) continue;  // constant feature: no candidate thresholds

    if (splitter == Splitter::Best) {
      for (int i = 0; i < n; ++i) xy[i] = {X(rows[i], f), y[rows[i]]};
      std::sort(xy.begin(), xy.end());

      double left_sum = 0, left_sum2 = 0;
      double total_sum = 0, total_sum2 = 0;
      for (const auto& [xv, yv] : xy) {
        total_sum += yv;
        total_sum2 += yv * yv;
      }
      for (int i = 0; i + 1 < n; ++i) {
        left_sum += xy[i].second;
        left_sum2 += xy[i].second * xy[i].second;
        if (xy[i].first == xy[i + 1].first) continue;
        const int nl = i + 1, nr = n - nl;
        if (nl < min_samples_leaf || nr < min_samples_leaf) continue;
        const double right_sum = total_sum - left_sum;
        const double right_sum2 = total_sum2 - left_sum2;
        const double sse = (left_sum2 - left_sum * left_sum / nl) +
                           (right_sum2 - right_sum * right_sum / nr);
        double thr = xy[i].first + (xy[i + 1].first - xy[i].first) / 2;
        if (thr >= xy[i + 1].first) thr = xy[i].first;  // midpoint rounded up
        SplitScore cand{sse, f, thr};
        if (!best || cand.better_than(*best)) best = cand;
      }
    } else {
      const double thr = rng.uniform(lo, hi);
      int nl = 0, nr = 0;
      double ls = 0, ls2 = 0, rs = 0, rs2 = 0;
      for (int i : rows) {
        if (X(i, f) <= thr) {
          ++nl;
          ls += y[i];
          ls2 += y[i] * y[i];
        } else {
          ++nr;
          rs += y[i];
          rs2 += y[i] * y[i];
        }
      }
      if (nl < min_samples_leaf || nr < min_samples_leaf) continue;
      const double sse = (ls2 - ls * ls / nl) + (rs2 - rs * rs / nr);
      SplitScore cand{sse, f, thr};
      if (!best || cand.better_than(*best)) best = cand;
    }
  }

  if (!best) return std::nullopt;
  const double gain = parent_sse - best->children_sse;
  if (gain <= kMinSplitGain) return std::nullopt;
  return Split{best->feature, best->threshold, gain};
}

namespace {

struct TreeBuilder {
  const Eigen::Ref<const Eigen::MatrixXd>& X;
  const Eigen::Ref<const Eigen::VectorXd>& y;
  const TreeParams& params;
  std::uint64_t seed;
  std::vector<TreeNode> nodes;

  int build(std::vector<int> rows, int depth) {
    const int node_id = static_cast<int>(nodes.size());
    nodes.emplace_back();

    double sum = 0;
    for (int i : rows) sum += y[i];
    nodes[node_id].value = sum / static_cast<double>(rows.size());
    nodes[node_id].n_samples = static_cast<int>(rows.size());

    if (depth >= params.max_depth ||
        static_cast<int>(rows.size()) < 2 * params.min_samples_leaf)
      return node_id;

    // Per-node substream: candidate feature draw and random-splitter
    // thresholds cannot depend on sibling expansion order.
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(node_id)));
    const int p = static_cast<int>(X.cols());
    const int m = params.max_features.resolve(p);
    std::vector<int> features;
    if (m >= p) {
      features.resize(p);
      for (int j = 0; j < p; ++j) features[j] = j;
    } else {
      features = rng.sample_without_replacement(p, m);
      std::sort(features.begin(), features.end());
    }

    auto split = best_split(X, y, rows, features, params.splitter,
                            params.min_samples_leaf, rng);
    if (!split) return node_id;

    std::vector<int> left_rows, right_rows;
    left_rows.reserve(rows.size());
    right_rows.reserve(rows.size());
    for (int i : rows) {
      if (X(i, split->feature) <= split->threshold) left_rows.push_back(i);
      else right_rows.push_back(i);
    }
    rows.clear();
    rows.shrink_to_fit();

    nodes[node_id].feature = split->feature;
    nodes[node_id].threshold = split->threshold;
    const int l = build(std::move(left_rows), depth + 1);
    nodes[node_id].left = l;
    const int r = build(std::move(right_rows), depth + 1);
    nodes[node_id].right = r;
    return node_id;
  }
};

}  // namespace

TreeModel fit_tree_rows(const Eigen::Ref<const Eigen::MatrixXd>& X,
                        const Eigen::Ref<const Eigen::VectorXd>& y,
                        const std::vector<int>& rows, const TreeParams& params,
                        std::uint64_t seed) {
  if (rows.empty()) throw std::invalid_argument("fit_tree: empty dataset");
  TreeBuilder b{X, y, params, seed, {}};
  b.build(rows, 0);
  TreeModel m;
  m.nodes = std::move(b.nodes);
  m.params = params;
  m.seed = seed;
  return m;
}

TreeModel fit_tree(const Eigen::Ref<const Eigen::MatrixXd>& X,
                   const Eigen::Ref<const Eigen::VectorXd>& y,
                   const TreeParams& params, std::uint64_t seed) {
  std::vector<int> rows(static_cast<std::size_t>(X.rows()));
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
  return fit_tree_rows(X, y, rows, params, seed);
}

double TreeModel::predict_one(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  int id = 0;
  for (;;) {
    const TreeNode& nd = nodes[id];
    if (nd.feature < 0) return nd.value;
    const double v = x[nd.feature];
    if (!std::isfinite(v))
      throw std::invalid_argument("predict: non-finite feature value");
    id = v <= nd.threshold ? nd.left : nd.right;
  }
}

Eigen::VectorXd TreeModel::predict(
    const Eigen::Ref<const Eigen::MatrixXd>& X) const {
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const Eigen::RowVectorXd row = X.row(i);
    out[i] = predict_one(row);
  }
  return out;
}

int TreeModel::depth() const {
  // depth via iterative walk; node ids are preorder so children follow parents
  std::vector<int> depths(nodes.size(), 0);
  int max_d = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].feature >= 0) {
      depths[nodes[i].left] = depths[i] + 1;
      depths[nodes[i].right] = depths[i] + 1;
    }
    max_d = std::max(max_d, depths[i]);
  }
  return max_d;
}

std::string TreeModel::to_text() const {
  std::ostringstream out;
  struct Item {
    int id;
    int indent;
  };
  std::vector<Item> stack{{0, 0}};
  while (!stack.empty()) {
    auto [id, indent] = stack.back();
    stack.pop_back();
    const TreeNode& nd = nodes[id];
    for (int i = 0; i < indent; ++i) out << "  ";
    if (nd.feature < 0) {
      out << "leaf value=" << nd.value << " n=" << nd.n_samples << "\n";
    } else {
      out << "x[" << nd.feature << "] <= " << nd.threshold
          << " n=" << nd.n_samples << "\n";
      stack.push_back({nd.right, indent + 1});
      stack.push_back({nd.left, indent + 1});
    }
  }
  return out.str();
}

}  // namespace arot
