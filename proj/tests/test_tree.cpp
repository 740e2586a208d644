#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>

#include "arot/rng.hpp"
#include "arot/tree.hpp"

using namespace arot;

namespace {

// Independent split search: enumerate every (feature, midpoint) pair,
// compute child SSE directly, apply the documented tie-break.
struct OracleSplit {
  int feature;
  double threshold;
  double children_sse;
};

std::optional<OracleSplit> oracle_best_split(const Eigen::MatrixXd& X,
                                             const Eigen::VectorXd& y,
                                             const std::vector<int>& rows,
                                             int min_samples_leaf) {
  // Targets in these trials are small integers, so sum and sum-of-squares
  // are exact in double and the SSE identity below is order-independent.
  auto sse = [&](const std::vector<int>& part) {
    if (part.empty()) return 0.0;
    double sum = 0, sum2 = 0;
    for (int i : part) {
      sum += y[i];
      sum2 += y[i] * y[i];
    }
    return sum2 - sum * sum / static_cast<double>(part.size());
  };
  const double parent = sse(rows);

  std::optional<OracleSplit> best;
  for (int f = 0; f < X.cols(); ++f) {
    std::vector<double> vals;
    for (int i : rows) vals.push_back(X(i, f));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
      double thr = vals[k] + (vals[k + 1] - vals[k]) / 2;
      if (thr >= vals[k + 1]) thr = vals[k];
      std::vector<int> l, r;
      for (int i : rows) (X(i, f) <= thr ? l : r).push_back(i);
      if (static_cast<int>(l.size()) < min_samples_leaf ||
          static_cast<int>(r.size()) < min_samples_leaf)
        continue;
      const double child = sse(l) + sse(r);
      const bool better =
          !best || child < best->children_sse ||
          (child == best->children_sse &&
           (f < best->feature ||
            (f == best->feature && thr < best->threshold)));
      if (better) best = OracleSplit{f, thr, child};
    }
  }
  if (!best || parent - best->children_sse <= kMinSplitGain)
    return std::nullopt;
  return best;
}

// Grow a reference tree with the oracle splitter and compare node by node.
void check_against_oracle(const TreeModel& model, const Eigen::MatrixXd& X,
                          const Eigen::VectorXd& y, std::vector<int> rows,
                          int node_id, int depth, const TreeParams& params) {
  const TreeNode& nd = model.nodes[node_id];
  double mean = 0;
  for (int i : rows) mean += y[i];
  mean /= static_cast<double>(rows.size());
  CHECK(nd.value == doctest::Approx(mean).epsilon(1e-12));
  CHECK(nd.n_samples == static_cast<int>(rows.size()));

  std::optional<OracleSplit> want;
  if (depth < params.max_depth &&
      static_cast<int>(rows.size()) >= 2 * params.min_samples_leaf)
    want = oracle_best_split(X, y, rows, params.min_samples_leaf);

  if (!want) {
    CHECK(nd.feature == -1);
    return;
  }
  REQUIRE(nd.feature == want->feature);
  CHECK(nd.threshold == doctest::Approx(want->threshold).epsilon(1e-12));
  std::vector<int> l, r;
  for (int i : rows)
    (X(i, nd.feature) <= nd.threshold ? l : r).push_back(i);
  check_against_oracle(model, X, y, l, nd.left, depth + 1, params);
  check_against_oracle(model, X, y, r, nd.right, depth + 1, params);
}

Eigen::MatrixXd random_matrix(Rng& rng, int n, int p, int distinct = 8) {
  Eigen::MatrixXd X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j)
      X(i, j) = static_cast<double>(rng.next_below(distinct));  // forces ties
  return X;
}

Eigen::VectorXd random_target(Rng& rng, int n) {
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y[i] = std::round(rng.uniform(0, 20));
  return y;
}

}  // namespace

TEST_CASE("documented stump example") {
  Eigen::MatrixXd X(4, 1);
  X << 0, 1, 2, 3;
  Eigen::VectorXd y(4);
  y << 0, 0, 10, 10;

  std::vector<int> rows = {0, 1, 2, 3};
  Rng rng(1);
  auto split = best_split(X, y, rows, {0}, Splitter::Best, 1, rng);
  REQUIRE(split.has_value());
  CHECK(split->feature == 0);
  CHECK(split->threshold == doctest::Approx(1.5));

  TreeParams params;
  params.max_depth = 1;
  TreeModel stump = fit_tree(X, y, params, 1);
  CHECK(stump.depth() == 1);
  Eigen::RowVectorXd q(1);
  q << 0.5;
  CHECK(stump.predict_one(q) == doctest::Approx(0.0));
  q << 1.5;  // exactly at the threshold goes left
  CHECK(stump.predict_one(q) == doctest::Approx(0.0));
  q << 1.6;
  CHECK(stump.predict_one(q) == doctest::Approx(10.0));
}

TEST_CASE("degenerate inputs") {
  Eigen::MatrixXd X(4, 1);
  X << 0, 1, 2, 3;
  Eigen::VectorXd y_const = Eigen::VectorXd::Constant(4, 5.0);
  std::vector<int> rows = {0, 1, 2, 3};
  Rng rng(1);
  CHECK(!best_split(X, y_const, rows, {0}, Splitter::Best, 1, rng).has_value());

  Eigen::MatrixXd X_const = Eigen::MatrixXd::Constant(4, 1, 2.0);
  Eigen::VectorXd y(4);
  y << 0, 0, 10, 10;
  CHECK(!best_split(X_const, y, rows, {0}, Splitter::Best, 1, rng).has_value());

  TreeParams params;
  TreeModel leaf = fit_tree(X, y_const, params, 3);
  CHECK(leaf.nodes.size() == 1);
  CHECK(leaf.depth() == 0);
  CHECK(leaf.nodes[0].value == doctest::Approx(5.0));

  params.min_samples_leaf = 4;  // n == min_samples_leaf: single leaf
  TreeModel wide = fit_tree(X, y, params, 3);
  CHECK(wide.nodes.size() == 1);
  CHECK(wide.nodes[0].value == doctest::Approx(5.0));

  CHECK_THROWS(fit_tree_rows(X, y, {}, TreeParams{}, 1));
}

TEST_CASE("best splitter equals exhaustive enumeration on 200 random sets") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(11));  // up to 12
    const int p = 1 + static_cast<int>(rng.next_below(3));
    Eigen::MatrixXd X = random_matrix(rng, n, p);
    Eigen::VectorXd y = random_target(rng, n);

    TreeParams params;
    params.max_depth = 6;
    params.min_samples_leaf = 1 + static_cast<int>(rng.next_below(3));
    TreeModel model = fit_tree(X, y, params, 55 + trial);

    std::vector<int> rows(n);
    for (int i = 0; i < n; ++i) rows[i] = i;
    check_against_oracle(model, X, y, rows, 0, 0, params);
  }
}

TEST_CASE("training MSE never exceeds target variance") {
  Rng rng(909);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 10 + static_cast<int>(rng.next_below(50));
    Eigen::MatrixXd X = random_matrix(rng, n, 4, 32);
    Eigen::VectorXd y = random_target(rng, n);
    TreeParams params;
    params.max_depth = 1 + static_cast<int>(rng.next_below(8));
    params.min_samples_leaf = 1 + static_cast<int>(rng.next_below(4));
    TreeModel model = fit_tree(X, y, params, trial);

    const Eigen::VectorXd pred = model.predict(X);
    const double mse = (y - pred).squaredNorm() / n;
    const double var = (y.array() - y.mean()).square().sum() / n;
    CHECK(mse <= var + 1e-9);
    CHECK(model.depth() <= params.max_depth);
    for (const auto& nd : model.nodes)
      if (nd.feature == -1) CHECK(nd.n_samples >= params.min_samples_leaf);
  }
}

TEST_CASE("unrestricted tree fits distinct rows exactly") {
  Rng rng(515);
  const int n = 40;
  Eigen::MatrixXd X(n, 3);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = i;  // distinct => exact fit achievable
    X(i, 1) = rng.uniform(0, 1);
    X(i, 2) = rng.uniform(0, 1);
  }
  Eigen::VectorXd y = random_target(rng, n);
  TreeParams params;
  params.max_depth = 64;
  TreeModel model = fit_tree(X, y, params, 3);
  const Eigen::VectorXd pred = model.predict(X);
  CHECK((y - pred).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("same inputs and seed give a structurally identical tree") {
  Rng rng(616);
  Eigen::MatrixXd X = random_matrix(rng, 60, 5, 64);
  Eigen::VectorXd y = random_target(rng, 60);
  TreeParams params;
  params.max_features = MaxFeatures::sqrt();
  params.splitter = Splitter::Random;
  TreeModel a = fit_tree(X, y, params, 42);
  TreeModel b = fit_tree(X, y, params, 42);
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].feature == b.nodes[i].feature);
    CHECK(a.nodes[i].threshold == b.nodes[i].threshold);
    CHECK(a.nodes[i].value == b.nodes[i].value);
  }
  TreeModel c = fit_tree(X, y, params, 43);
  bool same = a.nodes.size() == c.nodes.size();
  if (same)
    for (std::size_t i = 0; i < a.nodes.size(); ++i)
      if (a.nodes[i].feature != c.nodes[i].feature ||
          a.nodes[i].threshold != c.nodes[i].threshold)
        same = false;
  CHECK(!same);
}

TEST_CASE("random splitter thresholds stay inside feature ranges") {
  Rng rng(717);
  Eigen::MatrixXd X = random_matrix(rng, 50, 3, 16);
  Eigen::VectorXd y = random_target(rng, 50);
  TreeParams params;
  params.splitter = Splitter::Random;
  TreeModel model = fit_tree(X, y, params, 7);
  for (const auto& nd : model.nodes) {
    if (nd.feature < 0) continue;
    CHECK(nd.threshold >= X.col(nd.feature).minCoeff());
    CHECK(nd.threshold <= X.col(nd.feature).maxCoeff());
  }
}

TEST_CASE("max_features resolution") {
  CHECK(MaxFeatures::sqrt().resolve(19) == 5);   // ceil(sqrt(19))
  CHECK(MaxFeatures::sqrt().resolve(16) == 4);
  CHECK(MaxFeatures::fixed(6).resolve(3) == 3);  // clamped to p
  CHECK(MaxFeatures::fixed(6).resolve(13) == 6);
  CHECK(MaxFeatures::all().resolve(13) == 13);
}

TEST_CASE("non-finite query is rejected") {
  Eigen::MatrixXd X(4, 1);
  X << 0, 1, 2, 3;
  Eigen::VectorXd y(4);
  y << 0, 0, 10, 10;
  TreeModel model = fit_tree(X, y, TreeParams{}, 1);
  Eigen::RowVectorXd q(1);
  q << std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(model.predict_one(q));
}
