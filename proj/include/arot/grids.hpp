#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arot/tree.hpp"

namespace arot {

enum class Algo { Dt, Rf, Gbm };

const char* algo_name(Algo a);
bool parse_algo(const std::string& s, Algo& out);

// One grid point, shared across the three algorithms; fields irrelevant to
// an algorithm keep their defaults and are ignored.
struct HyperParams {
  Algo algo = Algo::Dt;
  Splitter splitter = Splitter::Best;        // dt only
  int max_depth = 10;
  int min_samples_leaf = 1;
  MaxFeatures max_features = MaxFeatures::all();
  int n_estimators = 100;                    // rf, gbm
  std::optional<double> max_samples;         // rf; nullopt = full n
  double learning_rate = 0.1;                // gbm
  double subsample = 1.0;                    // gbm

  std::string to_string() const;
};

struct ParamGrid {
  Algo algo = Algo::Dt;
  // Points in documented order: axes iterate in table row order
  // (splitter, max_depth, min_samples_leaf, max_features, n_estimators,
  // max_samples, learning_rate, subsample), later axes varying fastest.
  std::vector<HyperParams> points;
};

enum class GridPreset { Full, Reduced };

// Full presets cover the complete documented search ranges:
// dt 120 points, rf 576, gbm 2880. Reduced presets are small documented
// subsets (2 points each) for fast CI and the synthetic experiments.
ParamGrid make_grid(Algo algo, GridPreset preset);

}  // namespace arot
