#include "arot/grids.hpp"

#include <sstream>

#include "arot/csv.hpp"

namespace arot {

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::Dt: return "dt";
    case Algo::Rf: return "rf";
    case Algo::Gbm: return "gbm";
  }
  return "?";
}

bool parse_algo(const std::string& s, Algo& out) {
  if (s == "dt") out = Algo::Dt;
  else if (s == "rf") out = Algo::Rf;
  else if (s == "gbm") out = Algo::Gbm;
  else return false;
  return true;
}

std::string HyperParams::to_string() const {
  std::ostringstream o;
  o << "max_depth=" << max_depth << ";min_samples_leaf=" << min_samples_leaf
    << ";max_features=" << max_features.to_string();
  switch (algo) {
    case Algo::Dt:
      o << ";splitter=" << (splitter == Splitter::Best ? "best" : "random");
      break;
    case Algo::Rf:
      o << ";n_estimators=" << n_estimators << ";max_samples="
        << (max_samples ? format_double(*max_samples, 1) : std::string("none"));
      break;
    case Algo::Gbm:
      o << ";n_estimators=" << n_estimators
        << ";learning_rate=" << format_double(learning_rate, 3)
        << ";subsample=" << format_double(subsample, 1);
      break;
  }
  return o.str();
}

namespace {

// "auto" in the documented ranges maps to all features (the regression
// convention of the library the ranges come from).
const std::vector<MaxFeatures> kMaxFeaturesAxis = {
    MaxFeatures::sqrt(), MaxFeatures::fixed(10), MaxFeatures::all()};

ParamGrid dt_grid(GridPreset preset) {
  std::vector<Splitter> splitters;
  std::vector<int> depths, leaves;
  std::vector<MaxFeatures> feats;
  if (preset == GridPreset::Full) {
    splitters = {Splitter::Best, Splitter::Random};
    depths = {3, 10, 30, 100, 300};
    leaves = {1, 5, 10, 30};
    feats = kMaxFeaturesAxis;
  } else {
    splitters = {Splitter::Best};
    depths = {3, 10};
    leaves = {10};
    feats = {MaxFeatures::all()};
  }
  ParamGrid g;
  g.algo = Algo::Dt;
  for (auto sp : splitters)
    for (int d : depths)
      for (int l : leaves)
        for (const auto& mf : feats) {
          HyperParams h;
          h.algo = Algo::Dt;
          h.splitter = sp;
          h.max_depth = d;
          h.min_samples_leaf = l;
          h.max_features = mf;
          g.points.push_back(h);
        }
  return g;
}

ParamGrid rf_grid(GridPreset preset) {
  std::vector<int> depths, leaves, estimators;
  std::vector<MaxFeatures> feats;
  std::vector<std::optional<double>> samples;
  if (preset == GridPreset::Full) {
    depths = {3, 10, 30, 100};
    leaves = {1, 5, 10, 30};
    feats = kMaxFeaturesAxis;
    estimators = {10, 30, 100, 300};
    samples = {0.1, 0.3, std::nullopt};
  } else {
    depths = {10};
    leaves = {5, 10};
    feats = {MaxFeatures::sqrt()};
    estimators = {30};
    samples = {std::nullopt};
  }
  ParamGrid g;
  g.algo = Algo::Rf;
  for (int d : depths)
    for (int l : leaves)
      for (const auto& mf : feats)
        for (int ne : estimators)
          for (const auto& ms : samples) {
            HyperParams h;
            h.algo = Algo::Rf;
            h.max_depth = d;
            h.min_samples_leaf = l;
            h.max_features = mf;
            h.n_estimators = ne;
            h.max_samples = ms;
            g.points.push_back(h);
          }
  return g;
}

ParamGrid gbm_grid(GridPreset preset) {
  std::vector<int> depths, leaves, estimators;
  std::vector<MaxFeatures> feats;
  std::vector<double> rates, subsamples;
  if (preset == GridPreset::Full) {
    depths = {3, 10, 30, 100};
    leaves = {1, 5, 10, 30};
    feats = kMaxFeaturesAxis;
    estimators = {30, 100, 300, 900};
    rates = {0.001, 0.003, 0.01, 0.03, 0.1};
    subsamples = {0.1, 0.3, 1.0};
  } else {
    depths = {3};
    leaves = {5, 10};
    feats = {MaxFeatures::all()};
    estimators = {100};
    rates = {0.1};
    subsamples = {0.3};
  }
  ParamGrid g;
  g.algo = Algo::Gbm;
  for (int d : depths)
    for (int l : leaves)
      for (const auto& mf : feats)
        for (int ne : estimators)
          for (double lr : rates)
            for (double ss : subsamples) {
              HyperParams h;
              h.algo = Algo::Gbm;
              h.max_depth = d;
              h.min_samples_leaf = l;
              h.max_features = mf;
              h.n_estimators = ne;
              h.learning_rate = lr;
              h.subsample = ss;
              g.points.push_back(h);
            }
  return g;
}

}  // namespace

ParamGrid make_grid(Algo algo, GridPreset preset) {
  switch (algo) {
    case Algo::Dt: return dt_grid(preset);
    case Algo::Rf: return rf_grid(preset);
    case Algo::Gbm: return gbm_grid(preset);
  }
  return {};
}

}  // namespace arot
