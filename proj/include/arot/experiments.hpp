#pragma once

#include <string>
#include <vector>

#include "arot/dataset.hpp"
#include "arot/modelsel.hpp"

namespace arot {

struct ExperimentConfig {
  std::vector<std::string> airports;       // e.g. {"DCA","MIA","PHX"}
  std::string data_root;                   // <root>/<airport>/features.csv
  std::vector<Variant> variants;
  std::vector<Algo> algos;
  std::vector<double> alphas;              // generalized experiment only
  int repeats = 9;                         // per-alpha repeats
  GridPreset grid = GridPreset::Reduced;
  NestedCvConfig nested;                   // unseen experiment only
  std::uint64_t master_seed = 7;
  std::string out_dir;
  int jobs = 1;
  bool write_plots = true;
};

struct UnseenCell {
  std::string airport;
  Variant variant = Variant::Mixed;
  Algo algo = Algo::Dt;
  CvReport report;
  double arot_mean_s = 0;
  double arot_sigma_s = 0;
  EvalMetrics metrics;  // from mean fold MAE vs the airport's AROT sigma
};

struct UnseenReport {
  std::vector<UnseenCell> cells;
};

// Nested-CV assessment per (airport, variant, algo). Writes
// unseen_report.csv (per-fold rows), unseen_summary.csv (AROT range, MAE
// mean and stddev, uncertainty reduction) and one box-plot SVG per airport.
UnseenReport run_unseen_experiment(const ExperimentConfig& cfg);

enum class SourceMode { OneSource, TwoSource };

struct GeneralizedCell {
  SourceMode mode = SourceMode::OneSource;
  std::vector<std::string> sources;
  std::string target;
  Algo algo = Algo::Dt;
  double alpha = 0;
  int repeat = 0;
  double mae_generalized_s = 0;
  double mae_normal_s = 0;
  int n_test = 0;
  bool skipped = false;  // alpha share too small for the inner CV
};

struct GeneralizedReport {
  std::vector<GeneralizedCell> cells;
};

// Source-to-target experiment on the numerical variant. One-source runs all
// ordered (source, target) pairs with the first configured algorithm
// restricted to rf; two-source runs every complement pair for each target
// with each configured algorithm. Generalized and Normal models share the
// same held-out rows per (alpha, repeat).
GeneralizedReport run_generalized_experiment(const ExperimentConfig& cfg,
                                             bool one_source, bool two_source);

struct PredictionPointRow {
  std::string airport;
  std::string runway;
  int n_flights = 0;
  double mean_distance_nm = 0;
  double mean_speed_kt = 0;
  double mean_seconds_to_threshold = 0;
};

// Per (airport, runway) means of the prediction-point snapshot; seconds to
// threshold is the mean of per-flight distance/speed ratios.
std::vector<PredictionPointRow> prediction_point_summary(
    const std::vector<FeatureRow>& rows);

void write_prediction_points_csv(const std::string& path,
                                 const std::vector<PredictionPointRow>& rows);

// Per-flight snapshot context (runway, distance, speed) kept alongside
// features.csv so the prediction-point report can be rebuilt later.
void write_snapshots_csv(const std::string& path,
                         const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> read_snapshots_csv(const std::string& path);

void write_unseen_report_csv(const std::string& path, const UnseenReport& rep);
void write_unseen_summary_csv(const std::string& path, const UnseenReport& rep);
void write_generalized_report_csv(const std::string& path,
                                  const GeneralizedReport& rep);

}  // namespace arot
