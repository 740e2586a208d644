#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "arot/timeutil.hpp"

namespace arot {

enum class Variant { Categorical, Numerical, Mixed };

const char* variant_name(Variant v);
bool parse_variant(const std::string& s, Variant& out);

// All per-flight model inputs plus the target. Field order here is the
// documented column order of the mixed dataset and of features.csv.
struct FeatureRow {
  std::string airport;

  std::string runway_assigned;
  double runway_length_ft = 0;
  double runway_width_ft = 0;
  double runway_altitude_ft = 0;
  double runway_true_heading_deg = 0;
  std::string gate_assigned;
  double last_point_to_runway_nm = 0;
  std::string aircraft_type;
  double max_landing_weight_kg = 0;
  double distance_to_threshold_nm = 0;
  double flight_level = 0;
  double true_heading_deg = 0;
  double temperature_f = 0;
  double visibility_mi = 0;
  double wind_dir_deg = 0;
  double wind_speed_kt = 0;
  double pressure_altimeter_in = 0;
  double landings_last_30min = 0;
  double avg_arot_last_30min_s = 0;

  double arot_s = 0;

  // Prediction-point context, not a model feature.
  double snapshot_speed_kt = 0;
  UtcSeconds snapshot_time = 0;
};

struct ColumnSpec {
  std::string name;
  bool is_categorical = false;
};

// Column view of one dataset variant. Categorical columns hold label strings
// in `labels`; numeric columns live in `numeric`. A column occupies exactly
// one of the two (the other side is empty / NaN-free zero fill).
struct Dataset {
  Variant variant = Variant::Mixed;
  std::vector<ColumnSpec> columns;
  Eigen::MatrixXd numeric;  // n_rows x n_cols; categorical columns unused
  std::vector<std::vector<std::string>> labels;  // per column; empty if numeric
  Eigen::VectorXd target;
  std::vector<std::string> airport;  // per row

  Eigen::Index row_count() const { return target.size(); }
  Eigen::Index column_count() const {
    return static_cast<Eigen::Index>(columns.size());
  }

  Dataset subset(const std::vector<int>& rows) const;
  static Dataset concat(const Dataset& a, const Dataset& b);
};

// Columns of the mixed (19-feature) layout, in documented order.
const std::vector<ColumnSpec>& mixed_columns();
std::vector<ColumnSpec> variant_columns(Variant v);

// Projects feature rows onto a variant. Rows with any non-finite numeric
// feature are excluded; the count of exclusions is added to *excluded if
// given.
Dataset build_dataset(const std::vector<FeatureRow>& rows, Variant v,
                      std::size_t* excluded = nullptr);

void write_features_csv(const std::string& path,
                        const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> read_features_csv(const std::string& path);

}  // namespace arot
