#include "arot/dataset.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "arot/csv.hpp"

namespace arot {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Categorical: return "categorical";
    case Variant::Numerical: return "numerical";
    case Variant::Mixed: return "mixed";
  }
  return "?";
}

bool parse_variant(const std::string& s, Variant& out) {
  if (s == "categorical") out = Variant::Categorical;
  else if (s == "numerical") out = Variant::Numerical;
  else if (s == "mixed") out = Variant::Mixed;
  else return false;
  return true;
}

const std::vector<ColumnSpec>& mixed_columns() {
  static const std::vector<ColumnSpec> cols = {
      {"runway_assigned", true},
      {"runway_length_ft", false},
      {"runway_width_ft", false},
      {"runway_altitude_ft", false},
      {"runway_true_heading_deg", false},
      {"gate_assigned", true},
      {"last_point_to_runway_nm", false},
      {"aircraft_type", true},
      {"max_landing_weight_kg", false},
      {"distance_to_threshold_nm", false},
      {"flight_level", false},
      {"true_heading_deg", false},
      {"temperature_f", false},
      {"visibility_mi", false},
      {"wind_dir_deg", false},
      {"wind_speed_kt", false},
      {"pressure_altimeter_in", false},
      {"landings_last_30min", false},
      {"avg_arot_last_30min_s", false},
  };
  return cols;
}

namespace {

// The six numerical equivalences dropped by the categorical variant.
bool is_numerical_equivalence(const std::string& name) {
  return name == "runway_length_ft" || name == "runway_width_ft" ||
         name == "runway_altitude_ft" || name == "runway_true_heading_deg" ||
         name == "max_landing_weight_kg" || name == "last_point_to_runway_nm";
}

double numeric_value(const FeatureRow& r, const std::string& name) {
  if (name == "runway_length_ft") return r.runway_length_ft;
  if (name == "runway_width_ft") return r.runway_width_ft;
  if (name == "runway_altitude_ft") return r.runway_altitude_ft;
  if (name == "runway_true_heading_deg") return r.runway_true_heading_deg;
  if (name == "last_point_to_runway_nm") return r.last_point_to_runway_nm;
  if (name == "max_landing_weight_kg") return r.max_landing_weight_kg;
  if (name == "distance_to_threshold_nm") return r.distance_to_threshold_nm;
  if (name == "flight_level") return r.flight_level;
  if (name == "true_heading_deg") return r.true_heading_deg;
  if (name == "temperature_f") return r.temperature_f;
  if (name == "visibility_mi") return r.visibility_mi;
  if (name == "wind_dir_deg") return r.wind_dir_deg;
  if (name == "wind_speed_kt") return r.wind_speed_kt;
  if (name == "pressure_altimeter_in") return r.pressure_altimeter_in;
  if (name == "landings_last_30min") return r.landings_last_30min;
  if (name == "avg_arot_last_30min_s") return r.avg_arot_last_30min_s;
  throw std::logic_error("unknown numeric column " + name);
}

const std::string& label_value(const FeatureRow& r, const std::string& name) {
  if (name == "runway_assigned") return r.runway_assigned;
  if (name == "gate_assigned") return r.gate_assigned;
  if (name == "aircraft_type") return r.aircraft_type;
  throw std::logic_error("unknown categorical column " + name);
}

}  // namespace

std::vector<ColumnSpec> variant_columns(Variant v) {
  std::vector<ColumnSpec> out;
  for (const auto& c : mixed_columns()) {
    if (v == Variant::Categorical && is_numerical_equivalence(c.name)) continue;
    if (v == Variant::Numerical && c.is_categorical) continue;
    out.push_back(c);
  }
  return out;
}

Dataset build_dataset(const std::vector<FeatureRow>& rows, Variant v,
                      std::size_t* excluded) {
  Dataset d;
  d.variant = v;
  d.columns = variant_columns(v);

  std::vector<const FeatureRow*> keep;
  keep.reserve(rows.size());
  for (const auto& r : rows) {
    bool ok = std::isfinite(r.arot_s);
    for (const auto& c : d.columns) {
      if (c.is_categorical) {
        if (label_value(r, c.name).empty()) ok = false;
      } else if (!std::isfinite(numeric_value(r, c.name))) {
        ok = false;
      }
    }
    if (ok) keep.push_back(&r);
    else if (excluded) ++*excluded;
  }

  const Eigen::Index n = static_cast<Eigen::Index>(keep.size());
  const Eigen::Index p = d.column_count();
  d.numeric = Eigen::MatrixXd::Zero(n, p);
  d.labels.resize(p);
  d.target.resize(n);
  d.airport.resize(n);

  for (Eigen::Index j = 0; j < p; ++j) {
    const auto& c = d.columns[j];
    if (c.is_categorical) {
      d.labels[j].resize(n);
      for (Eigen::Index i = 0; i < n; ++i)
        d.labels[j][i] = label_value(*keep[i], c.name);
    } else {
      for (Eigen::Index i = 0; i < n; ++i)
        d.numeric(i, j) = numeric_value(*keep[i], c.name);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    d.target[i] = keep[i]->arot_s;
    d.airport[i] = keep[i]->airport;
  }
  return d;
}

Dataset Dataset::subset(const std::vector<int>& rows) const {
  Dataset d;
  d.variant = variant;
  d.columns = columns;
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index p = column_count();
  d.numeric = Eigen::MatrixXd::Zero(n, p);
  d.labels.resize(p);
  d.target.resize(n);
  d.airport.resize(n);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!labels[j].empty()) {
      d.labels[j].resize(n);
      for (Eigen::Index i = 0; i < n; ++i) d.labels[j][i] = labels[j][rows[i]];
    } else {
      for (Eigen::Index i = 0; i < n; ++i) d.numeric(i, j) = numeric(rows[i], j);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    d.target[i] = target[rows[i]];
    d.airport[i] = airport[rows[i]];
  }
  return d;
}

Dataset Dataset::concat(const Dataset& a, const Dataset& b) {
  if (a.columns.size() != b.columns.size())
    throw std::invalid_argument("concat: schema mismatch");
  Dataset d;
  d.variant = a.variant;
  d.columns = a.columns;
  const Eigen::Index n = a.row_count() + b.row_count();
  const Eigen::Index p = d.column_count();
  d.numeric = Eigen::MatrixXd::Zero(n, p);
  d.labels.resize(p);
  d.target.resize(n);
  d.airport.resize(n);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!a.labels[j].empty() || !b.labels[j].empty()) {
      d.labels[j].reserve(n);
      d.labels[j] = a.labels[j];
      d.labels[j].insert(d.labels[j].end(), b.labels[j].begin(),
                         b.labels[j].end());
    } else {
      d.numeric.col(j) << a.numeric.col(j), b.numeric.col(j);
    }
  }
  d.target << a.target, b.target;
  for (Eigen::Index i = 0; i < a.row_count(); ++i) d.airport[i] = a.airport[i];
  for (Eigen::Index i = 0; i < b.row_count(); ++i)
    d.airport[a.row_count() + i] = b.airport[i];
  return d;
}

void write_features_csv(const std::string& path,
                        const std::vector<FeatureRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t j = 0; j < mixed_columns().size(); ++j) {
    if (j) out << ',';
    out << mixed_columns()[j].name;
  }
  out << ",arot_s,airport\n";
  for (const auto& r : rows) {
    bool first = true;
    for (const auto& c : mixed_columns()) {
      if (!first) out << ',';
      first = false;
      if (c.is_categorical) out << csv_quote(label_value(r, c.name));
      else out << format_double(numeric_value(r, c.name), 6);
    }
    out << ',' << format_double(r.arot_s, 6) << ',' << csv_quote(r.airport)
        << '\n';
  }
}

std::vector<FeatureRow> read_features_csv(const std::string& path) {
  CsvTable t = CsvTable::read_file(path);
  std::vector<std::size_t> cols;
  for (const auto& c : mixed_columns()) cols.push_back(t.column(c.name));
  const std::size_t arot_col = t.column("arot_s");
  const std::size_t airport_col = t.column("airport");

  std::vector<FeatureRow> rows;
  rows.reserve(t.row_count());
  for (std::size_t i = 0; i < t.row_count(); ++i) {
    const auto& f = t.row(i);
    FeatureRow r;
    auto set_num = [&](double& dst, const std::string& s) {
      dst = std::strtod(s.c_str(), nullptr);
    };
    std::size_t j = 0;
    for (const auto& c : mixed_columns()) {
      const std::string& s = f[cols[j++]];
      if (c.name == "runway_assigned") r.runway_assigned = s;
      else if (c.name == "gate_assigned") r.gate_assigned = s;
      else if (c.name == "aircraft_type") r.aircraft_type = s;
      else if (c.name == "runway_length_ft") set_num(r.runway_length_ft, s);
      else if (c.name == "runway_width_ft") set_num(r.runway_width_ft, s);
      else if (c.name == "runway_altitude_ft") set_num(r.runway_altitude_ft, s);
      else if (c.name == "runway_true_heading_deg") set_num(r.runway_true_heading_deg, s);
      else if (c.name == "last_point_to_runway_nm") set_num(r.last_point_to_runway_nm, s);
      else if (c.name == "max_landing_weight_kg") set_num(r.max_landing_weight_kg, s);
      else if (c.name == "distance_to_threshold_nm") set_num(r.distance_to_threshold_nm, s);
      else if (c.name == "flight_level") set_num(r.flight_level, s);
      else if (c.name == "true_heading_deg") set_num(r.true_heading_deg, s);
      else if (c.name == "temperature_f") set_num(r.temperature_f, s);
      else if (c.name == "visibility_mi") set_num(r.visibility_mi, s);
      else if (c.name == "wind_dir_deg") set_num(r.wind_dir_deg, s);
      else if (c.name == "wind_speed_kt") set_num(r.wind_speed_kt, s);
      else if (c.name == "pressure_altimeter_in") set_num(r.pressure_altimeter_in, s);
      else if (c.name == "landings_last_30min") set_num(r.landings_last_30min, s);
      else if (c.name == "avg_arot_last_30min_s") set_num(r.avg_arot_last_30min_s, s);
    }
    set_num(r.arot_s, f[arot_col]);
    r.airport = f[airport_col];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace arot
