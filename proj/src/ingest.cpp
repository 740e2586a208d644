#include "arot/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "arot/csv.hpp"

namespace arot {
namespace {

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

void check_rejection_rate(const std::string& path, const ParseStats& st) {
  if (st.rows_read > 0 &&
      st.rows_rejected * 10 > st.rows_read) {  // >10% is systemic
    throw IngestError(path + ": " + std::to_string(st.rows_rejected) + " of " +
                      std::to_string(st.rows_read) +
                      " rows rejected (over 10% threshold)");
  }
}

}  // namespace

const char* region_type_name(RegionType t) {
  switch (t) {
    case RegionType::TMA: return "TMA";
    case RegionType::Runway: return "Runway";
    case RegionType::Taxiway: return "Taxiway";
    case RegionType::Ramp: return "Ramp";
    case RegionType::Gate: return "Gate";
  }
  return "?";
}

bool parse_region_type(const std::string& s, RegionType& out) {
  if (s == "TMA") out = RegionType::TMA;
  else if (s == "Runway") out = RegionType::Runway;
  else if (s == "Taxiway") out = RegionType::Taxiway;
  else if (s == "Ramp") out = RegionType::Ramp;
  else if (s == "Gate") out = RegionType::Gate;
  else return false;
  return true;
}

std::optional<RegionOccupancy> parse_region_row(
    const std::vector<std::string>& f, const std::vector<std::size_t>& c) {
  RegionOccupancy r;
  if (f.size() <= *std::max_element(c.begin(), c.end())) return std::nullopt;
  r.callsign = f[c[0]];
  r.airline = f[c[1]];
  r.aircraft_type = f[c[2]];
  auto mlw = parse_number(f[c[3]]);
  r.origin = f[c[4]];
  r.destination = f[c[5]];
  auto date = parse_iso_date(f[c[6]]);
  r.gate_assigned = f[c[7]];
  r.runway_assigned = f[c[8]];
  r.region_name = f[c[9]];
  bool type_ok = parse_region_type(f[c[10]], r.region_type);
  auto entered = parse_iso8601(f[c[11]]);
  auto exited = parse_iso8601(f[c[12]]);
  auto occ = parse_number(f[c[13]]);
  if (!mlw || !date || !type_ok || !entered || !exited || !occ ||
      r.callsign.empty())
    return std::nullopt;
  r.max_landing_weight_kg = *mlw;
  r.flight_date = *date;
  r.time_entered = *entered;
  r.time_exited = *exited;
  r.occupancy_time_s = *occ;
  if (r.time_exited < r.time_entered) return std::nullopt;
  if (std::fabs(r.occupancy_time_s -
                static_cast<double>(r.time_exited - r.time_entered)) > 1.0)
    return std::nullopt;
  return r;
}

std::optional<WeatherObservation> parse_weather_row(
    const std::vector<std::string>& f, const std::vector<std::size_t>& c) {
  if (f.size() <= *std::max_element(c.begin(), c.end())) return std::nullopt;
  auto ts = parse_iso8601(f[c[0]]);
  auto temp = parse_number(f[c[1]]);
  auto vis = parse_number(f[c[2]]);
  auto dir = parse_number(f[c[3]]);
  auto spd = parse_number(f[c[4]]);
  auto alt = parse_number(f[c[5]]);
  if (!ts || !temp || !vis || !dir || !spd || !alt) return std::nullopt;
  WeatherObservation w{*ts, *temp, *vis, *dir, *spd, *alt};
  if (w.visibility_mi < 0 || w.wind_speed_kt < 0 || w.wind_dir_deg < 0 ||
      w.wind_dir_deg >= 360)
    return std::nullopt;
  return w;
}

RawBundle parse_bundle(const std::string& region_path,
                       const std::string& track_path,
                       const std::string& weather_path,
                       const std::string& runway_path) {
  RawBundle b;

  {
    CsvTable t = CsvTable::read_file(region_path);
    std::vector<std::size_t> c;
    for (const char* name :
         {"callsign", "airline", "aircraft_type", "max_landing_weight_kg",
          "origin", "destination", "flight_date", "gate_assigned",
          "runway_assigned", "region_name", "region_type", "time_entered",
          "time_exited", "occupancy_time_s"})
      c.push_back(t.column(name));
    for (std::size_t i = 0; i < t.row_count(); ++i) {
      ++b.region_stats.rows_read;
      if (auto r = parse_region_row(t.row(i), c)) b.regions.push_back(*r);
      else ++b.region_stats.rows_rejected;
    }
    check_rejection_rate(region_path, b.region_stats);
  }

  {
    CsvTable t = CsvTable::read_file(track_path);
    std::vector<std::size_t> c;
    for (const char* name :
         {"timestamp", "callsign", "origin", "destination", "x_m", "y_m",
          "z_m", "flight_level", "heading_deg", "speed_kt"})
      c.push_back(t.column(name));
    for (std::size_t i = 0; i < t.row_count(); ++i) {
      ++b.track_stats.rows_read;
      const auto& f = t.row(i);
      TrackSample s;
      auto ts = f.size() > c[9] ? parse_iso8601(f[c[0]]) : std::nullopt;
      auto x = ts ? parse_number(f[c[4]]) : std::nullopt;
      auto y = x ? parse_number(f[c[5]]) : std::nullopt;
      auto z = y ? parse_number(f[c[6]]) : std::nullopt;
      auto fl = z ? parse_number(f[c[7]]) : std::nullopt;
      auto hdg = fl ? parse_number(f[c[8]]) : std::nullopt;
      auto spd = hdg ? parse_number(f[c[9]]) : std::nullopt;
      if (!spd || f[c[1]].empty() || *spd < 0 || *hdg < 0 || *hdg >= 360) {
        ++b.track_stats.rows_rejected;
        continue;
      }
      s.timestamp = *ts;
      s.callsign = f[c[1]];
      s.origin = f[c[2]];
      s.destination = f[c[3]];
      s.x_m = *x;
      s.y_m = *y;
      s.z_m = *z;
      s.flight_level = *fl;
      s.heading_deg = *hdg;
      s.speed_kt = *spd;
      b.tracks.push_back(std::move(s));
    }
    check_rejection_rate(track_path, b.track_stats);
  }

  {
    CsvTable t = CsvTable::read_file(weather_path);
    std::vector<std::size_t> c;
    for (const char* name :
         {"timestamp", "temperature_f", "visibility_mi", "wind_dir_deg",
          "wind_speed_kt", "pressure_altimeter_in"})
      c.push_back(t.column(name));
    for (std::size_t i = 0; i < t.row_count(); ++i) {
      ++b.weather_stats.rows_read;
      if (auto w = parse_weather_row(t.row(i), c)) b.weather.push_back(*w);
      else ++b.weather_stats.rows_rejected;
    }
    check_rejection_rate(weather_path, b.weather_stats);
    std::sort(b.weather.begin(), b.weather.end(),
              [](const auto& a, const auto& w) { return a.timestamp < w.timestamp; });
  }

  {
    CsvTable t = CsvTable::read_file(runway_path);
    std::vector<std::size_t> c;
    for (const char* name :
         {"airport", "runway_name", "length_ft", "width_ft", "altitude_ft",
          "true_heading_deg", "threshold_x_m", "threshold_y_m", "far_end_x_m",
          "far_end_y_m"})
      c.push_back(t.column(name));
    for (std::size_t i = 0; i < t.row_count(); ++i) {
      ++b.runway_stats.rows_read;
      const auto& f = t.row(i);
      RunwayInfo r;
      bool ok = f.size() > c[9];
      auto num = [&](std::size_t j, double& dst) {
        auto v = ok ? parse_number(f[c[j]]) : std::nullopt;
        if (v) dst = *v;
        else ok = false;
      };
      if (ok) {
        r.airport = f[c[0]];
        r.runway_name = f[c[1]];
      }
      num(2, r.length_ft);
      num(3, r.width_ft);
      num(4, r.altitude_ft);
      num(5, r.true_heading_deg);
      num(6, r.threshold_x_m);
      num(7, r.threshold_y_m);
      num(8, r.far_end_x_m);
      num(9, r.far_end_y_m);
      if (ok && (r.length_ft <= 0 || r.width_ft <= 0)) ok = false;
      if (ok) {
        const double dx = r.far_end_x_m - r.threshold_x_m;
        const double dy = r.far_end_y_m - r.threshold_y_m;
        const double seg_ft = std::hypot(dx, dy) * 3.28084;
        if (seg_ft == 0 || std::fabs(seg_ft - r.length_ft) > 0.05 * r.length_ft)
          ok = false;
      }
      if (ok) b.runways.push_back(std::move(r));
      else ++b.runway_stats.rows_rejected;
    }
    check_rejection_rate(runway_path, b.runway_stats);
  }

  return b;
}

const RunwayInfo* find_runway(const std::vector<RunwayInfo>& runways,
                              const std::string& airport,
                              const std::string& name) {
  for (const auto& r : runways)
    if (r.airport == airport && r.runway_name == name) return &r;
  return nullptr;
}

std::optional<double> extract_arot(const FlightRecord& flight) {
  const RegionOccupancy* landing = nullptr;
  for (const auto& r : flight.regions) {
    if (r.region_type != RegionType::Runway) continue;
    if (r.region_name != flight.runway_assigned) continue;
    if (!landing || r.time_entered < landing->time_entered) landing = &r;
  }
  if (!landing) return std::nullopt;
  return landing->occupancy_time_s;
}

std::vector<FlightRecord> join_flights(const RawBundle& bundle,
                                       JoinStats* stats_out) {
  JoinStats stats;

  std::map<FlightKey, FlightRecord> by_key;
  std::map<FlightKey, bool> conflicted;

  for (const auto& r : bundle.regions) {
    FlightKey key{r.callsign, r.origin, r.destination, r.flight_date};
    auto [it, inserted] = by_key.try_emplace(key);
    FlightRecord& fl = it->second;
    if (inserted) {
      fl.key = key;
      fl.airline = r.airline;
      fl.aircraft_type = r.aircraft_type;
      fl.max_landing_weight_kg = r.max_landing_weight_kg;
      fl.gate_assigned = r.gate_assigned;
      fl.runway_assigned = r.runway_assigned;
    } else if (fl.airline != r.airline || fl.aircraft_type != r.aircraft_type ||
               fl.max_landing_weight_kg != r.max_landing_weight_kg ||
               fl.gate_assigned != r.gate_assigned ||
               fl.runway_assigned != r.runway_assigned) {
      conflicted[key] = true;
    }
    fl.regions.push_back(r);
  }

  // Tracks join in by the same 4-tuple; flight_date comes from the region
  // side, so index tracks by (callsign, origin, destination) and match per
  // candidate key by calendar proximity of the track timestamps.
  std::map<std::tuple<std::string, std::string, std::string>,
           std::vector<const TrackSample*>>
      track_index;
  for (const auto& s : bundle.tracks)
    track_index[{s.callsign, s.origin, s.destination}].push_back(&s);

  std::vector<FlightRecord> out;
  stats.distinct_keys = by_key.size();

  for (auto& [key, fl] : by_key) {
    if (conflicted.count(key)) {
      ++stats.dropped_conflicting_fields;
      continue;
    }
    std::sort(fl.regions.begin(), fl.regions.end(),
              [](const auto& a, const auto& b) {
                return a.time_entered < b.time_entered;
              });

    auto it = track_index.find({key.callsign, key.origin, key.destination});
    if (it != track_index.end()) {
      // same UTC day as flight_date, or the day after (red-eye arrivals)
      const UtcSeconds day_start = static_cast<UtcSeconds>(key.flight_date) * 86400;
      const UtcSeconds day_end = day_start + 2 * 86400;
      for (const TrackSample* s : it->second)
        if (s->timestamp >= day_start && s->timestamp < day_end)
          fl.tracks.push_back(*s);
      std::sort(fl.tracks.begin(), fl.tracks.end(),
                [](const auto& a, const auto& b) {
                  return a.timestamp < b.timestamp;
                });
      // enforce strictly increasing timestamps
      fl.tracks.erase(std::unique(fl.tracks.begin(), fl.tracks.end(),
                                  [](const auto& a, const auto& b) {
                                    return a.timestamp == b.timestamp;
                                  }),
                      fl.tracks.end());
    }
    if (fl.tracks.empty()) {
      ++stats.dropped_no_tracks;
      continue;
    }

    bool has_runway_occ = std::any_of(
        fl.regions.begin(), fl.regions.end(),
        [](const auto& r) { return r.region_type == RegionType::Runway; });
    if (!has_runway_occ) {
      ++stats.dropped_no_runway_occupancy;
      continue;
    }

    auto arot = extract_arot(fl);
    if (!arot || *arot <= 0) {
      ++stats.dropped_no_matching_arot;
      continue;
    }
    fl.arot_s = *arot;
    for (const auto& r : fl.regions) {
      if (r.region_type == RegionType::Runway &&
          r.region_name == fl.runway_assigned) {
        fl.threshold_crossing_time = r.time_entered;
        break;  // regions are time-sorted; first match is the landing
      }
    }

    if (!bundle.runways.empty() &&
        !find_runway(bundle.runways, key.destination, fl.runway_assigned)) {
      ++stats.dropped_no_matching_arot;
      continue;
    }

    out.push_back(std::move(fl));
  }

  if (stats_out) *stats_out = stats;
  return out;
}

}  // namespace arot
