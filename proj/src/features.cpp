#include "arot/features.hpp"

#include <algorithm>
#include <cmath>

#include "arot/geometry.hpp"
#include "arot/ingest.hpp"

namespace arot {

std::optional<ApproachSnapshot> locate_prediction_point(
    const FlightRecord& flight, const RunwayInfo& runway,
    const FeatureConfig& cfg) {
  const Vec2 threshold(runway.threshold_x_m, runway.threshold_y_m);
  for (const auto& s : flight.tracks) {
    if (s.timestamp >= flight.threshold_crossing_time) break;
    if (s.flight_level <= 0) continue;
    const double dist_nm =
        (Vec2(s.x_m, s.y_m) - threshold).norm() / kMetersPerNm;
    if (dist_nm > cfg.faf_distance_nm) continue;
    if (heading_difference(s.heading_deg, runway.true_heading_deg) >
        cfg.heading_tolerance_deg)
      continue;
    if (dist_nm <= 0) continue;
    return ApproachSnapshot{dist_nm, s.flight_level, s.heading_deg, s.speed_kt,
                            s.timestamp};
  }
  return std::nullopt;
}

std::optional<WeatherObservation> attach_weather(
    UtcSeconds t, const std::vector<WeatherObservation>& observations,
    std::int64_t max_staleness_s) {
  // latest obs with timestamp <= t
  auto it = std::upper_bound(
      observations.begin(), observations.end(), t,
      [](UtcSeconds v, const WeatherObservation& o) { return v < o.timestamp; });
  if (it == observations.begin()) return std::nullopt;
  --it;
  if (t - it->timestamp > max_staleness_s) return std::nullopt;
  return *it;
}

RollingStats runway_rolling_stats(const std::vector<LandingEvent>& landings,
                                  const std::string& runway, UtcSeconds t,
                                  std::int64_t window_s,
                                  double default_arot_s) {
  int count = 0;
  double sum = 0;
  for (const auto& l : landings) {
    if (l.runway != runway) continue;
    if (l.threshold_crossing_time >= t - window_s &&
        l.threshold_crossing_time < t) {
      ++count;
      sum += l.arot_s;
    }
  }
  if (count > 0) return {count, sum / count};

  // fallback: most recent AROT on this runway strictly before t
  const LandingEvent* latest = nullptr;
  for (const auto& l : landings) {
    if (l.runway != runway || l.threshold_crossing_time >= t) continue;
    if (!latest ||
        l.threshold_crossing_time > latest->threshold_crossing_time)
      latest = &l;
  }
  return {0, latest ? latest->arot_s : default_arot_s};
}

std::optional<double> last_point_distance(const FlightRecord& flight,
                                          const RunwayInfo& runway) {
  const TrackSample* last = nullptr;
  for (const auto& s : flight.tracks)
    if (s.timestamp > flight.threshold_crossing_time) last = &s;
  if (!last) return std::nullopt;
  const double d_m = point_segment_distance(
      Vec2(last->x_m, last->y_m),
      Vec2(runway.threshold_x_m, runway.threshold_y_m),
      Vec2(runway.far_end_x_m, runway.far_end_y_m));
  return d_m / kMetersPerNm;
}

std::vector<FeatureRow> compute_features(
    const std::vector<FlightRecord>& flights,
    const std::vector<RunwayInfo>& runways,
    const std::vector<WeatherObservation>& weather, const FeatureConfig& cfg,
    FeatureTallies* tallies_out) {
  FeatureTallies tallies;

  // Rolling stats read earlier flights only, so process in threshold-crossing
  // order. Ties broken by join key to stay deterministic.
  std::vector<const FlightRecord*> ordered;
  ordered.reserve(flights.size());
  for (const auto& f : flights) ordered.push_back(&f);
  std::sort(ordered.begin(), ordered.end(),
            [](const FlightRecord* a, const FlightRecord* b) {
              if (a->threshold_crossing_time != b->threshold_crossing_time)
                return a->threshold_crossing_time < b->threshold_crossing_time;
              return a->key < b->key;
            });

  std::vector<LandingEvent> landing_log;
  landing_log.reserve(ordered.size());
  std::vector<FeatureRow> rows;
  rows.reserve(ordered.size());

  for (const FlightRecord* fp : ordered) {
    const FlightRecord& fl = *fp;
    // Every landed flight feeds the rolling log, even if excluded as a row.
    LandingEvent ev{fl.runway_assigned, fl.threshold_crossing_time, fl.arot_s};

    const RunwayInfo* rw =
        find_runway(runways, fl.key.destination, fl.runway_assigned);
    if (!rw) {
      landing_log.push_back(ev);
      ++tallies.no_prediction_point;
      continue;
    }

    auto snap = locate_prediction_point(fl, *rw, cfg);
    if (!snap) {
      landing_log.push_back(ev);
      ++tallies.no_prediction_point;
      continue;
    }
    auto wx = attach_weather(snap->snapshot_time, weather,
                             cfg.weather_staleness_s);
    if (!wx) {
      landing_log.push_back(ev);
      ++tallies.no_weather;
      continue;
    }
    auto lpd = last_point_distance(fl, *rw);
    if (!lpd) {
      landing_log.push_back(ev);
      ++tallies.no_post_landing_samples;
      continue;
    }
    RollingStats rs = runway_rolling_stats(landing_log, fl.runway_assigned,
                                           fl.threshold_crossing_time,
                                           cfg.rolling_window_s,
                                           cfg.default_arot_s);

    FeatureRow r;
    r.airport = fl.key.destination;
    r.runway_assigned = fl.runway_assigned;
    r.runway_length_ft = rw->length_ft;
    r.runway_width_ft = rw->width_ft;
    r.runway_altitude_ft = rw->altitude_ft;
    r.runway_true_heading_deg = rw->true_heading_deg;
    r.gate_assigned = fl.gate_assigned;
    r.last_point_to_runway_nm = *lpd;
    r.aircraft_type = fl.aircraft_type;
    r.max_landing_weight_kg = fl.max_landing_weight_kg;
    r.distance_to_threshold_nm = snap->distance_to_threshold_nm;
    r.flight_level = snap->flight_level;
    r.true_heading_deg = snap->true_heading_deg;
    r.temperature_f = wx->temperature_f;
    r.visibility_mi = wx->visibility_mi;
    r.wind_dir_deg = wx->wind_dir_deg;
    r.wind_speed_kt = wx->wind_speed_kt;
    r.pressure_altimeter_in = wx->pressure_altimeter_in;
    r.landings_last_30min = rs.count;
    r.avg_arot_last_30min_s = rs.avg_arot_s;
    r.arot_s = fl.arot_s;
    r.snapshot_speed_kt = snap->speed_kt;
    r.snapshot_time = snap->snapshot_time;
    rows.push_back(std::move(r));
    ++tallies.emitted;

    landing_log.push_back(ev);
  }

  if (tallies_out) *tallies_out = tallies;
  return rows;
}

}  // namespace arot
