#pragma once

#include <optional>
#include <vector>

#include "arot/dataset.hpp"
#include "arot/records.hpp"

namespace arot {

struct ApproachSnapshot {
  double distance_to_threshold_nm = 0;
  double flight_level = 0;
  double true_heading_deg = 0;
  double speed_kt = 0;
  UtcSeconds snapshot_time = 0;
};

struct FeatureConfig {
  double faf_distance_nm = 5.0;
  double heading_tolerance_deg = 45.0;
  std::int64_t weather_staleness_s = 90 * 60;
  std::int64_t rolling_window_s = 30 * 60;
  double default_arot_s = 50.0;
};

struct FeatureTallies {
  std::size_t no_prediction_point = 0;
  std::size_t no_weather = 0;
  std::size_t no_post_landing_samples = 0;
  std::size_t emitted = 0;
};

// Earliest airborne sample inside the FAF distance ring whose heading is
// aligned with the runway within the tolerance. Distances are horizontal
// (x/y plane) to the runway threshold.
std::optional<ApproachSnapshot> locate_prediction_point(
    const FlightRecord& flight, const RunwayInfo& runway,
    const FeatureConfig& cfg);

// Latest observation at or before t that is no older than the staleness cap.
// Observations must be time-sorted.
std::optional<WeatherObservation> attach_weather(
    UtcSeconds t, const std::vector<WeatherObservation>& observations,
    std::int64_t max_staleness_s);

struct LandingEvent {
  std::string runway;
  UtcSeconds threshold_crossing_time = 0;
  double arot_s = 0;
};

struct RollingStats {
  int count = 0;
  double avg_arot_s = 0;
};

// Count and mean AROT over landings on `runway` in the half-open window
// [t - window, t). Empty window falls back to the most recent AROT on that
// runway before t, then to default_arot_s.
RollingStats runway_rolling_stats(const std::vector<LandingEvent>& landings,
                                  const std::string& runway, UtcSeconds t,
                                  std::int64_t window_s, double default_arot_s);

// Point-to-segment distance (NM) from the final track sample to the runway
// centerline segment. nullopt when the flight has no sample after threshold
// crossing.
std::optional<double> last_point_distance(const FlightRecord& flight,
                                          const RunwayInfo& runway);

// Full per-flight feature computation over a joined flight list.
// Flights failing any step are excluded and tallied.
std::vector<FeatureRow> compute_features(
    const std::vector<FlightRecord>& flights,
    const std::vector<RunwayInfo>& runways,
    const std::vector<WeatherObservation>& weather, const FeatureConfig& cfg,
    FeatureTallies* tallies = nullptr);

}  // namespace arot
