#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arot/records.hpp"

namespace arot {

struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseStats {
  std::size_t rows_read = 0;
  std::size_t rows_rejected = 0;
};

struct RawBundle {
  std::vector<RegionOccupancy> regions;
  std::vector<TrackSample> tracks;
  std::vector<WeatherObservation> weather;  // time-sorted
  std::vector<RunwayInfo> runways;
  ParseStats region_stats, track_stats, weather_stats, runway_stats;
};

struct JoinStats {
  std::size_t distinct_keys = 0;
  std::size_t emitted = 0;
  std::size_t dropped_no_runway_occupancy = 0;
  std::size_t dropped_no_tracks = 0;
  std::size_t dropped_conflicting_fields = 0;
  std::size_t dropped_no_matching_arot = 0;
};

// Parses the four input files. Malformed rows are skipped and tallied;
// more than 10% skipped in any one file is fatal. Missing file or missing
// column is fatal.
RawBundle parse_bundle(const std::string& region_path,
                       const std::string& track_path,
                       const std::string& weather_path,
                       const std::string& runway_path);

// Joins region and track rows on (callsign, origin, destination, flight_date)
// and extracts the AROT target. Flights missing a runway occupancy, missing
// tracks, carrying conflicting static fields, or whose assigned runway never
// appears as an occupied runway region are dropped and tallied.
std::vector<FlightRecord> join_flights(const RawBundle& bundle,
                                       JoinStats* stats = nullptr);

// AROT of the first runway occupancy (by entry time) whose region name
// matches the assigned runway. nullopt when no occupancy matches.
std::optional<double> extract_arot(const FlightRecord& flight);

// Row parsers, exposed for the parser-equivalence tests.
std::optional<RegionOccupancy> parse_region_row(
    const std::vector<std::string>& fields,
    const std::vector<std::size_t>& cols);
std::optional<WeatherObservation> parse_weather_row(
    const std::vector<std::string>& fields,
    const std::vector<std::size_t>& cols);

const RunwayInfo* find_runway(const std::vector<RunwayInfo>& runways,
                              const std::string& airport,
                              const std::string& name);

}  // namespace arot
