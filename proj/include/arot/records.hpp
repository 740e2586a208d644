#pragma once

#include <string>
#include <vector>

#include "arot/timeutil.hpp"

namespace arot {

enum class RegionType { TMA, Runway, Taxiway, Ramp, Gate };

const char* region_type_name(RegionType t);
bool parse_region_type(const std::string& s, RegionType& out);

struct RegionOccupancy {
  std::string callsign;
  std::string airline;
  std::string aircraft_type;
  double max_landing_weight_kg = 0;
  std::string origin;
  std::string destination;
  UtcDate flight_date = 0;
  std::string gate_assigned;
  std::string runway_assigned;
  std::string region_name;
  RegionType region_type = RegionType::TMA;
  UtcSeconds time_entered = 0;
  UtcSeconds time_exited = 0;
  double occupancy_time_s = 0;
};

struct TrackSample {
  UtcSeconds timestamp = 0;
  std::string callsign;
  std::string origin;
  std::string destination;
  double x_m = 0;
  double y_m = 0;
  double z_m = 0;
  double flight_level = 0;  // hundreds of feet
  double heading_deg = 0;
  double speed_kt = 0;  // true airspeed
};

struct WeatherObservation {
  UtcSeconds timestamp = 0;
  double temperature_f = 0;
  double visibility_mi = 0;
  double wind_dir_deg = 0;
  double wind_speed_kt = 0;
  double pressure_altimeter_in = 0;
};

struct RunwayInfo {
  std::string airport;
  std::string runway_name;
  double length_ft = 0;
  double width_ft = 0;
  double altitude_ft = 0;
  double true_heading_deg = 0;
  double threshold_x_m = 0;
  double threshold_y_m = 0;
  double far_end_x_m = 0;
  double far_end_y_m = 0;
};

// Join key across the region and track sources.
struct FlightKey {
  std::string callsign;
  std::string origin;
  std::string destination;
  UtcDate flight_date = 0;

  bool operator==(const FlightKey&) const = default;
  bool operator<(const FlightKey& o) const {
    if (callsign != o.callsign) return callsign < o.callsign;
    if (origin != o.origin) return origin < o.origin;
    if (destination != o.destination) return destination < o.destination;
    return flight_date < o.flight_date;
  }
};

struct FlightRecord {
  FlightKey key;
  std::string airline;
  std::string aircraft_type;
  double max_landing_weight_kg = 0;
  std::string gate_assigned;
  std::string runway_assigned;
  std::vector<RegionOccupancy> regions;  // sorted by time_entered
  std::vector<TrackSample> tracks;       // strictly increasing timestamps
  double arot_s = 0;
  UtcSeconds threshold_crossing_time = 0;
};

}  // namespace arot
