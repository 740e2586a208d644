#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace arot {

struct RunwaySpec {
  std::string name;
  double length_ft = 7000;
  double width_ft = 150;
  double true_heading_deg = 0;
  double approach_speed_lo_kt = 150;
  double approach_speed_hi_kt = 180;
  double arot_base_offset_s = 0;  // runway-specific shift of the AROT mean
  double traffic_weight = 1;
};

struct AircraftSpec {
  std::string type;
  double max_landing_weight_kg = 60000;
  double traffic_weight = 1;
};

// Generator calibration targets and vocabularies for one synthetic airport.
// The AROT mechanism (coefficients in synthgen.cpp) is shared across
// airports; profiles differ in intercept, fleet mix, runway layout and
// weather, which is what makes cross-airport transfer learnable.
struct AirportProfile {
  std::string icao;
  double altitude_ft = 0;
  double arot_mean_target_s = 45;
  double arot_sigma_target_s = 7;
  double traffic_per_hour = 16;
  int n_gates = 12;
  double temperature_base_f = 70;
  double noise_scale = 1.0;  // 0 disables the Gaussian AROT noise
  std::vector<RunwaySpec> runways;
  std::vector<AircraftSpec> aircraft;
  std::vector<std::string> airlines;
};

// Built-in profiles calibrated to realistic per-airport AROT statistics.
AirportProfile builtin_profile(const std::string& name);  // dca | mia | phx
AirportProfile load_profile_file(const std::string& path);
std::string profile_to_text(const AirportProfile& p);

struct SynthSummary {
  int n_flights = 0;
  double arot_sample_mean_s = 0;
  double arot_sample_sigma_s = 0;
  double noise_sigma_s = 0;  // calibrated residual noise actually applied
};

// Writes regions.csv, tracks.csv, weather.csv, runways.csv under out_dir.
// Byte-identical output for identical (profile, n_flights, seed).
SynthSummary generate_airport(const AirportProfile& profile, int n_flights,
                              std::uint64_t seed, const std::string& out_dir);

// The documented AROT mechanism, exposed for tests.
struct ArotMechanism {
  double weight_coeff_s_per_tonne;
  double headwind_coeff_s_per_kt;
  double gate_distance_coeff_s_per_nm;
  double congestion_coeff_s_per_landing;
};
ArotMechanism arot_mechanism();

}  // namespace arot
