#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "arot/features.hpp"
#include "arot/geometry.hpp"
#include "arot/ingest.hpp"
#include "arot/synthgen.hpp"

using namespace arot;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("arot_synth_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<FeatureRow> run_pipeline(const fs::path& d,
                                     JoinStats* js = nullptr) {
  RawBundle b = parse_bundle((d / "regions.csv").string(),
                             (d / "tracks.csv").string(),
                             (d / "weather.csv").string(),
                             (d / "runways.csv").string());
  auto flights = join_flights(b, js);
  return compute_features(flights, b.runways, b.weather, FeatureConfig{});
}

}  // namespace

TEST_CASE("generation is byte-identical for a fixed seed") {
  auto d1 = temp_dir("rep1");
  auto d2 = temp_dir("rep2");
  auto d3 = temp_dir("rep3");
  const AirportProfile p = builtin_profile("dca");
  auto s1 = generate_airport(p, 150, 42, d1.string());
  auto s2 = generate_airport(p, 150, 42, d2.string());
  generate_airport(p, 150, 43, d3.string());
  CHECK(s1.arot_sample_mean_s == s2.arot_sample_mean_s);
  bool any_differ = false;
  for (const char* f :
       {"regions.csv", "tracks.csv", "weather.csv", "runways.csv"}) {
    CHECK(slurp(d1 / f) == slurp(d2 / f));
    if (slurp(d1 / f) != slurp(d3 / f)) any_differ = true;
  }
  CHECK(any_differ);
}

TEST_CASE("sample statistics are calibrated to the profile targets") {
  for (const char* name : {"dca", "mia", "phx"}) {
    auto d = temp_dir(std::string("cal_") + name);
    const AirportProfile p = builtin_profile(name);
    auto s = generate_airport(p, 800, 7, d.string());
    CAPTURE(name);
    CHECK(std::fabs(s.arot_sample_mean_s - p.arot_mean_target_s) <=
          0.10 * p.arot_mean_target_s);
    CHECK(std::fabs(s.arot_sample_sigma_s - p.arot_sigma_target_s) <=
          0.25 * p.arot_sigma_target_s);
  }
}

TEST_CASE("pipeline recovers at least 95 percent of generated flights") {
  auto d = temp_dir("recover");
  const int n = 400;
  generate_airport(builtin_profile("mia"), n, 17, d.string());
  JoinStats js;
  auto rows = run_pipeline(d, &js);
  CHECK(js.distinct_keys == static_cast<std::size_t>(n));
  CHECK(rows.size() >= static_cast<std::size_t>(n) * 95 / 100);
}

TEST_CASE("noiseless AROT is recovered from the emitted features") {
  // with noise off, arot minus the documented mechanism terms must be
  // constant per runway (intercept plus runway offset)
  auto d = temp_dir("noiseless");
  AirportProfile p = builtin_profile("dca");
  p.noise_scale = 0.0;
  auto s = generate_airport(p, 300, 9, d.string());
  CHECK(s.noise_sigma_s == 0.0);

  auto rows = run_pipeline(d);
  REQUIRE(rows.size() >= 280);
  const ArotMechanism mech = arot_mechanism();

  std::map<std::string, std::pair<double, double>> lo_hi;
  for (const auto& r : rows) {
    const double headwind = headwind_component(
        r.wind_dir_deg, r.wind_speed_kt, r.runway_true_heading_deg);
    const double det =
        mech.weight_coeff_s_per_tonne * (r.max_landing_weight_kg / 1000.0) +
        mech.headwind_coeff_s_per_kt * headwind +
        mech.gate_distance_coeff_s_per_nm * r.last_point_to_runway_nm +
        mech.congestion_coeff_s_per_landing * r.landings_last_30min;
    const double resid = r.arot_s - det;
    auto [it, fresh] =
        lo_hi.try_emplace(r.runway_assigned, resid, resid);
    if (!fresh) {
      it->second.first = std::min(it->second.first, resid);
      it->second.second = std::max(it->second.second, resid);
    }
  }
  CHECK(lo_hi.size() == p.runways.size());
  for (const auto& [rwy, range] : lo_hi) {
    CAPTURE(rwy);
    CHECK(range.second - range.first < 0.05);
  }
}

TEST_CASE("every flight has one landing runway occupancy and a stop point") {
  auto d = temp_dir("shape");
  generate_airport(builtin_profile("phx"), 120, 5, d.string());
  RawBundle b = parse_bundle((d / "regions.csv").string(),
                             (d / "tracks.csv").string(),
                             (d / "weather.csv").string(),
                             (d / "runways.csv").string());
  auto flights = join_flights(b);
  REQUIRE(!flights.empty());
  for (const auto& fl : flights) {
    int runway_occ = 0;
    for (const auto& r : fl.regions)
      if (r.region_type == RegionType::Runway) ++runway_occ;
    CHECK(runway_occ == 1);
    CHECK(fl.arot_s > 0);
    // final sample is on the ground after the crossing
    const auto& last = fl.tracks.back();
    CHECK(last.timestamp > fl.threshold_crossing_time);
    CHECK(last.flight_level == 0);
    CHECK(last.speed_kt == 0);
  }
}

TEST_CASE("profile file round trips through the text form") {
  const AirportProfile p = builtin_profile("mia");
  auto d = temp_dir("profile");
  const fs::path file = d / "mia.profile";
  {
    std::ofstream out(file, std::ios::binary);
    out << profile_to_text(p);
  }
  const AirportProfile q = load_profile_file(file.string());
  CHECK(q.icao == p.icao);
  CHECK(q.arot_mean_target_s == doctest::Approx(p.arot_mean_target_s));
  CHECK(q.arot_sigma_target_s == doctest::Approx(p.arot_sigma_target_s));
  REQUIRE(q.runways.size() == p.runways.size());
  CHECK(q.runways[0].name == p.runways[0].name);
  CHECK(q.runways[0].arot_base_offset_s ==
        doctest::Approx(p.runways[0].arot_base_offset_s));
  REQUIRE(q.aircraft.size() == p.aircraft.size());
  CHECK(q.aircraft[0].max_landing_weight_kg ==
        doctest::Approx(p.aircraft[0].max_landing_weight_kg));
  CHECK(q.airlines == p.airlines);

  // generation from the reloaded profile is identical
  auto da = temp_dir("profile_a");
  auto db = temp_dir("profile_b");
  generate_airport(p, 80, 3, da.string());
  generate_airport(q, 80, 3, db.string());
  CHECK(slurp(da / "regions.csv") == slurp(db / "regions.csv"));
  CHECK(slurp(da / "tracks.csv") == slurp(db / "tracks.csv"));
}

TEST_CASE("bad inputs are rejected") {
  CHECK_THROWS(builtin_profile("lax"));
  auto d = temp_dir("bad");
  CHECK_THROWS(generate_airport(builtin_profile("dca"), 0, 1, d.string()));
  AirportProfile empty;
  empty.icao = "EMP";
  CHECK_THROWS(generate_airport(empty, 10, 1, d.string()));
  CHECK_THROWS(load_profile_file((d / "missing.profile").string()));
}
