#include "arot/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "arot/csv.hpp"
#include "arot/geometry.hpp"
#include "arot/rng.hpp"
#include "arot/timeutil.hpp"

namespace arot {

ArotMechanism arot_mechanism() {
  // Shared across all airports; see README for the generative form.
  return ArotMechanism{
      /*weight_coeff_s_per_tonne=*/0.08,
      /*headwind_coeff_s_per_kt=*/-0.20,
      /*gate_distance_coeff_s_per_nm=*/3.0,
      /*congestion_coeff_s_per_landing=*/0.5,
  };
}

namespace {

constexpr const char* kOrigins[] = {"KJFK", "KBOS", "KORD", "KATL", "KDFW",
                                    "KDEN", "KSEA", "KLAX", "KCLT", "KEWR"};

// Operations run 06:00-23:00 UTC on each of the three days, which keeps a
// flight's whole track on the calendar day of its threshold crossing.
constexpr int kDayStartHour = 6;
constexpr int kDayHours = 17;
constexpr int kNumDays = 3;
const char* kFirstDay = "2019-05-16";

struct Geometry {
  std::vector<Vec2> thresholds;
  std::vector<Vec2> far_ends;
  std::vector<Vec2> gates;
};

Geometry layout_airport(const AirportProfile& p) {
  Geometry g;
  for (std::size_t r = 0; r < p.runways.size(); ++r) {
    const auto& rw = p.runways[r];
    const double h = rw.true_heading_deg * M_PI / 180.0;
    const Vec2 dir(std::sin(h), std::cos(h));
    const Vec2 thr(3000.0 * static_cast<double>(r), 0.0);
    g.thresholds.push_back(thr);
    g.far_ends.push_back(thr + (rw.length_ft / kFeetPerMeter) * dir);
  }
  for (int i = 0; i < p.n_gates; ++i)
    g.gates.emplace_back(1500.0 + 70.0 * i, -1000.0);
  return g;
}

double round_to(double v, int decimals) {
  const double s = std::pow(10.0, decimals);
  return std::round(v * s) / s;
}

int weighted_pick(Rng& rng, const std::vector<double>& weights) {
  double total = 0;
  for (double w : weights) total += w;
  double r = rng.next_double() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    r -= weights[i];
    if (r < 0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

struct WxObs {
  UtcSeconds t;
  double temp, vis, dir, spd, press;
};

std::vector<WxObs> generate_weather(const AirportProfile& p, UtcSeconds t0,
                                    UtcSeconds t1, std::uint64_t seed) {
  std::vector<WxObs> obs;
  Rng rng(derive_seed(seed, 7));
  double dir = rng.uniform(0, 360);
  double spd = rng.uniform(4, 14);
  double vis = 10.0;
  double press = 29.92;
  for (UtcSeconds t = t0; t <= t1; t += 300) {
    const double hour = static_cast<double>(t % 86400) / 3600.0;
    const double temp = p.temperature_base_f +
                        8.0 * std::sin((hour - 9.0) * M_PI / 12.0) +
                        rng.uniform(-0.8, 0.8);
    dir = normalize_heading(dir + rng.uniform(-8, 8));
    spd = std::clamp(spd + rng.uniform(-1.5, 1.5), 0.0, 24.0);
    vis = std::clamp(vis + rng.uniform(-0.6, 0.6), 3.0, 10.0);
    press = std::clamp(press + rng.uniform(-0.01, 0.01), 29.5, 30.4);
    // store the rounded values that get written; the AROT mechanism reads
    // these, so the pipeline sees exactly the generating inputs
    obs.push_back({t, round_to(temp, 1), round_to(vis, 1),
                   std::floor(dir), round_to(spd, 1), round_to(press, 2)});
  }
  return obs;
}

const WxObs* latest_obs(const std::vector<WxObs>& obs, UtcSeconds t) {
  const WxObs* best = nullptr;
  for (const auto& o : obs) {
    if (o.t > t) break;
    best = &o;
  }
  return best;
}

struct Flight {
  UtcSeconds t_cross;
  int runway = 0;
  int aircraft = 0;
  int airline = 0;
  int gate = 0;
  std::string callsign;
  std::string origin;
  UtcDate flight_date = 0;
  double speed_kt = 0;
  UtcSeconds snapshot_time = 0;
  Vec2 stop_point;
  double gate_dist_nm = 0;
  double headwind_kt = 0;
  int count30 = 0;
  double det = 0;   // deterministic AROT component, before intercept
  double arot = 0;
};

}  // namespace

SynthSummary generate_airport(const AirportProfile& p, int n_flights,
                              std::uint64_t seed, const std::string& out_dir) {
  if (n_flights < 1)
    throw std::invalid_argument("generate_airport: n_flights must be >= 1");
  if (p.runways.empty() || p.aircraft.empty() || p.airlines.empty())
    throw std::invalid_argument("generate_airport: incomplete profile");

  std::filesystem::create_directories(out_dir);
  const Geometry geom = layout_airport(p);
  const ArotMechanism mech = arot_mechanism();

  const UtcDate day0 = *parse_iso_date(kFirstDay);
  const UtcSeconds window_len = static_cast<UtcSeconds>(kDayHours) * 3600;

  // crossing times: uniform over the three operating windows, min 4 s apart
  std::vector<UtcSeconds> crossings(n_flights);
  {
    Rng rng(derive_seed(seed, 1));
    for (int i = 0; i < n_flights; ++i) {
      const int day = static_cast<int>(rng.next_below(kNumDays));
      const UtcSeconds day_start =
          (static_cast<UtcSeconds>(day0) + day) * 86400 + kDayStartHour * 3600;
      crossings[i] = day_start + static_cast<UtcSeconds>(
                                     rng.next_below(window_len - 600));
    }
    std::sort(crossings.begin(), crossings.end());
    for (int i = 1; i < n_flights; ++i)
      if (crossings[i] < crossings[i - 1] + 4)
        crossings[i] = crossings[i - 1] + 4;
  }

  const UtcSeconds wx_start =
      static_cast<UtcSeconds>(day0) * 86400 + (kDayStartHour - 2) * 3600;
  const UtcSeconds wx_end = crossings.back() + 3600;
  const std::vector<WxObs> weather = generate_weather(p, wx_start, wx_end, seed);

  std::vector<double> runway_weights, aircraft_weights;
  for (const auto& r : p.runways) runway_weights.push_back(r.traffic_weight);
  for (const auto& a : p.aircraft) aircraft_weights.push_back(a.traffic_weight);

  const double faf_nm = 5.0;
  std::vector<Flight> flights(n_flights);

  for (int i = 0; i < n_flights; ++i) {
    Flight& fl = flights[i];
    Rng rng(derive_seed(seed, 1000 + static_cast<std::uint64_t>(i)));
    fl.t_cross = crossings[i];
    fl.flight_date = static_cast<UtcDate>(fl.t_cross / 86400);
    fl.runway = weighted_pick(rng, runway_weights);
    fl.aircraft = weighted_pick(rng, aircraft_weights);
    fl.airline = static_cast<int>(rng.next_below(p.airlines.size()));
    fl.gate = static_cast<int>(rng.next_below(geom.gates.size()));
    fl.origin = kOrigins[rng.next_below(std::size(kOrigins))];
    fl.callsign = p.airlines[fl.airline] + std::to_string(1000 + i);

    const auto& rw = p.runways[fl.runway];
    fl.speed_kt =
        round_to(rng.uniform(rw.approach_speed_lo_kt, rw.approach_speed_hi_kt), 1);

    // snapshot = first 10 s track sample inside the FAF ring
    const double approach_start_nm = 9.0;
    const UtcSeconds t_first =
        fl.t_cross -
        static_cast<UtcSeconds>(std::llround(approach_start_nm / fl.speed_kt * 3600.0));
    for (UtcSeconds t = t_first; t < fl.t_cross; t += 10) {
      const double d = static_cast<double>(fl.t_cross - t) * fl.speed_kt / 3600.0;
      if (d <= faf_nm && d > 0.06) {
        fl.snapshot_time = t;
        break;
      }
    }

    // stop point: assigned gate plus parking jitter
    fl.stop_point = geom.gates[fl.gate] +
                    Vec2(rng.normal(0, 12.0), rng.normal(0, 12.0));
    fl.stop_point.x() = round_to(fl.stop_point.x(), 1);
    fl.stop_point.y() = round_to(fl.stop_point.y(), 1);
    fl.gate_dist_nm =
        point_segment_distance(fl.stop_point, geom.thresholds[fl.runway],
                               geom.far_ends[fl.runway]) /
        kMetersPerNm;

    const WxObs* wx = latest_obs(weather, fl.snapshot_time);
    fl.headwind_kt = headwind_component(wx->dir, wx->spd, rw.true_heading_deg);

    int count = 0;
    for (int j = i - 1; j >= 0; --j) {
      if (flights[j].t_cross < fl.t_cross - 1800) break;
      if (flights[j].runway == fl.runway) ++count;
    }
    fl.count30 = count;

    const double mlw_tonnes = p.aircraft[fl.aircraft].max_landing_weight_kg / 1000.0;
    fl.det = rw.arot_base_offset_s + mech.weight_coeff_s_per_tonne * mlw_tonnes +
             mech.headwind_coeff_s_per_kt * fl.headwind_kt +
             mech.gate_distance_coeff_s_per_nm * fl.gate_dist_nm +
             mech.congestion_coeff_s_per_landing * fl.count30;
  }

  // Calibrate intercept and residual noise against the profile targets.
  double det_mean = 0;
  for (const auto& fl : flights) det_mean += fl.det;
  det_mean /= n_flights;
  double det_var = 0;
  for (const auto& fl : flights) det_var += (fl.det - det_mean) * (fl.det - det_mean);
  det_var /= std::max(1, n_flights - 1);

  const double sigma_t = p.arot_sigma_target_s;
  const double noise_sigma =
      p.noise_scale * std::sqrt(std::max(0.0, sigma_t * sigma_t - det_var));
  const double intercept = p.arot_mean_target_s - det_mean;

  {
    Rng noise_rng(derive_seed(seed, 2));
    for (auto& fl : flights) {
      fl.arot = intercept + fl.det + noise_rng.normal(0.0, noise_sigma);
      fl.arot = std::max(5.0, round_to(fl.arot, 3));
    }
  }

  // ---- write the four files ----
  const auto path = [&](const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
  };

  {
    std::ofstream out(path("runways.csv"), std::ios::binary);
    out << "airport,runway_name,length_ft,width_ft,altitude_ft,"
           "true_heading_deg,threshold_x_m,threshold_y_m,far_end_x_m,"
           "far_end_y_m\n";
    for (std::size_t r = 0; r < p.runways.size(); ++r) {
      const auto& rw = p.runways[r];
      out << p.icao << ',' << rw.name << ',' << format_double(rw.length_ft, 0)
          << ',' << format_double(rw.width_ft, 0) << ','
          << format_double(p.altitude_ft, 0) << ','
          << format_double(rw.true_heading_deg, 1) << ','
          << format_double(geom.thresholds[r].x(), 1) << ','
          << format_double(geom.thresholds[r].y(), 1) << ','
          << format_double(geom.far_ends[r].x(), 1) << ','
          << format_double(geom.far_ends[r].y(), 1) << '\n';
    }
  }

  {
    std::ofstream out(path("weather.csv"), std::ios::binary);
    out << "timestamp,temperature_f,visibility_mi,wind_dir_deg,wind_speed_kt,"
           "pressure_altimeter_in\n";
    for (const auto& o : weather) {
      out << format_iso8601(o.t) << ',' << format_double(o.temp, 1) << ','
          << format_double(o.vis, 1) << ',' << format_double(o.dir, 0) << ','
          << format_double(o.spd, 1) << ',' << format_double(o.press, 2)
          << '\n';
    }
  }

  {
    std::ofstream regions(path("regions.csv"), std::ios::binary);
    std::ofstream tracks(path("tracks.csv"), std::ios::binary);
    regions << "callsign,airline,aircraft_type,max_landing_weight_kg,origin,"
               "destination,flight_date,gate_assigned,runway_assigned,"
               "region_name,region_type,time_entered,time_exited,"
               "occupancy_time_s\n";
    tracks << "timestamp,callsign,origin,destination,x_m,y_m,z_m,flight_level,"
              "heading_deg,speed_kt\n";

    for (int i = 0; i < n_flights; ++i) {
      const Flight& fl = flights[i];
      const auto& rw = p.runways[fl.runway];
      const auto& ac = p.aircraft[fl.aircraft];
      Rng rng(derive_seed(seed, 500000 + static_cast<std::uint64_t>(i)));

      const double h = rw.true_heading_deg * M_PI / 180.0;
      const Vec2 dir(std::sin(h), std::cos(h));
      const Vec2 thr = geom.thresholds[fl.runway];

      const std::string gate_name = "G" + std::to_string(fl.gate + 1);
      const std::string date_str = format_iso_date(fl.flight_date);

      auto track_row = [&](UtcSeconds t, const Vec2& pos, double alt_ft,
                           double hdg, double spd) {
        tracks << format_iso8601(t) << ',' << fl.callsign << ',' << fl.origin
               << ',' << p.icao << ',' << format_double(pos.x(), 1) << ','
               << format_double(pos.y(), 1) << ','
               << format_double(alt_ft * 0.3048, 1) << ','
               << format_double(alt_ft / 100.0, 2) << ','
               << format_double(normalize_heading(hdg), 1) << ','
               << format_double(std::max(0.0, spd), 1) << '\n';
      };

      // approach: one sample every 10 s from ~9 NM out
      const double approach_start_nm = 9.0;
      const UtcSeconds t_first =
          fl.t_cross - static_cast<UtcSeconds>(
                           std::llround(approach_start_nm / fl.speed_kt * 3600.0));
      UtcSeconds first_track_ts = t_first;
      bool first = true;
      for (UtcSeconds t = t_first; t < fl.t_cross; t += 10) {
        const double d =
            static_cast<double>(fl.t_cross - t) * fl.speed_kt / 3600.0;
        if (d <= 0.06) break;
        if (first) {
          first_track_ts = t;
          first = false;
        }
        const Vec2 pos = thr - d * kMetersPerNm * dir;
        const double alt = std::max(30.0, 318.0 * d);
        track_row(t, pos, alt, rw.true_heading_deg + rng.uniform(-6, 6),
                  fl.speed_kt + rng.uniform(-3, 3));
      }

      // rollout and taxi to the stop point
      const double exit_along_m =
          std::min(1500.0, 0.7 * rw.length_ft / kFeetPerMeter);
      const Vec2 exit_point = thr + exit_along_m * dir;
      const UtcSeconds t_vacate =
          fl.t_cross + static_cast<UtcSeconds>(std::llround(fl.arot));
      for (int k = 1; k <= 4; ++k) {
        const double frac = k / 4.0;
        const Vec2 pos = exit_point + frac * (fl.stop_point - exit_point);
        const UtcSeconds t = t_vacate + 30 * k;
        track_row(t, k == 4 ? fl.stop_point : pos, 0.0,
                  rng.uniform(0, 360), k == 4 ? 0.0 : 12.0 * (4 - k));
      }
      const UtcSeconds t_stop = t_vacate + 120;

      auto region_row = [&](const std::string& name, const char* type,
                            UtcSeconds enter, UtcSeconds exit, double occ_s) {
        regions << fl.callsign << ',' << p.airlines[fl.airline] << ','
                << ac.type << ',' << format_double(ac.max_landing_weight_kg, 0)
                << ',' << fl.origin << ',' << p.icao << ',' << date_str << ','
                << gate_name << ',' << rw.name << ',' << name << ',' << type
                << ',' << format_iso8601(enter) << ',' << format_iso8601(exit)
                << ',' << format_double(occ_s, 3) << '\n';
      };

      region_row("TMA-" + p.icao, "TMA", first_track_ts, fl.t_cross,
                 static_cast<double>(fl.t_cross - first_track_ts));
      region_row(rw.name, "Runway", fl.t_cross, t_vacate, fl.arot);
      region_row("TWY-A", "Taxiway", t_vacate, t_stop,
                 static_cast<double>(t_stop - t_vacate));
      region_row(gate_name, "Gate", t_stop, t_stop + 1200, 1200.0);
    }
  }

  SynthSummary s;
  s.n_flights = n_flights;
  double mean = 0;
  for (const auto& fl : flights) mean += fl.arot;
  mean /= n_flights;
  double var = 0;
  for (const auto& fl : flights) var += (fl.arot - mean) * (fl.arot - mean);
  var /= std::max(1, n_flights - 1);
  s.arot_sample_mean_s = mean;
  s.arot_sample_sigma_s = std::sqrt(var);
  s.noise_sigma_s = noise_sigma;
  return s;
}

namespace {

AirportProfile dca_profile() {
  AirportProfile p;
  p.icao = "DCA";
  p.altitude_ft = 15;
  p.arot_mean_target_s = 38.15;
  p.arot_sigma_target_s = 5.46;
  p.traffic_per_hour = 24;
  p.n_gates = 12;
  p.temperature_base_f = 72;
  p.runways = {
      {"1", 7169, 150, 15.0, 158, 175, -4.0, 0.5},
      {"19", 7169, 150, 195.0, 168, 185, 0.0, 0.25},
      {"33", 5204, 150, 328.0, 150, 165, 4.0, 0.25},
  };
  p.aircraft = {
      {"A319", 62500, 2}, {"A320", 66000, 3},  {"A321", 77800, 2},
      {"B737", 66360, 2}, {"B738", 69310, 2},  {"CRJ9", 34065, 2},
      {"E75L", 34000, 1},
  };
  p.airlines = {"AAL", "DAL", "UAL", "JBU", "ASH"};
  return p;
}

AirportProfile mia_profile() {
  AirportProfile p;
  p.icao = "MIA";
  p.altitude_ft = 8;
  p.arot_mean_target_s = 52.88;
  p.arot_sigma_target_s = 12.65;
  p.traffic_per_hour = 32;
  p.n_gates = 16;
  p.temperature_base_f = 84;
  p.runways = {
      {"8L", 8600, 150, 86.0, 150, 170, -9.0, 0.3},
      {"8R", 10506, 200, 86.0, 152, 172, -3.0, 0.3},
      {"9", 13016, 150, 86.0, 155, 178, 3.0, 0.25},
      {"12", 9355, 150, 116.0, 165, 185, 8.0, 0.15},
  };
  p.aircraft = {
      {"B77W", 251290, 1}, {"B763", 145150, 2}, {"A332", 182000, 1},
      {"B738", 69310, 3},  {"A320", 66000, 2},  {"B752", 89810, 2},
  };
  p.airlines = {"AAL", "DAL", "UPS", "LAN", "AVA", "BAW"};
  return p;
}

AirportProfile phx_profile() {
  AirportProfile p;
  p.icao = "PHX";
  p.altitude_ft = 1135;
  p.arot_mean_target_s = 46.08;
  p.arot_sigma_target_s = 7.57;
  p.traffic_per_hour = 34;
  p.n_gates = 14;
  p.temperature_base_f = 95;
  p.runways = {
      {"7R", 7800, 150, 78.0, 152, 168, -6.0, 0.2},
      {"8", 11489, 150, 78.0, 158, 176, -3.0, 0.2},
      {"25L", 7800, 150, 258.0, 150, 166, 0.0, 0.2},
      {"25R", 10300, 150, 258.0, 160, 180, 3.0, 0.2},
      {"26", 11489, 150, 258.0, 162, 182, 6.0, 0.2},
  };
  p.aircraft = {
      {"A320", 66000, 3}, {"A321", 77800, 2}, {"B737", 66360, 3},
      {"B738", 69310, 3}, {"CRJ7", 30390, 1}, {"B763", 145150, 1},
  };
  p.airlines = {"AAL", "SWA", "UAL", "DAL", "SKW"};
  return p;
}

}  // namespace

AirportProfile builtin_profile(const std::string& name) {
  if (name == "dca" || name == "DCA") return dca_profile();
  if (name == "mia" || name == "MIA") return mia_profile();
  if (name == "phx" || name == "PHX") return phx_profile();
  throw std::invalid_argument("unknown builtin profile: " + name);
}

std::string profile_to_text(const AirportProfile& p) {
  std::ostringstream o;
  o << "icao=" << p.icao << "\n";
  o << "altitude_ft=" << format_double(p.altitude_ft, 0) << "\n";
  o << "arot_mean_s=" << format_double(p.arot_mean_target_s, 2) << "\n";
  o << "arot_sigma_s=" << format_double(p.arot_sigma_target_s, 2) << "\n";
  o << "traffic_per_hour=" << format_double(p.traffic_per_hour, 1) << "\n";
  o << "n_gates=" << p.n_gates << "\n";
  o << "temperature_base_f=" << format_double(p.temperature_base_f, 1) << "\n";
  o << "noise_scale=" << format_double(p.noise_scale, 3) << "\n";
  for (const auto& r : p.runways) {
    o << "runway=" << r.name << ',' << format_double(r.length_ft, 0) << ','
      << format_double(r.width_ft, 0) << ','
      << format_double(r.true_heading_deg, 1) << ','
      << format_double(r.approach_speed_lo_kt, 1) << ','
      << format_double(r.approach_speed_hi_kt, 1) << ','
      << format_double(r.arot_base_offset_s, 2) << ','
      << format_double(r.traffic_weight, 3) << "\n";
  }
  for (const auto& a : p.aircraft) {
    o << "aircraft=" << a.type << ','
      << format_double(a.max_landing_weight_kg, 0) << ','
      << format_double(a.traffic_weight, 3) << "\n";
  }
  o << "airlines=";
  for (std::size_t i = 0; i < p.airlines.size(); ++i) {
    if (i) o << ',';
    o << p.airlines[i];
  }
  o << "\n";
  return o.str();
}

AirportProfile load_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile: " + path);
  AirportProfile p;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    out.push_back(cur);
    return out;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string val = line.substr(eq + 1);
    if (key == "icao") p.icao = val;
    else if (key == "altitude_ft") p.altitude_ft = std::stod(val);
    else if (key == "arot_mean_s") p.arot_mean_target_s = std::stod(val);
    else if (key == "arot_sigma_s") p.arot_sigma_target_s = std::stod(val);
    else if (key == "traffic_per_hour") p.traffic_per_hour = std::stod(val);
    else if (key == "n_gates") p.n_gates = std::stoi(val);
    else if (key == "temperature_base_f") p.temperature_base_f = std::stod(val);
    else if (key == "noise_scale") p.noise_scale = std::stod(val);
    else if (key == "runway") {
      auto f = split(val);
      if (f.size() != 8) throw std::runtime_error("bad runway line: " + line);
      p.runways.push_back({f[0], std::stod(f[1]), std::stod(f[2]),
                           std::stod(f[3]), std::stod(f[4]), std::stod(f[5]),
                           std::stod(f[6]), std::stod(f[7])});
    } else if (key == "aircraft") {
      auto f = split(val);
      if (f.size() != 3) throw std::runtime_error("bad aircraft line: " + line);
      p.aircraft.push_back({f[0], std::stod(f[1]), std::stod(f[2])});
    } else if (key == "airlines") {
      p.airlines = split(val);
    } else {
      throw std::runtime_error("unknown profile key: " + key);
    }
  }
  if (p.icao.empty()) throw std::runtime_error("profile missing icao");
  return p;
}

}  // namespace arot
