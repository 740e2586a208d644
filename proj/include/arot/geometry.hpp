#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace arot {

inline constexpr double kMetersPerNm = 1852.0;
inline constexpr double kFeetPerMeter = 3.28084;

using Vec2 = Eigen::Vector2d;

// Distance from point p to the closed segment [a, b], in the same units.
inline double point_segment_distance(const Vec2& p, const Vec2& a,
                                     const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  double t = (p - a).dot(ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

// Smallest absolute angular difference between two headings, degrees.
inline double heading_difference(double a_deg, double b_deg) {
  double d = std::fmod(std::fabs(a_deg - b_deg), 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

inline double normalize_heading(double deg) {
  double d = std::fmod(deg, 360.0);
  if (d < 0) d += 360.0;
  return d;
}

// Wind component along the runway direction; positive = headwind for an
// aircraft landing on that runway heading.
inline double headwind_component(double wind_dir_deg, double wind_speed_kt,
                                 double runway_heading_deg) {
  const double rad = (wind_dir_deg - runway_heading_deg) * M_PI / 180.0;
  return wind_speed_kt * std::cos(rad);
}

}  // namespace arot
