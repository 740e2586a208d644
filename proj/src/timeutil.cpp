#include "arot/timeutil.hpp"

#include <cstdio>

namespace arot {
namespace {

// Howard Hinnant's days-from-civil algorithm.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1u;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yr + (m <= 2));
}

bool valid_date(int y, int mo, int d) {
  if (y < 1900 || y > 2200 || mo < 1 || mo > 12 || d < 1 || d > 31) return false;
  return true;
}

}  // namespace

std::optional<UtcSeconds> parse_iso8601(const std::string& s) {
  int y, mo, d, h, mi;
  double sec;
  char sep;
  int pos = -1;
  int n = std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d:%lf%n", &y, &mo, &d, &sep,
                      &h, &mi, &sec, &pos);
  if (n != 7 || (sep != 'T' && sep != ' ')) return std::nullopt;
  const std::string tail = s.substr(pos);
  if (!tail.empty() && tail != "Z") return std::nullopt;
  if (!valid_date(y, mo, d) || h < 0 || h > 23 || mi < 0 || mi > 59 ||
      sec < 0 || sec >= 61)
    return std::nullopt;
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 +
         static_cast<std::int64_t>(sec);
}

std::optional<UtcDate> parse_iso_date(const std::string& s) {
  int y, mo, d;
  int pos = -1;
  if (std::sscanf(s.c_str(), "%d-%d-%d%n", &y, &mo, &d, &pos) != 3 ||
      pos != static_cast<int>(s.size()))
    return std::nullopt;
  if (!valid_date(y, mo, d)) return std::nullopt;
  return static_cast<UtcDate>(days_from_civil(y, mo, d));
}

std::string format_iso8601(UtcSeconds t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t - days * 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  int y, mo, d;
  civil_from_days(days, y, mo, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, mo, d,
                static_cast<int>(rem / 3600), static_cast<int>(rem / 60 % 60),
                static_cast<int>(rem % 60));
  return buf;
}

std::string format_iso_date(UtcDate day) {
  int y, mo, d;
  civil_from_days(day, y, mo, d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, mo, d);
  return buf;
}

}  // namespace arot
