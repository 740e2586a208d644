#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace arot {

// Seconds since the Unix epoch, UTC. All timestamps in the pipeline are
// normalized to this at parse time.
using UtcSeconds = std::int64_t;

// Days since epoch for calendar dates (flight_date).
using UtcDate = std::int32_t;

// Parses "YYYY-MM-DDTHH:MM:SS" with optional trailing "Z" or fractional
// seconds (truncated). Returns nullopt on malformed input.
std::optional<UtcSeconds> parse_iso8601(const std::string& s);

// Parses "YYYY-MM-DD".
std::optional<UtcDate> parse_iso_date(const std::string& s);

std::string format_iso8601(UtcSeconds t);
std::string format_iso_date(UtcDate d);

}  // namespace arot
