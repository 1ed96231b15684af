#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vmirror {

using Timestamp = std::chrono::sys_seconds;

struct ParsedTime {
  Timestamp time;
  bool had_zone = true;  // false when the input carried no UTC offset
};

/// RFC 5322 / 2822 date, e.g. "Tue, 3 Sep 2013 14:05:00 -0400". Obsolete
/// zone names (UT, GMT, EST, ...) and missing seconds are accepted.
std::optional<ParsedTime> parse_rfc2822_date(std::string_view text);

/// ISO-8601 date-time: "2013-09-03T14:05:00Z", "+02:00" offsets, or a
/// space instead of 'T'. Fractional seconds are truncated.
std::optional<ParsedTime> parse_iso8601(std::string_view text);

std::string format_iso8601(Timestamp t);
std::string format_rfc2822(Timestamp t);

/// Whole days since the epoch (UTC midnight boundaries).
inline std::int64_t day_number(Timestamp t) {
  return std::chrono::floor<std::chrono::days>(t).time_since_epoch().count();
}

inline Timestamp day_start(std::int64_t day) {
  return Timestamp{std::chrono::days{day}};
}

}  // namespace vmirror
