#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace mtlf {

using Seconds = std::chrono::seconds;
using UtcTime = std::chrono::sys_seconds;
using LocalTime = std::chrono::local_seconds;

inline constexpr Seconds kHour{3600};

/// An instant together with the fixed UTC offset it was recorded in.
struct Timestamp {
  UtcTime utc{};
  Seconds offset{0};

  [[nodiscard]] LocalTime local() const {
    return LocalTime{utc.time_since_epoch() + offset};
  }

  friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

/// Parses `YYYY-MM-DDTHH:MM[:SS](Z|+HH:MM|-HH:MM)`. A space is accepted in
/// place of `T`. Throws DataError on malformed input.
Timestamp parse_timestamp(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SS+HH:MM` (or `Z` for a zero offset).
std::string format_timestamp(const Timestamp& ts);

/// Parses `YYYY-MM-DD`.
std::chrono::year_month_day parse_date(std::string_view text);

std::string format_date(std::chrono::year_month_day date);

/// Local calendar date of the timestamp.
std::chrono::year_month_day local_date(const Timestamp& ts);

/// Local clock hour in [0, 23].
int local_hour(const Timestamp& ts);

}  // namespace mtlf
