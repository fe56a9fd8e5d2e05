#pragma once

#include <string>
#include <string_view>

#include "mtlf/timestamp.hpp"

namespace mtlf {

/// Calendar types are 1-based, in [1, count()].
using CalendarType = int;

/// Weekday non-holiday hours map to hour+1 in [1, 24]; weekend and holiday
/// hours map to hour+25 in [25, 48].
CalendarType calendar_type(const Timestamp& ts, bool holiday);

/// True for Saturday and Sunday in local time.
bool is_weekend(const Timestamp& ts);

/// Classification of timestamps into calendar types.
///
/// `hour-daytype` is the default 48-type scheme. The coarser schemes exist
/// for synthetic experiments and small-sample tests:
///   - `hour`:     hour + 1, ignoring the day type (24 types)
///   - `daytype`:  1 for weekday, 2 for weekend or holiday
///   - `constant`: a single type
class CalendarScheme {
 public:
  enum class Kind { HourDaytype, Hour, Daytype, Constant };

  CalendarScheme() = default;
  explicit CalendarScheme(Kind kind) : kind_(kind) {}

  /// Throws ConfigError for unknown ids.
  static CalendarScheme from_id(std::string_view id);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::string_view id() const;
  [[nodiscard]] int count() const;
  [[nodiscard]] CalendarType classify(const Timestamp& ts, bool holiday) const;

  friend bool operator==(const CalendarScheme&, const CalendarScheme&) = default;

 private:
  Kind kind_ = Kind::HourDaytype;
};

}  // namespace mtlf
