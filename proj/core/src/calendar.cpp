#include "mtlf/calendar.hpp"

#include "mtlf/errors.hpp"

namespace mtlf {

bool is_weekend(const Timestamp& ts) {
  const std::chrono::weekday wd{std::chrono::floor<std::chrono::days>(ts.local())};
  return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

CalendarType calendar_type(const Timestamp& ts, bool holiday) {
  const int hour = local_hour(ts);
  return (holiday || is_weekend(ts)) ? hour + 25 : hour + 1;
}

CalendarScheme CalendarScheme::from_id(std::string_view id) {
  if (id == "hour-daytype") return CalendarScheme{Kind::HourDaytype};
  if (id == "hour") return CalendarScheme{Kind::Hour};
  if (id == "daytype") return CalendarScheme{Kind::Daytype};
  if (id == "constant") return CalendarScheme{Kind::Constant};
  throw ConfigError("unknown calendar scheme '" + std::string(id) +
                    "' (expected hour-daytype, hour, daytype or constant)");
}

std::string_view CalendarScheme::id() const {
  switch (kind_) {
    case Kind::HourDaytype: return "hour-daytype";
    case Kind::Hour: return "hour";
    case Kind::Daytype: return "daytype";
    case Kind::Constant: return "constant";
  }
  return "hour-daytype";
}

int CalendarScheme::count() const {
  switch (kind_) {
    case Kind::HourDaytype: return 48;
    case Kind::Hour: return 24;
    case Kind::Daytype: return 2;
    case Kind::Constant: return 1;
  }
  return 48;
}

CalendarType CalendarScheme::classify(const Timestamp& ts, bool holiday) const {
  switch (kind_) {
    case Kind::HourDaytype: return calendar_type(ts, holiday);
    case Kind::Hour: return local_hour(ts) + 1;
    case Kind::Daytype: return (holiday || is_weekend(ts)) ? 2 : 1;
    case Kind::Constant: return 1;
  }
  return 1;
}

}  // namespace mtlf
