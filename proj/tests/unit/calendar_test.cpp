#include <gtest/gtest.h>

#include <set>

#include "mtlf/calendar.hpp"
#include "mtlf/errors.hpp"
#include "test_helpers.hpp"

using namespace mtlf;
using mtlf::testing::utc;

TEST(Calendar, TuesdayMidnightIsFirstWeekdayType) {
  EXPECT_EQ(calendar_type(utc("2017-01-03T00:00:00Z"), false), 1);
}

TEST(Calendar, SaturdayLastHourIsType48) {
  EXPECT_EQ(calendar_type(utc("2017-01-07T23:00:00Z"), false), 48);
}

TEST(Calendar, HolidayMovesWeekdayIntoWeekendBlock) {
  EXPECT_EQ(calendar_type(utc("2017-01-04T11:00:00Z"), true), 36);
  EXPECT_EQ(calendar_type(utc("2017-01-04T11:00:00Z"), false), 12);
}

TEST(Calendar, UsesLocalClockHourOfFixedOffset) {
  // 03:00 UTC on a Monday is Sunday 22:00 at -05:00.
  const auto ts = utc("2017-01-08T22:00:00-05:00");
  EXPECT_EQ(local_hour(ts), 22);
  EXPECT_EQ(calendar_type(ts, false), 47);
}

TEST(Calendar, WeekOfHoursPartitionsTypes) {
  const auto start = utc("2017-01-02T00:00:00Z");  // Monday
  std::set<int> weekday, weekend;
  for (int h = 0; h < 24 * 7; ++h) {
    const Timestamp ts{start.utc + h * kHour, start.offset};
    const int c = calendar_type(ts, false);
    ASSERT_GE(c, 1);
    ASSERT_LE(c, 48);
    (is_weekend(ts) ? weekend : weekday).insert(c);
  }
  EXPECT_EQ(weekday.size(), 24u);
  EXPECT_EQ(*weekday.begin(), 1);
  EXPECT_EQ(*weekday.rbegin(), 24);
  EXPECT_EQ(weekend.size(), 24u);
  EXPECT_EQ(*weekend.begin(), 25);
  EXPECT_EQ(*weekend.rbegin(), 48);
}

TEST(CalendarScheme, CountsAndIds) {
  for (const char* id : {"hour-daytype", "hour", "daytype", "constant"}) {
    const auto s = CalendarScheme::from_id(id);
    EXPECT_EQ(s.id(), id);
  }
  EXPECT_EQ(CalendarScheme::from_id("hour-daytype").count(), 48);
  EXPECT_EQ(CalendarScheme::from_id("hour").count(), 24);
  EXPECT_EQ(CalendarScheme::from_id("daytype").count(), 2);
  EXPECT_EQ(CalendarScheme::from_id("constant").count(), 1);
  EXPECT_THROW(CalendarScheme::from_id("weekly"), ConfigError);
}

TEST(CalendarScheme, CoarseSchemes) {
  const auto sat = utc("2017-01-07T05:00:00Z");
  EXPECT_EQ(CalendarScheme::from_id("hour").classify(sat, false), 6);
  EXPECT_EQ(CalendarScheme::from_id("daytype").classify(sat, false), 2);
  EXPECT_EQ(CalendarScheme::from_id("daytype").classify(utc("2017-01-05T05:00:00Z"), false), 1);
  EXPECT_EQ(CalendarScheme::from_id("daytype").classify(utc("2017-01-05T05:00:00Z"), true), 2);
  EXPECT_EQ(CalendarScheme::from_id("constant").classify(sat, true), 1);
}

TEST(Timestamp, ParseAndFormatRoundTrip) {
  for (const char* text : {"2017-03-12T02:00:00-05:00", "2016-02-29T23:00:00Z",
                           "2020-12-31T00:00:00+05:30"}) {
    EXPECT_EQ(format_timestamp(parse_timestamp(text)), text);
  }
  EXPECT_EQ(format_timestamp(parse_timestamp("2017-01-01 05:00-05:00")),
            "2017-01-01T05:00:00-05:00");
  EXPECT_EQ(parse_timestamp("2017-01-01T05:00:00-05:00").utc,
            parse_timestamp("2017-01-01T10:00:00Z").utc);
}

TEST(Timestamp, RejectsMalformed) {
  for (const char* text : {"2017-01-01", "2017-13-01T00:00:00Z", "2017-02-30T00:00:00Z",
                           "2017-01-01T24:00:00Z", "2017-01-01T00:00:00", "2017-01-01T00:00:00+5",
                           "2017-01-01T00:00:00Zjunk"}) {
    EXPECT_THROW(parse_timestamp(text), DataError) << text;
  }
}
