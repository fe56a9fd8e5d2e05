#include "mtlf/timestamp.hpp"

#include <charconv>
#include <cstdio>

#include "mtlf/errors.hpp"

namespace mtlf {
namespace {

int parse_int(std::string_view text, std::size_t pos, std::size_t len,
              std::string_view whole) {
  if (pos + len > text.size()) {
    throw DataError("malformed timestamp '" + std::string(whole) + "'");
  }
  int value = 0;
  const char* first = text.data() + pos;
  const char* last = first + len;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw DataError("malformed timestamp '" + std::string(whole) + "'");
  }
  return value;
}

void expect(std::string_view text, std::size_t pos, std::string_view chars,
            std::string_view whole) {
  if (pos >= text.size() || chars.find(text[pos]) == std::string_view::npos) {
    throw DataError("malformed timestamp '" + std::string(whole) + "'");
  }
}

std::chrono::year_month_day checked_date(int y, int m, int d,
                                         std::string_view whole) {
  std::chrono::year_month_day ymd{std::chrono::year{y},
                                  std::chrono::month{static_cast<unsigned>(m)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) {
    throw DataError("invalid calendar date in '" + std::string(whole) + "'");
  }
  return ymd;
}

}  // namespace

std::chrono::year_month_day parse_date(std::string_view text) {
  if (text.size() != 10) {
    throw DataError("malformed date '" + std::string(text) + "'");
  }
  expect(text, 4, "-", text);
  expect(text, 7, "-", text);
  return checked_date(parse_int(text, 0, 4, text), parse_int(text, 5, 2, text),
                      parse_int(text, 8, 2, text), text);
}

Timestamp parse_timestamp(std::string_view text) {
  const std::string_view whole = text;
  if (text.size() < 17) {
    throw DataError("malformed timestamp '" + std::string(whole) + "'");
  }
  const auto date = parse_date(text.substr(0, 10));
  expect(text, 10, "T ", whole);
  const int hour = parse_int(text, 11, 2, whole);
  expect(text, 13, ":", whole);
  const int minute = parse_int(text, 14, 2, whole);
  std::size_t pos = 16;
  int second = 0;
  if (pos < text.size() && text[pos] == ':') {
    second = parse_int(text, pos + 1, 2, whole);
    pos += 3;
  }
  if (hour > 23 || minute > 59 || second > 59) {
    throw DataError("time of day out of range in '" + std::string(whole) + "'");
  }
  Seconds offset{0};
  if (pos < text.size() && text[pos] == 'Z') {
    pos += 1;
  } else {
    expect(text, pos, "+-", whole);
    const int sign = text[pos] == '-' ? -1 : 1;
    const int oh = parse_int(text, pos + 1, 2, whole);
    expect(text, pos + 3, ":", whole);
    const int om = parse_int(text, pos + 4, 2, whole);
    if (oh > 18 || om > 59) {
      throw DataError("UTC offset out of range in '" + std::string(whole) + "'");
    }
    offset = Seconds{sign * (oh * 3600 + om * 60)};
    pos += 6;
  }
  if (pos != text.size()) {
    throw DataError("trailing characters in timestamp '" + std::string(whole) + "'");
  }
  const LocalTime local{std::chrono::local_days{date}.time_since_epoch() +
                        std::chrono::hours{hour} + std::chrono::minutes{minute} +
                        Seconds{second}};
  return Timestamp{UtcTime{local.time_since_epoch() - offset}, offset};
}

std::string format_date(std::chrono::year_month_day date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(date.year()),
                unsigned(date.month()), unsigned(date.day()));
  return buf;
}

std::string format_timestamp(const Timestamp& ts) {
  const auto local = ts.local();
  const auto day = std::chrono::floor<std::chrono::days>(local);
  const std::chrono::hh_mm_ss tod{local - day};
  char buf[64];
  const auto ymd = std::chrono::year_month_day{day};
  const long off = static_cast<long>(ts.offset.count());
  if (off == 0) {
    std::snprintf(buf, sizeof buf, "%sT%02ld:%02ld:%02ldZ", format_date(ymd).c_str(),
                  long(tod.hours().count()), long(tod.minutes().count()),
                  long(tod.seconds().count()));
  } else {
    const long a = off < 0 ? -off : off;
    std::snprintf(buf, sizeof buf, "%sT%02ld:%02ld:%02ld%c%02ld:%02ld",
                  format_date(ymd).c_str(), long(tod.hours().count()),
                  long(tod.minutes().count()), long(tod.seconds().count()),
                  off < 0 ? '-' : '+', a / 3600, (a % 3600) / 60);
  }
  return buf;
}

std::chrono::year_month_day local_date(const Timestamp& ts) {
  return std::chrono::year_month_day{
      std::chrono::floor<std::chrono::days>(ts.local())};
}

int local_hour(const Timestamp& ts) {
  const auto local = ts.local();
  const auto day = std::chrono::floor<std::chrono::days>(local);
  return static_cast<int>(
      std::chrono::duration_cast<std::chrono::hours>(local - day).count());
}

}  // namespace mtlf
