#pragma once

#include <cmath>
#include <random>

#include "mtlf/mtlf.hpp"

namespace mtlf::testing {

inline double rel_err(const Matrix& got, const Matrix& want) {
  const double denom = std::max(want.norm(), 1e-300);
  return (got - want).norm() / denom;
}

inline Timestamp utc(std::string_view text) { return parse_timestamp(text); }

/// Hourly panel with K entities starting at `start`, filled by `fn(t, k)`.
template <typename LoadFn, typename TempFn>
EntityPanel make_panel(int hours, int k, std::string_view start, LoadFn load, TempFn temp) {
  EntityPanel p;
  for (int e = 0; e < k; ++e) p.entity_ids.push_back("E" + std::to_string(e + 1));
  const Timestamp t0 = parse_timestamp(start);
  p.loads.resize(hours, k);
  p.temperatures.resize(hours, k);
  for (int t = 0; t < hours; ++t) {
    p.timestamps.push_back(Timestamp{t0.utc + t * kHour, t0.offset});
    for (int e = 0; e < k; ++e) {
      p.loads(t, e) = load(t, e);
      p.temperatures(t, e) = temp(t, e);
    }
  }
  p.holidays.assign(static_cast<std::size_t>(hours), false);
  return p;
}

}  // namespace mtlf::testing
