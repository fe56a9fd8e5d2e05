#include "mtlf/panel.hpp"

#include "mtlf/errors.hpp"
#include "mtlf/linalg.hpp"

namespace mtlf {

void EntityPanel::validate() const {
  const auto k = static_cast<Eigen::Index>(entity_ids.size());
  const auto t = static_cast<Eigen::Index>(timestamps.size());
  if (k < 1) throw DataError("panel has no entities");
  if (loads.rows() != t || loads.cols() != k) {
    throw DataError("load matrix shape does not match timestamps x entities");
  }
  if (temperatures.rows() != t || temperatures.cols() != k) {
    throw DataError("temperature matrix shape does not match timestamps x entities");
  }
  if (static_cast<Eigen::Index>(holidays.size()) != t) {
    throw DataError("holiday flags length does not match timestamps");
  }
  for (Eigen::Index i = 1; i < t; ++i) {
    const auto& prev = timestamps[i - 1];
    const auto& cur = timestamps[i];
    if (cur.offset != prev.offset) {
      throw DataError("mixed UTC offsets at " + format_timestamp(cur));
    }
    if (cur.utc - prev.utc != kHour) {
      throw DataError("irregular step before " + format_timestamp(cur));
    }
  }
  if (!loads.allFinite()) throw DataError("non-finite load value");
  if (!temperatures.allFinite()) throw DataError("non-finite temperature value");
}

bool operator==(const EntityPanel& a, const EntityPanel& b) {
  return a.entity_ids == b.entity_ids && a.timestamps == b.timestamps &&
         same_values(a.loads, b.loads) && same_values(a.temperatures, b.temperatures) &&
         a.holidays == b.holidays;
}

}  // namespace mtlf
