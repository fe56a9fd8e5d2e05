#pragma once

#include <string>
#include <vector>

#include "mtlf/timestamp.hpp"
#include "mtlf/types.hpp"

namespace mtlf {

/// Aligned hourly series of loads and temperatures for K entities.
///
/// Row t of `loads` and `temperatures` belongs to `timestamps[t]`. All
/// timestamps share one UTC offset and advance by exactly one hour.
struct EntityPanel {
  std::vector<std::string> entity_ids;
  std::vector<Timestamp> timestamps;
  RowMatrix loads;
  RowMatrix temperatures;
  std::vector<bool> holidays;

  [[nodiscard]] int num_entities() const { return static_cast<int>(entity_ids.size()); }
  [[nodiscard]] int num_hours() const { return static_cast<int>(timestamps.size()); }

  /// Throws DataError when any invariant is violated.
  void validate() const;

  friend bool operator==(const EntityPanel& a, const EntityPanel& b);
};

}  // namespace mtlf
