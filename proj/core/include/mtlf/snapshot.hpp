#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mtlf/backtest.hpp"

namespace mtlf {

/// Persisted learner state: entity ids plus everything in BacktestState.
///
/// Binary layout, little-endian throughout:
///   8 bytes  magic "MTLFSNAP"
///   u32      format version (currently 1)
///   payload  entity ids, calendar scheme, forgetting factors, temperature
///            context settings, per calendar type the load-transition and
///            observation models (M, Σ, P, γ, λ, update count), temperature
///            accumulators, recent loads, last timestamp, hours seen
/// Doubles are stored as raw IEEE-754 bit patterns, so a round trip is exact.
struct Snapshot {
  std::vector<std::string> entity_ids;
  BacktestState state;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const Snapshot& snapshot, std::ostream& out);
void save_snapshot(const Snapshot& snapshot, const std::filesystem::path& path);

/// Throws DataError on a bad magic header, unsupported version or truncated
/// or inconsistent payload.
Snapshot read_snapshot(std::istream& in);
Snapshot load_snapshot(const std::filesystem::path& path);

}  // namespace mtlf
