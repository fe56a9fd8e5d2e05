#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "mtlf/panel.hpp"

namespace mtlf {

struct IngestOptions {
  /// Convert the temperature column from °C to °F.
  bool celsius = false;
  /// Optional holiday calendar: one ISO date (YYYY-MM-DD) per line.
  std::filesystem::path holidays;
  /// Maximum number of violations listed in an error message.
  std::size_t max_reported = 10;
};

/// Reads a long-format CSV with the columns `timestamp`, `entity_id`, `load`
/// and `temperature` (any order, extra columns ignored). Entities keep the
/// order of first appearance.
///
/// Rejects with a DataError listing the first violations: unparsable or
/// non-finite values, duplicate (entity, timestamp) pairs, mixed UTC offsets,
/// entities with differing timestamp sets and gaps in the hourly grid.
EntityPanel ingest(const std::filesystem::path& csv, const IngestOptions& options = {});
EntityPanel ingest(std::istream& csv, const IngestOptions& options = {});

/// Parses a holiday calendar. Blank lines and lines starting with '#' are
/// skipped.
std::set<std::string> read_holidays(const std::filesystem::path& path);

/// Marks every hour whose local date is listed.
void apply_holidays(EntityPanel& panel, const std::set<std::string>& dates);

/// Writes a panel in the ingest format with shortest round-trip numbers.
void write_panel_csv(const EntityPanel& panel, std::ostream& out);
void write_panel_csv(const EntityPanel& panel, const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace mtlf
