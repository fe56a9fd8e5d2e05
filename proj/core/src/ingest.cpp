#include "mtlf/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "mtlf/errors.hpp"

namespace mtlf {
namespace {

struct Row {
  int entity;
  Timestamp ts;
  double load;
  double temperature;
  std::size_t line;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool parse_number(std::string_view text, double& value) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

class Violations {
 public:
  explicit Violations(std::size_t limit) : limit_(limit) {}

  void add(std::string message) {
    ++total_;
    if (messages_.size() < limit_) messages_.push_back(std::move(message));
  }

  [[nodiscard]] bool any() const { return total_ > 0; }

  [[noreturn]] void raise() const {
    std::ostringstream os;
    os << total_ << " ingest violation(s)";
    if (total_ > messages_.size()) os << ", first " << messages_.size();
    os << ":";
    for (const auto& m : messages_) os << "\n  " << m;
    throw DataError(os.str());
  }

 private:
  std::size_t limit_;
  std::size_t total_ = 0;
  std::vector<std::string> messages_;
};

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

EntityPanel ingest(std::istream& in, const IngestOptions& options) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw DataError("empty CSV input");
  ++line_no;
  const auto header = split(line);
  int col_ts = -1, col_entity = -1, col_load = -1, col_temp = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto h = header[i];
    if (h == "timestamp") col_ts = static_cast<int>(i);
    else if (h == "entity_id") col_entity = static_cast<int>(i);
    else if (h == "load") col_load = static_cast<int>(i);
    else if (h == "temperature") col_temp = static_cast<int>(i);
  }
  if (col_ts < 0 || col_entity < 0 || col_load < 0 || col_temp < 0) {
    throw DataError("CSV header must contain timestamp, entity_id, load and temperature");
  }
  const auto needed = static_cast<std::size_t>(std::max({col_ts, col_entity, col_load, col_temp}));

  Violations violations(options.max_reported);
  std::vector<std::string> entity_ids;
  std::unordered_map<std::string, int> entity_index;
  std::vector<Row> rows;
  std::optional<Seconds> offset;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() <= needed) {
      violations.add(where + ": expected at least " + std::to_string(needed + 1) + " fields");
      continue;
    }
    Row row{};
    row.line = line_no;
    try {
      row.ts = parse_timestamp(fields[static_cast<std::size_t>(col_ts)]);
    } catch (const DataError& e) {
      violations.add(where + ": " + e.what());
      continue;
    }
    if (!offset) offset = row.ts.offset;
    if (row.ts.offset != *offset) {
      violations.add(where + ": mixed UTC offset at " + format_timestamp(row.ts));
      continue;
    }
    const std::string id(fields[static_cast<std::size_t>(col_entity)]);
    if (id.empty()) {
      violations.add(where + ": empty entity_id");
      continue;
    }
    if (!parse_number(fields[static_cast<std::size_t>(col_load)], row.load) ||
        !std::isfinite(row.load)) {
      violations.add(where + ": invalid load for entity " + id + " at " + format_timestamp(row.ts));
      continue;
    }
    if (!parse_number(fields[static_cast<std::size_t>(col_temp)], row.temperature) ||
        !std::isfinite(row.temperature)) {
      violations.add(where + ": invalid temperature for entity " + id + " at " +
                     format_timestamp(row.ts));
      continue;
    }
    if (options.celsius) row.temperature = row.temperature * 9.0 / 5.0 + 32.0;
    auto [it, inserted] = entity_index.try_emplace(id, static_cast<int>(entity_ids.size()));
    if (inserted) entity_ids.push_back(id);
    row.entity = it->second;
    rows.push_back(row);
  }
  if (rows.empty() && !violations.any()) throw DataError("CSV contains no data rows");
  if (violations.any()) violations.raise();

  // Per-entity maps from UTC instant to row.
  std::vector<std::map<UtcTime, const Row*>> by_entity(entity_ids.size());
  for (const auto& row : rows) {
    auto [it, inserted] = by_entity[static_cast<std::size_t>(row.entity)].emplace(row.ts.utc, &row);
    if (!inserted) {
      violations.add("line " + std::to_string(row.line) + ": duplicate timestamp " +
                     format_timestamp(row.ts) + " for entity " +
                     entity_ids[static_cast<std::size_t>(row.entity)]);
    }
  }
  std::map<UtcTime, bool> grid;
  for (const auto& m : by_entity) {
    for (const auto& [utc, row] : m) grid.emplace(utc, true);
  }
  for (std::size_t e = 0; e < by_entity.size(); ++e) {
    for (const auto& [utc, unused] : grid) {
      if (!by_entity[e].contains(utc)) {
        violations.add("entity " + entity_ids[e] + " is missing timestamp " +
                       format_timestamp(Timestamp{utc, *offset}));
      }
    }
  }
  for (auto it = grid.begin(); it != grid.end(); ++it) {
    const auto next = std::next(it);
    if (next == grid.end()) break;
    if (next->first - it->first != kHour) {
      violations.add("gap between " + format_timestamp(Timestamp{it->first, *offset}) + " and " +
                     format_timestamp(Timestamp{next->first, *offset}));
    }
  }
  if (violations.any()) violations.raise();

  EntityPanel panel;
  panel.entity_ids = entity_ids;
  const auto t_count = static_cast<Eigen::Index>(grid.size());
  const auto k_count = static_cast<Eigen::Index>(entity_ids.size());
  panel.loads.resize(t_count, k_count);
  panel.temperatures.resize(t_count, k_count);
  panel.timestamps.reserve(grid.size());
  Eigen::Index t = 0;
  for (const auto& [utc, unused] : grid) {
    panel.timestamps.push_back(Timestamp{utc, *offset});
    for (Eigen::Index e = 0; e < k_count; ++e) {
      const Row* row = by_entity[static_cast<std::size_t>(e)].at(utc);
      panel.loads(t, e) = row->load;
      panel.temperatures(t, e) = row->temperature;
    }
    ++t;
  }
  panel.holidays.assign(grid.size(), false);
  if (!options.holidays.empty()) apply_holidays(panel, read_holidays(options.holidays));
  panel.validate();
  return panel;
}

EntityPanel ingest(const std::filesystem::path& csv, const IngestOptions& options) {
  std::ifstream in(csv);
  if (!in) throw DataError("cannot open " + csv.string());
  return ingest(in, options);
}

std::set<std::string> read_holidays(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open holiday file " + path.string());
  std::set<std::string> dates;
  std::string line;
  while (std::getline(in, line)) {
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    dates.insert(format_date(parse_date(text)));
  }
  return dates;
}

void apply_holidays(EntityPanel& panel, const std::set<std::string>& dates) {
  panel.holidays.assign(panel.timestamps.size(), false);
  for (std::size_t t = 0; t < panel.timestamps.size(); ++t) {
    panel.holidays[t] = dates.contains(format_date(local_date(panel.timestamps[t])));
  }
}

void write_panel_csv(const EntityPanel& panel, std::ostream& out) {
  out << "timestamp,entity_id,load,temperature\n";
  for (int t = 0; t < panel.num_hours(); ++t) {
    const auto ts = format_timestamp(panel.timestamps[static_cast<std::size_t>(t)]);
    for (int e = 0; e < panel.num_entities(); ++e) {
      out << ts << ',' << panel.entity_ids[static_cast<std::size_t>(e)] << ','
          << format_double(panel.loads(t, e)) << ',' << format_double(panel.temperatures(t, e))
          << '\n';
    }
  }
}

void write_panel_csv(const EntityPanel& panel, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_panel_csv(panel, out);
  if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace mtlf
