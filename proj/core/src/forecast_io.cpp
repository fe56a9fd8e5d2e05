#include "mtlf/forecast_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include "mtlf/errors.hpp"
#include "mtlf/ingest.hpp"

namespace mtlf {

using nlohmann::json;

std::vector<ForecastRecord> to_records(const Forecast& forecast,
                                       const std::vector<std::string>& entity_ids,
                                       const RowMatrix* actuals) {
  std::vector<ForecastRecord> out;
  const auto issued = format_timestamp(forecast.issued_at);
  for (const auto& step : forecast.steps) {
    const auto ts = format_timestamp(step.timestamp);
    for (Eigen::Index e = 0; e < step.mean.size(); ++e) {
      ForecastRecord r;
      r.issued_at = issued;
      r.timestamp = ts;
      r.horizon_step = step.horizon_step;
      r.calendar_type = step.calendar_type;
      r.entity_id = entity_ids.at(static_cast<std::size_t>(e));
      r.mean = step.mean[e];
      r.variance = step.cov(e, e);
      r.cov_row.resize(static_cast<std::size_t>(step.cov.cols()));
      for (Eigen::Index j = 0; j < step.cov.cols(); ++j) {
        r.cov_row[static_cast<std::size_t>(j)] = step.cov(e, j);
      }
      if (actuals) r.actual = (*actuals)(step.horizon_step - 1, e);
      out.push_back(std::move(r));
    }
  }
  return out;
}

void write_jsonl(const std::vector<ForecastRecord>& records, std::ostream& out) {
  for (const auto& r : records) {
    json j{{"issued_at", r.issued_at},     {"timestamp", r.timestamp},
           {"horizon_step", r.horizon_step}, {"calendar_type", r.calendar_type},
           {"entity_id", r.entity_id},     {"mean", r.mean},
           {"variance", r.variance},       {"cov_row", r.cov_row}};
    if (r.actual) j["actual"] = *r.actual;
    out << j.dump() << '\n';
  }
}

std::vector<ForecastRecord> read_jsonl(std::istream& in) {
  std::vector<ForecastRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      ForecastRecord r;
      r.issued_at = j.at("issued_at").get<std::string>();
      r.timestamp = j.at("timestamp").get<std::string>();
      r.horizon_step = j.at("horizon_step").get<int>();
      r.calendar_type = j.value("calendar_type", 0);
      r.entity_id = j.at("entity_id").get<std::string>();
      r.mean = j.at("mean").get<double>();
      r.variance = j.at("variance").get<double>();
      r.cov_row = j.value("cov_row", std::vector<double>{});
      if (j.contains("actual") && !j["actual"].is_null()) r.actual = j["actual"].get<double>();
      if (r.horizon_step < 1) throw DataError("horizon_step must be >= 1");
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw DataError("forecast log line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("forecast log line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ForecastRecord> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open forecast log " + path.string());
  return read_jsonl(in);
}

void write_forecast_csv(const std::vector<ForecastRecord>& records, std::ostream& out) {
  const bool with_actual = !records.empty() && records.front().actual.has_value();
  out << "issued_at,timestamp,horizon_step,entity_id,mean,variance";
  if (with_actual) out << ",actual";
  out << '\n';
  for (const auto& r : records) {
    out << r.issued_at << ',' << r.timestamp << ',' << r.horizon_step << ',' << r.entity_id << ','
        << format_double(r.mean) << ',' << format_double(r.variance);
    if (with_actual) out << ',' << (r.actual ? format_double(*r.actual) : std::string());
    out << '\n';
  }
}

MetricsReport report_from_records(const std::vector<ForecastRecord>& records,
                                  const std::string& method) {
  std::vector<std::string> ids;
  std::unordered_map<std::string, int> index;
  int horizon = 0;
  for (const auto& r : records) {
    if (index.try_emplace(r.entity_id, static_cast<int>(ids.size())).second) {
      ids.push_back(r.entity_id);
    }
    horizon = std::max(horizon, r.horizon_step);
  }
  MetricsReport report(method, ids, horizon);
  std::unordered_map<std::string, bool> issues;
  for (const auto& r : records) {
    if (!r.actual) {
      throw DataError("record for " + r.entity_id + " at " + r.timestamp + " has no actual");
    }
    report.record(index.at(r.entity_id), r.horizon_step, *r.actual, r.mean, true);
    issues.emplace(r.issued_at, true);
  }
  report.forecasts = static_cast<long long>(issues.size());
  return report;
}

TotalMode parse_total_mode(const std::string& text) {
  if (text == "pooled") return TotalMode::Pooled;
  if (text == "mean") return TotalMode::Mean;
  if (text == "both") return TotalMode::Both;
  throw ConfigError("total_mode must be pooled, mean or both (got '" + text + "')");
}

std::string to_string(TotalMode mode) {
  switch (mode) {
    case TotalMode::Pooled: return "pooled";
    case TotalMode::Mean: return "mean";
    case TotalMode::Both: return "both";
  }
  return "pooled";
}

namespace {

std::string cell(double v) { return format_double(v); }

json stats_json(const ErrorStats& s) {
  json j{{"count", s.count}, {"zero_excluded", s.zero_excluded}};
  j["mape"] = s.percentage_count > 0 ? json(s.mape()) : json(nullptr);
  j["rmse"] = s.count > 0 ? json(s.rmse()) : json(nullptr);
  return j;
}

}  // namespace

void write_metrics_csv(const std::vector<const MetricsReport*>& reports, TotalMode mode,
                       std::ostream& out) {
  if (reports.empty()) throw DataError("no reports to write");
  out << "entity";
  for (const auto* r : reports) out << ',' << r->method << "_MAPE," << r->method << "_RMSE";
  out << '\n';
  const auto& ids = reports.front()->entity_ids;
  for (std::size_t e = 0; e < ids.size(); ++e) {
    out << ids[e];
    for (const auto* r : reports) {
      const auto& s = r->per_entity[e];
      out << ',' << (s.percentage_count ? cell(s.mape()) : "") << ','
          << (s.count ? cell(s.rmse()) : "");
    }
    out << '\n';
  }
  if (mode != TotalMode::Mean) {
    out << "TOTAL";
    for (const auto* r : reports) {
      out << ',' << (r->total.percentage_count ? cell(r->total.mape()) : "") << ','
          << (r->total.count ? cell(r->total.rmse()) : "");
    }
    out << '\n';
  }
  if (mode != TotalMode::Pooled) {
    out << "TOTAL_MEAN";
    for (const auto* r : reports) {
      double rmse_sum = 0.0;
      for (const auto& s : r->per_entity) rmse_sum += s.count ? s.rmse() : 0.0;
      out << ',' << (r->total.percentage_count ? cell(r->mean_entity_mape()) : "") << ','
          << (r->total.count ? cell(rmse_sum / static_cast<double>(r->per_entity.size())) : "");
    }
    out << '\n';
  }
}

std::string metrics_json(const std::vector<const MetricsReport*>& reports, TotalMode mode) {
  json root{{"total_mode", to_string(mode)}, {"methods", json::object()}};
  for (const auto* r : reports) {
    json m{{"forecasts", r->forecasts}, {"entities", json::object()}};
    for (std::size_t e = 0; e < r->entity_ids.size(); ++e) {
      m["entities"][r->entity_ids[e]] = stats_json(r->per_entity[e]);
    }
    if (mode != TotalMode::Mean) m["TOTAL"] = stats_json(r->total);
    if (mode != TotalMode::Pooled && r->total.percentage_count) {
      m["TOTAL_MEAN"] = json{{"mape", r->mean_entity_mape()}};
    }
    json horizon = json::array();
    for (const auto& s : r->per_horizon) horizon.push_back(stats_json(s));
    m["per_horizon"] = horizon;
    root["methods"][r->method] = m;
  }
  return root.dump(2);
}

void write_cdf_csv(const std::vector<CdfPoint>& cdf, std::ostream& out) {
  out << "abs_error,probability\n";
  for (const auto& p : cdf) out << format_double(p.value) << ',' << format_double(p.probability) << '\n';
}

}  // namespace mtlf
