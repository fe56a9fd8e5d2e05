#include "mtlf/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mtlf/errors.hpp"

namespace mtlf {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("'" + key + "' in " + where + " has the wrong type");
  }
}

template <typename T>
void read_opt(const json& j, const std::string& key, T& target, const std::string& where) {
  if (j.contains(key)) target = get<T>(j, key, where);
}

Matrix to_matrix(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ConfigError(what + " must be a non-empty array of rows");
  const auto rows = j.size();
  const auto cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ConfigError(what + " must be a non-empty array of rows");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ConfigError(what + " has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) throw ConfigError(what + " must contain numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
    }
  }
  return m;
}

json from_matrix(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(row);
  }
  return rows;
}

Vector to_vector(const json& j, int n, const std::string& what) {
  if (j.is_number()) return Vector::Constant(n, j.get<double>());
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw ConfigError(what + " must be a number or an array of " + std::to_string(n) + " numbers");
  }
  Vector v(n);
  for (int i = 0; i < n; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) throw ConfigError(what + " must contain numbers");
    v[i] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

json from_vector(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

TempThresholds parse_thresholds(const json& j, const std::string& where) {
  reject_unknown(j, {"shift", "hot", "cold"}, where);
  TempThresholds t;
  read_opt(j, "shift", t.shift, where);
  read_opt(j, "hot", t.hot, where);
  read_opt(j, "cold", t.cold, where);
  return t;
}

json dump_thresholds(const TempThresholds& t) {
  return json{{"shift", t.shift}, {"hot", t.hot}, {"cold", t.cold}};
}

BacktestConfig parse_backtest(const json& j) {
  const std::string where = "'backtest'";
  reject_unknown(j,
                 {"warmup_days", "prediction_hour", "horizon", "lambda_s", "lambda_r", "thresholds",
                  "calendar_scheme", "temp_mean", "temp_mean_decay", "baseline",
                  "keep_error_samples"},
                 where);
  BacktestConfig cfg;
  read_opt(j, "warmup_days", cfg.warmup_days, where);
  read_opt(j, "prediction_hour", cfg.prediction_hour, where);
  read_opt(j, "horizon", cfg.horizon, where);
  read_opt(j, "lambda_s", cfg.lambda_s, where);
  read_opt(j, "lambda_r", cfg.lambda_r, where);
  if (j.contains("thresholds")) cfg.thresholds = parse_thresholds(j["thresholds"], "'backtest.thresholds'");
  if (j.contains("calendar_scheme")) {
    cfg.scheme = CalendarScheme::from_id(get<std::string>(j, "calendar_scheme", where));
  }
  if (j.contains("temp_mean")) {
    const auto mode = get<std::string>(j, "temp_mean", where);
    if (mode == "cumulative") cfg.temp_mean_mode = TempMeanMode::Cumulative;
    else if (mode == "exponential") cfg.temp_mean_mode = TempMeanMode::Exponential;
    else throw ConfigError("temp_mean must be cumulative or exponential");
  }
  read_opt(j, "temp_mean_decay", cfg.temp_mean_decay, where);
  read_opt(j, "baseline", cfg.run_baseline, where);
  read_opt(j, "keep_error_samples", cfg.keep_error_samples, where);
  return cfg;
}

json dump_backtest(const BacktestConfig& cfg) {
  return json{{"warmup_days", cfg.warmup_days},
              {"prediction_hour", cfg.prediction_hour},
              {"horizon", cfg.horizon},
              {"lambda_s", cfg.lambda_s},
              {"lambda_r", cfg.lambda_r},
              {"thresholds", dump_thresholds(cfg.thresholds)},
              {"calendar_scheme", std::string(cfg.scheme.id())},
              {"temp_mean", cfg.temp_mean_mode == TempMeanMode::Cumulative ? "cumulative"
                                                                           : "exponential"},
              {"temp_mean_decay", cfg.temp_mean_decay},
              {"baseline", cfg.run_baseline},
              {"keep_error_samples", cfg.keep_error_samples}};
}

SyntheticSpec parse_synthetic(const json& j) {
  const std::string where = "'synthetic'";
  reject_unknown(j,
                 {"entities", "calendar_scheme", "hours", "seed", "start", "observation_channel",
                  "initial_loads", "entity_ids", "parameters", "temperature", "thresholds"},
                 where);
  SyntheticSpec spec;
  read_opt(j, "entities", spec.entities, where);
  if (spec.entities < 1) throw ConfigError("synthetic entities must be >= 1");
  const int k = spec.entities;
  if (j.contains("calendar_scheme")) {
    spec.scheme = CalendarScheme::from_id(get<std::string>(j, "calendar_scheme", where));
  }
  read_opt(j, "hours", spec.hours, where);
  read_opt(j, "seed", spec.seed, where);
  if (j.contains("start")) {
    try {
      spec.start = parse_timestamp(get<std::string>(j, "start", where));
    } catch (const DataError& e) {
      throw ConfigError(std::string("synthetic start: ") + e.what());
    }
  }
  read_opt(j, "observation_channel", spec.observation_channel, where);
  if (j.contains("initial_loads")) spec.initial_loads = to_vector(j["initial_loads"], k, "initial_loads");
  read_opt(j, "entity_ids", spec.entity_ids, where);
  if (!j.contains("parameters")) throw ConfigError("synthetic spec needs 'parameters'");
  const auto& params = j["parameters"];
  if (!params.is_array() || params.empty()) {
    throw ConfigError("synthetic 'parameters' must be a non-empty array");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& p = params[i];
    const std::string pw = "'synthetic.parameters[" + std::to_string(i) + "]'";
    reject_unknown(p, {"load_map", "load_cov", "observation_map", "observation_cov"}, pw);
    CalendarParameters cp;
    if (!p.contains("load_map")) throw ConfigError(pw + " needs 'load_map'");
    cp.load_map = to_matrix(p["load_map"], pw + ".load_map");
    cp.load_cov = p.contains("load_cov") ? to_matrix(p["load_cov"], pw + ".load_cov")
                                         : Matrix(Matrix::Zero(k, k));
    cp.observation_map = p.contains("observation_map")
                             ? to_matrix(p["observation_map"], pw + ".observation_map")
                             : Matrix(Matrix::Zero(k, k * kObservationFeatures));
    cp.observation_cov = p.contains("observation_cov")
                             ? to_matrix(p["observation_cov"], pw + ".observation_cov")
                             : Matrix(Matrix::Identity(k, k));
    spec.parameters.push_back(std::move(cp));
  }
  spec.temperature = TemperatureProcess::defaults(k);
  if (j.contains("temperature")) {
    const auto& t = j["temperature"];
    reject_unknown(t, {"mean", "daily_amplitude", "phase_hours", "annual_amplitude", "noise_sd"},
                   "'synthetic.temperature'");
    if (t.contains("mean")) spec.temperature.mean = to_vector(t["mean"], k, "temperature.mean");
    if (t.contains("daily_amplitude")) {
      spec.temperature.daily_amplitude = to_vector(t["daily_amplitude"], k, "temperature.daily_amplitude");
    }
    if (t.contains("phase_hours")) {
      spec.temperature.phase_hours = to_vector(t["phase_hours"], k, "temperature.phase_hours");
    }
    if (t.contains("annual_amplitude")) {
      spec.temperature.annual_amplitude = to_vector(t["annual_amplitude"], k, "temperature.annual_amplitude");
    }
    if (t.contains("noise_sd")) spec.temperature.noise_sd = to_vector(t["noise_sd"], k, "temperature.noise_sd");
  }
  if (j.contains("thresholds")) spec.thresholds = parse_thresholds(j["thresholds"], "'synthetic.thresholds'");
  spec.validate();
  return spec;
}

json dump_synthetic(const SyntheticSpec& spec) {
  json params = json::array();
  for (const auto& p : spec.parameters) {
    params.push_back(json{{"load_map", from_matrix(p.load_map)},
                          {"load_cov", from_matrix(p.load_cov)},
                          {"observation_map", from_matrix(p.observation_map)},
                          {"observation_cov", from_matrix(p.observation_cov)}});
  }
  json j{{"entities", spec.entities},
         {"calendar_scheme", std::string(spec.scheme.id())},
         {"hours", spec.hours},
         {"seed", spec.seed},
         {"start", format_timestamp(spec.start)},
         {"observation_channel", spec.observation_channel},
         {"parameters", params},
         {"temperature",
          json{{"mean", from_vector(spec.temperature.mean)},
               {"daily_amplitude", from_vector(spec.temperature.daily_amplitude)},
               {"phase_hours", from_vector(spec.temperature.phase_hours)},
               {"annual_amplitude", from_vector(spec.temperature.annual_amplitude)},
               {"noise_sd", from_vector(spec.temperature.noise_sd)}}},
         {"thresholds", dump_thresholds(spec.thresholds)}};
  if (spec.initial_loads.size() > 0) j["initial_loads"] = from_vector(spec.initial_loads);
  if (!spec.entity_ids.empty()) j["entity_ids"] = spec.entity_ids;
  return j;
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON configuration: ") + e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  backtest.validate();
  if (synthetic) synthetic->validate();
}

RunConfig parse_run_config(std::string_view text) {
  const json j = parse_text(text);
  const std::string where = "configuration";
  reject_unknown(j,
                 {"backtest", "synthetic", "data", "holidays", "celsius", "output_dir",
                  "total_mode", "seed"},
                 where);
  RunConfig cfg;
  if (j.contains("backtest")) cfg.backtest = parse_backtest(j["backtest"]);
  if (j.contains("synthetic")) cfg.synthetic = parse_synthetic(j["synthetic"]);
  read_opt(j, "data", cfg.data, where);
  read_opt(j, "holidays", cfg.holidays, where);
  read_opt(j, "celsius", cfg.celsius, where);
  read_opt(j, "output_dir", cfg.output_dir, where);
  if (j.contains("total_mode")) cfg.total_mode = parse_total_mode(get<std::string>(j, "total_mode", where));
  read_opt(j, "seed", cfg.seed, where);
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string dump_run_config(const RunConfig& cfg) {
  json j{{"backtest", dump_backtest(cfg.backtest)},
         {"data", cfg.data},
         {"holidays", cfg.holidays},
         {"celsius", cfg.celsius},
         {"output_dir", cfg.output_dir},
         {"total_mode", to_string(cfg.total_mode)},
         {"seed", cfg.seed}};
  if (cfg.synthetic) j["synthetic"] = dump_synthetic(*cfg.synthetic);
  return j.dump(2);
}

SyntheticSpec parse_synthetic_spec(std::string_view text) { return parse_synthetic(parse_text(text)); }

std::string dump_synthetic_spec(const SyntheticSpec& spec) { return dump_synthetic(spec).dump(2); }

}  // namespace mtlf
