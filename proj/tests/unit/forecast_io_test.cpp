#include <gtest/gtest.h>

#include <sstream>

#include "mtlf/mtlf.hpp"
#include "scenarios.hpp"
#include "test_helpers.hpp"

using namespace mtlf;

namespace {

Forecast small_forecast() {
  Forecast f;
  f.issued_at = mtlf::testing::utc("2017-02-01T11:00Z");
  for (int i = 1; i <= 2; ++i) {
    ForecastStep s;
    s.timestamp = Timestamp{f.issued_at.utc + i * kHour, f.issued_at.offset};
    s.horizon_step = i;
    s.calendar_type = 12 + i;
    s.mean = Eigen::Vector2d(1.0 / 3.0 * i, 2.0 + i);
    s.cov.resize(2, 2);
    s.cov << 0.5 * i, 0.1, 0.1, 0.25 * i;
    f.steps.push_back(s);
  }
  return f;
}

}  // namespace

TEST(ForecastRecords, FlattenPerStepAndEntity) {
  RowMatrix actuals(2, 2);
  actuals << 1.0, 2.0, 3.0, 4.0;
  const auto recs = to_records(small_forecast(), {"A", "B"}, &actuals);
  ASSERT_EQ(recs.size(), 4u);
  EXPECT_EQ(recs[1].entity_id, "B");
  EXPECT_EQ(recs[1].horizon_step, 1);
  EXPECT_EQ(recs[1].timestamp, "2017-02-01T12:00:00Z");
  EXPECT_EQ(recs[1].issued_at, "2017-02-01T11:00:00Z");
  EXPECT_EQ(recs[1].calendar_type, 13);
  EXPECT_EQ(recs[1].variance, 0.25);
  EXPECT_EQ(recs[1].cov_row, (std::vector<double>{0.1, 0.25}));
  EXPECT_EQ(recs[2].actual, 3.0);
}

TEST(ForecastRecords, JsonLinesRoundTripExactly) {
  RowMatrix actuals(2, 2);
  actuals << 1.0, 2.0, 3.0, 4.0;
  auto recs = to_records(small_forecast(), {"A", "B"}, &actuals);
  recs[0].actual.reset();
  std::stringstream ss;
  write_jsonl(recs, ss);
  EXPECT_EQ(read_jsonl(ss), recs);
  std::istringstream bad("{\"issued_at\": 3}\n");
  EXPECT_THROW(read_jsonl(bad), DataError);
}

TEST(ForecastRecords, CompactCsv) {
  const auto recs = to_records(small_forecast(), {"A", "B"});
  std::ostringstream os;
  write_forecast_csv(recs, os);
  std::istringstream in(os.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "issued_at,timestamp,horizon_step,entity_id,mean,variance");
  EXPECT_EQ(first, "2017-02-01T11:00:00Z,2017-02-01T12:00:00Z,1,A,0.3333333333333333,0.5");
}

TEST(ForecastRecords, MetricsRebuiltFromLogMatchBacktest) {
  const auto panel = generate(mtlf::testing::correlated_spec(40));
  const auto result = run_backtest(panel, BacktestConfig{});
  std::stringstream log;
  for (std::size_t i = 0; i < result.forecasts.size(); ++i) {
    write_jsonl(to_records(result.forecasts[i], panel.entity_ids, &result.actuals[i]), log);
  }
  const auto rebuilt = report_from_records(read_jsonl(log));
  EXPECT_EQ(rebuilt.forecasts, result.engine.forecasts);
  EXPECT_EQ(rebuilt.entity_ids, panel.entity_ids);
  EXPECT_EQ(rebuilt.total.mape(), result.engine.total.mape());
  EXPECT_EQ(rebuilt.total.rmse(), result.engine.total.rmse());
  for (int e = 0; e < panel.num_entities(); ++e) {
    EXPECT_EQ(rebuilt.per_entity[e].rmse(), result.engine.per_entity[e].rmse());
  }
  EXPECT_EQ(rebuilt.absolute_errors, result.engine.absolute_errors);
}

TEST(MetricsOutput, CsvRowsFollowTotalMode) {
  MetricsReport engine("engine", {"A", "B"}, 1), base("persistence", {"A", "B"}, 1);
  engine.record(0, 1, 100.0, 104.0, true);
  engine.record(1, 1, 100.0, 94.0, true);
  base.record(0, 1, 2.0, 1.0, true);
  base.record(1, 1, 2.0, 1.0, true);
  std::ostringstream pooled, both;
  write_metrics_csv({&engine, &base}, TotalMode::Pooled, pooled);
  write_metrics_csv({&engine, &base}, TotalMode::Both, both);
  EXPECT_EQ(pooled.str(),
            "entity,engine_MAPE,engine_RMSE,persistence_MAPE,persistence_RMSE\n"
            "A,4,4,50,1\n"
            "B,6,6,50,1\n"
            "TOTAL,5,5.0990195135927845,50,1\n");
  EXPECT_NE(both.str().find("TOTAL_MEAN,5,5,50,1\n"), std::string::npos) << both.str();
  const auto j = metrics_json({&engine}, TotalMode::Pooled);
  EXPECT_NE(j.find("\"TOTAL\""), std::string::npos);
  EXPECT_EQ(j.find("TOTAL_MEAN"), std::string::npos);
}

TEST(MetricsOutput, CdfCsv) {
  std::ostringstream os;
  write_cdf_csv(error_cdf({1.0, 2.0, 2.0, 4.0}), os);
  EXPECT_EQ(os.str(), "abs_error,probability\n1,0.25\n2,0.75\n4,1\n");
}

TEST(TotalModeText, ParseAndPrint) {
  for (auto m : {TotalMode::Pooled, TotalMode::Mean, TotalMode::Both}) {
    EXPECT_EQ(parse_total_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_total_mode("avg"), ConfigError);
}
