#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "leo/harness.hpp"

namespace leo {
namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, desk_profile());
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseConfig, OverlaysFieldsOnTheBase) {
  const RunConfig c = parse_config(R"({
  "scenario": {"n_users": 12, "n_r": 1},
  "seeds": {"base": 40, "count": 3},
  "scheme": "tth",
  "sweep": {"axis": "n_satellites", "values": [2, 4]}
})",
                                   desk_profile());
  EXPECT_EQ(c.scenario.n_users, 12);
  EXPECT_EQ(c.scenario.n_r, 1);
  EXPECT_EQ(c.scenario.n_tsc, 5);  // untouched desk value
  EXPECT_EQ(c.seeds(), (std::vector<std::uint64_t>{40, 41, 42}));
  EXPECT_EQ(c.scheme, Scheme::kTth);
  EXPECT_EQ(c.axis, Axis::kNSatellites);
  EXPECT_EQ(c.values, (std::vector<double>{2, 4}));
}

TEST(ParseConfig, UnknownKeyReportsItsLine) {
  const std::string e = error_of("{\n  \"scenario\": {\n    \"n_userz\": 3\n  }\n}");
  EXPECT_NE(e.find("line 3"), std::string::npos) << e;
  EXPECT_NE(e.find("n_userz"), std::string::npos) << e;
}

TEST(ParseConfig, WrongTypeReportsItsLine) {
  const std::string e = error_of("{\n  \"scenario\": {\"n_users\": \"many\"}\n}");
  EXPECT_NE(e.find("line 2"), std::string::npos) << e;
  EXPECT_NE(e.find("n_users"), std::string::npos) << e;
}

TEST(ParseConfig, MalformedJsonReportsItsLine) {
  const std::string e = error_of("{\n  \"seeds\": {\"count\": 2,}\n}");
  EXPECT_NE(e.find("line 2"), std::string::npos) << e;
}

TEST(ParseConfig, ProfileAndValueChecks) {
  EXPECT_EQ(parse_config(R"({"profile": "paper"})", desk_profile()).scenario.n_users,
            paper_profile().scenario.n_users);
  EXPECT_FALSE(error_of(R"({"profile": "laptop"})").empty());
  EXPECT_FALSE(error_of(R"({"scheme": "best"})").empty());
  EXPECT_FALSE(error_of(R"({"sweep": {"axis": "colour"}})").empty());
  EXPECT_FALSE(error_of(R"({"dual": {"gamma": 1.5}})").empty());
}

TEST(Profiles, DeskIsSmallerThanPaper) {
  const RunConfig d = desk_profile(), p = paper_profile();
  EXPECT_EQ(d.scenario.n_tsc + d.scenario.n_lsc, 10);
  EXPECT_EQ(p.scenario.n_tsc + p.scenario.n_lsc, 50);
  EXPECT_LT(d.scenario.n_users, p.scenario.n_users);
  EXPECT_NO_THROW(d.validate());
  EXPECT_NO_THROW(p.validate());
  EXPECT_THROW(profile_config("x"), ConfigError);
}

TEST(ConfigHash, StableAndSensitive) {
  const RunConfig a = desk_profile();
  EXPECT_EQ(config_hash(a), config_hash(desk_profile()));
  EXPECT_EQ(config_hash(a).size(), 16u);
  RunConfig b = a;
  b.scenario.n_users += 1;
  EXPECT_NE(config_hash(a), config_hash(b));
  // The canonical form parses back to the same configuration.
  const RunConfig c = parse_config(config_to_json(b).dump(2), paper_profile());
  EXPECT_EQ(config_hash(c), config_hash(b));
}

TEST(WithAxis, SetsTheMatchingField) {
  const RunConfig c = desk_profile();
  EXPECT_EQ(with_axis(c, Axis::kNSatellites, 6).scenario.n_satellites, 6);
  EXPECT_EQ(with_axis(c, Axis::kUserDensity, 30).scenario.n_users, 30);
  EXPECT_EQ(with_axis(c, Axis::kProjectedArea, 2e4).scenario.projected_area_km2, 2e4);
  EXPECT_EQ(with_axis(c, Axis::kTrafficLoad, 1e3).scenario.data_bytes_per_s, 1e3);
  EXPECT_EQ(with_axis(c, Axis::kNr, 1).scenario.n_r, 1);
  EXPECT_THROW(with_axis(c, Axis::kNr, 1.5), ConfigError);
  for (Axis a : {Axis::kNone, Axis::kUserDensity, Axis::kNSatellites, Axis::kProjectedArea,
                 Axis::kTrafficLoad, Axis::kNr}) {
    EXPECT_EQ(parse_axis(axis_name(a)), a);
  }
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

TEST(Csv, EmptyRowsGiveHeaderOnly) {
  std::ostringstream a, b;
  write_rows_csv(a, {});
  write_aggregate_csv(b, {});
  ASSERT_EQ(lines_of(a.str()).size(), 1u);
  ASSERT_EQ(lines_of(b.str()).size(), 1u);
  EXPECT_EQ(lines_of(a.str())[0].rfind("axis_value,seed,", 0), 0u);
  EXPECT_EQ(lines_of(b.str())[0].rfind("axis_value,count,", 0), 0u);
}

TEST(FormatNumber, FixedFormat) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(3.0), "3");
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
}

ResultRow row(double axis, std::uint64_t seed, double rate) {
  ResultRow r;
  r.axis_value = axis;
  r.seed = seed;
  r.sum_rate_mbps = rate;
  r.mean_lsc_delay_ms = seed == 1 ? std::numeric_limits<double>::quiet_NaN() : 2.0 * seed;
  return r;
}

TEST(Aggregate, MeanAndSampleStdPerAxisValue) {
  const std::vector<ResultRow> rows{row(1, 1, 10), row(1, 2, 14), row(1, 3, 18),
                                    row(2, 1, 5),  row(2, 2, 5),  row(2, 3, 5)};
  const auto agg = aggregate(rows);
  ASSERT_EQ(agg.size(), 2u);
  const auto& cols = metric_columns();
  const auto rate = static_cast<std::size_t>(
      std::find(cols.begin(), cols.end(), "sum_rate_mbps") - cols.begin());
  const auto lsc = static_cast<std::size_t>(
      std::find(cols.begin(), cols.end(), "mean_lsc_delay_ms") - cols.begin());
  ASSERT_LT(rate, cols.size());
  ASSERT_LT(lsc, cols.size());
  EXPECT_EQ(agg[0].count, 3);
  EXPECT_NEAR(agg[0].mean[rate], 14.0, 1e-12);
  EXPECT_NEAR(agg[0].stddev[rate], 4.0, 1e-12);
  EXPECT_NEAR(agg[1].stddev[rate], 0.0, 1e-12);
  EXPECT_NEAR(agg[0].mean[lsc], 5.0, 1e-12);  // NaN of seed 1 skipped
  std::ostringstream os;
  write_rows_csv(os, rows);
  EXPECT_EQ(lines_of(os.str()).size(), 7u);
}

TEST(Sweep, RowsInAxisSeedOrderAndSerialEqualsParallel) {
  RunConfig c = desk_profile();
  c.scenario.n_users = 12;
  c.seed_count = 3;
  c.axis = Axis::kNSatellites;
  c.values = {2, 3};
  const auto serial = sweep_serial(c);
  ASSERT_EQ(serial.size(), 6u);
  EXPECT_EQ(serial[0].axis_value, 2.0);
  EXPECT_EQ(serial[2].seed, 3u);
  EXPECT_EQ(serial[3].axis_value, 3.0);
  const auto parallel = sweep_parallel(c, 2);
  std::ostringstream a, b;
  write_rows_csv(a, serial);
  write_rows_csv(b, parallel);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(aggregate(serial).size(), 2u);
}

TEST(Json, ResultCarriesTheSchemeAndMetrics) {
  RunConfig c = desk_profile();
  c.scenario.n_users = 10;
  const Network net = build_network(c, 1);
  const RunResult r = run_lits(net, c.lits);
  const auto j = result_to_json(net, r);
  EXPECT_EQ(j.at("scheme"), "lits");
  EXPECT_EQ(j.at("accessed_users"), r.accessed);
  EXPECT_EQ(result_to_json(net, r).dump(), j.dump());
}

}  // namespace
}  // namespace leo
