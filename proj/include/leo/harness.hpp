// Run configuration, experiment sweeps and result files.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "leo/channel.hpp"
#include "leo/orchestrator.hpp"
#include "leo/scenario.hpp"

namespace leo {

enum class Axis { kNone, kUserDensity, kNSatellites, kProjectedArea, kTrafficLoad, kNr };

Axis parse_axis(const std::string& name);
std::string axis_name(Axis a);

struct RunConfig {
  std::string profile = "desk";
  ScenarioConfig scenario;
  RadioParams radio;
  LitsOptions lits;
  std::uint64_t seed_base = 1;
  int seed_count = 1;
  Scheme scheme = Scheme::kLits;
  Axis axis = Axis::kNone;
  std::vector<double> values;

  std::vector<std::uint64_t> seeds() const;
  void validate() const;
};

RunConfig desk_profile();
RunConfig paper_profile();
RunConfig profile_config(const std::string& name);

/// Overlays a JSON document on `base`. Unknown keys, wrong types and
/// malformed JSON raise ConfigError("line N: ...").
RunConfig parse_config(const std::string& text, const RunConfig& base);
RunConfig load_config(const std::string& path, const RunConfig& base);

nlohmann::json config_to_json(const RunConfig& c);
/// FNV-1a of the canonical JSON form, 16 hex digits.
std::string config_hash(const RunConfig& c);

/// Returns `c` with the sweep axis set to `value`.
RunConfig with_axis(RunConfig c, Axis axis, double value);

Network build_network(const RunConfig& c, std::uint64_t seed);

/// Backhaul capacity of the constellation: SMPC with every TST weighted 1,
/// summed over TSTs, bits/s.
double constellation_capacity_bps(const Network& net, const SmpcOptions& opt = {});

struct ResultRow {
  double axis_value = 0.0;
  std::uint64_t seed = 0;
  double sum_rate_mbps = 0.0;
  int accessed_users = 0;
  double total_backhaul_mbps = 0.0;
  double lsc_user_fraction = 0.0;
  double mean_tsc_delay_ms = 0.0;
  double mean_lsc_delay_ms = 0.0;
  int iterations = 0;
};

ResultRow summarize(const Network& net, const RunResult& r, double axis_value,
                    std::uint64_t seed, double backhaul_bps);

/// One row per (axis value, seed) in that order.
std::vector<ResultRow> sweep_serial(const RunConfig& c);
/// Same rows, computed by `workers` OpenMP threads (0: LEO_WORKERS or the
/// OpenMP default).
std::vector<ResultRow> sweep_parallel(const RunConfig& c, int workers = 0);
int default_workers();

struct AggregateRow {
  double axis_value = 0.0;
  int count = 0;
  std::vector<double> mean;  // per metric, in CSV column order
  std::vector<double> stddev;
};

/// Metric columns shared by the raw and aggregate files.
const std::vector<std::string>& metric_columns();
std::vector<double> metric_values(const ResultRow& r);

std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows);

void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows);
void write_history_csv(std::ostream& os, const std::vector<IterationRecord>& h);

/// Fixed-format number used by every CSV writer.
std::string format_number(double v);

nlohmann::json scenario_to_json(const Scenario& s);
nlohmann::json backhaul_to_json(const BackhaulMatching& b,
                                const BackhaulCapacity& cap);
nlohmann::json result_to_json(const Network& net, const RunResult& r);

}  // namespace leo
