// Property and trend checks, shared by the `verify` subcommand and the
// acceptance binary. Each check runs a fixed, seeded instance family.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leo/channel.hpp"
#include "leo/harness.hpp"

namespace leo::verify {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  int cases = 0;
  int violations = 0;
  double seconds = 0.0;
  std::string detail;
};

/// Small terrestrial instance: macro plus up to three small cells, at most
/// eight users and three C-band subchannels. `lambda` holds one multiplier
/// per cell in [0, 1).
struct AccessInstance {
  Network net;
  std::vector<double> lambda;
};
AccessInstance access_instance(std::uint64_t seed);

/// Small backhaul instance: up to four TSTs, three satellites and three
/// Ka-band subchannels. `weight` holds one value per TST in [0.2, 1.2).
struct BackhaulInstance {
  Network net;
  std::vector<double> weight;
};
BackhaulInstance backhaul_instance(std::uint64_t seed);

CheckResult access_maximality(int instances = 200);
CheckResult round_bound(int instances = 200);
CheckResult group_stability(int instances = 100);
CheckResult smpc_monotone(int instances = 100);
CheckResult swap_stability(int instances = 100);
CheckResult power_control(int instances = 200);
CheckResult gradients(int states = 50);
CheckResult pruning(int instances = 50);
CheckResult swap_space();
CheckResult load_split(int instances = 200);

/// Checks 1 to 10, in order.
std::vector<CheckResult> oracle_checks();

/// Trend checks on the desk profile, `seeds` seeds per point.
CheckResult constraints(const RunConfig& desk, int seeds = 20);
CheckResult integration_gain(const RunConfig& desk, int seeds = 20);
CheckResult satellite_returns(const RunConfig& desk, int seeds = 20);
CheckResult area_optimum(const RunConfig& desk, int seeds = 20);
CheckResult delay_crossover(const RunConfig& desk, int seeds = 20);
CheckResult determinism(const RunConfig& desk);

/// One line: "[PASS] 3 group stability: 100 cases, 0 violations, 1.2 s; ...".
std::string format_result(const CheckResult& r);

}  // namespace leo::verify
