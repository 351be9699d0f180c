// Lagrangian outer loop coupling user association and satellite backhaul,
// the backhaul-constraint repair, and the comparison schemes.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "leo/backhaul.hpp"
#include "leo/channel.hpp"
#include "leo/matching.hpp"
#include "leo/terrestrial.hpp"

namespace leo {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DualParams {
  double delta0 = 0.1;
  double gamma = 0.9;
  double epsilon = 1e-7;
  double lambda0 = 0.5;
  int max_iterations = 500;

  void validate() const;
};

/// delta0 * gamma^t.
double step_size(const DualParams& p, int t);
/// |delta(t+1) - delta(t)| < epsilon.
bool stop_rule(const DualParams& p, int t);
/// Number of outer iterations the schedule allows, capped.
int iteration_bound(const DualParams& p);

struct IterationRecord {
  int t = 0;
  double delta = 0.0;
  double objective = 0.0;  // after repair, bits/s/Hz + mu * accessed
  double sum_rate_mbps = 0.0;
  int accessed_users = 0;
  double max_violation_mbps = 0.0;  // before repair
  std::vector<double> lambda;       // multipliers used in this iteration
};

struct DualState {
  std::vector<double> lambda;  // one per cell, >= 0
  double delta = 0.0;
  int t = 0;
  std::vector<IterationRecord> history;
};

DualState initial_dual_state(std::size_t cells, const DualParams& p);

/// lambda_m <- max(0, lambda_m - delta (C_m - R_m)) with rates in Mbps, then
/// advances t and delta.
DualState lagrangian_update(DualState state, std::span<const double> rate_mbps,
                            std::span<const double> capacity_mbps,
                            const DualParams& p);

/// L_m = min(R^B_m * 1 s, sum of the cell's user data), bits.
std::vector<double> cell_traffic(const Network& net,
                                 const TerrestrialMatching& psi);

/// Backhaul capacity of cell m for `traffic_bits` of load, bits/s.
using CapacityFn = std::function<double(std::size_t m, double traffic_bits)>;

/// Detaches users of over-capacity cells in increasing rate order until
/// R^B_m <= C_m everywhere. Returns the number of users removed.
int repair_backhaul(const Network& net, TerrestrialMatching& psi,
                    const CapacityFn& capacity);
/// Fixed per-cell capacities, bits/s.
TerrestrialMatching repair_backhaul(const Network& net, TerrestrialMatching psi,
                                    std::span<const double> capacity_bps);

/// L / C; 0 without load; +inf when loaded with zero capacity.
double fixed_backhaul_delay(double traffic_bits, double capacity_bps);

/// Sum of cell rates in bits/s/Hz plus mu per accessed user.
double evaluate_objective(const Network& net, const TerrestrialMatching& psi,
                          double mu);

enum class Scheme { kLits, kIdeal, kTth, kNits, kRandom, kGreedy };

Scheme parse_scheme(const std::string& name);
std::string scheme_name(Scheme s);

struct LitsOptions {
  PreferenceParams prefs;
  DualParams dual;
  bool prune = true;
  bool complete_access = true;
};

struct RunResult {
  Scheme scheme = Scheme::kLits;
  TerrestrialMatching psi;
  BackhaulMatching phi;
  BackhaulCapacity backhaul;  // with the final traffic
  // Per cell.
  std::vector<double> rate_bps;
  std::vector<double> capacity_bps;
  std::vector<double> traffic_bits;
  std::vector<double> delay_s;
  std::vector<int> users;
  std::vector<double> lambda;

  int accessed = 0;
  double sum_rate_bps = 0.0;
  double objective = 0.0;
  int iterations = 0;
  int best_iteration = 0;  // iteration whose repaired state is returned
  int smpc_runs = 0;
  std::vector<IterationRecord> history;
  // Sub-runs of a composite scheme (the non-integrated networks).
  std::vector<RunResult> parts;

  double total_backhaul_bps() const;  // sum of LSC raw satellite capacity
  double lsc_user_fraction(const Scenario& s) const;
  // Mean over loaded TSCs or LSCs; NaN when no such cell carries traffic.
  double mean_delay_s(const Scenario& s, bool lsc) const;
};

RunResult run_lits(const Network& net, const LitsOptions& options = {});

RunResult run_baseline(Scheme kind, const Network& net,
                       const LitsOptions& options = {});

/// Backhaul delay of cell m in the final state, seconds.
double backhaul_delay(std::size_t m, const RunResult& result);

/// Every cell satisfies R^B_m <= C_m and the backhaul is valid.
std::vector<std::string> check_constraints(const Network& net,
                                           const RunResult& result);

}  // namespace leo
