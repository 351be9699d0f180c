// Brute-force references and stability verifiers. Nothing here calls the
// matching or power-control algorithms; only geometry and the rate formulas
// are shared with the code under test.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "leo/channel.hpp"
#include "leo/matching.hpp"
#include "leo/scenario.hpp"

namespace leo::oracle {

class RefusedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Bounds {
  int max_users = 8;
  int max_small_cells = 3;
  int max_k = 3;
  int max_tsts = 4;
  int max_sats = 3;
  int max_q = 3;
};

// ---- terrestrial ---------------------------------------------------------

/// Maximum number of users that can hold distinct covering (cell,
/// subchannel) units, by augmenting paths. Disabled cells are skipped.
int max_bipartite(const Scenario& s, std::span<const std::uint8_t> enabled = {});

struct TtoOptimum {
  double objective = 0.0;  // sum (1 - lambda_m) R_m + mu * accessed
  int max_accessed = 0;
  TerrestrialMatching best;
};

/// Enumerates every one-to-one assignment of users to covering units.
TtoOptimum exhaustive_tto(const Network& net, std::span<const double> lambda,
                          double mu, const Bounds& bounds = {});

struct BlockingPair {
  int j1 = -1, m1 = -1, k1 = -1;
  int j2 = -1, m2 = -1, k2 = -1;
};

/// User-pair exchanges that raise both exchanged links' rates (condition ii)
/// and, when `require_bystanders`, every other pair on the two subchannels
/// (condition i).
std::vector<BlockingPair> verify_group_stability(const Network& net,
                                                 const TerrestrialMatching& psi,
                                                 bool require_bystanders = true);

// ---- grid power control ----------------------------------------------------

struct Grid1 {
  double p = 0.0;
  double value = 0.0;
};
struct Grid2 {
  double p1 = 0.0;
  double p2 = 0.0;
  double value = 0.0;
};

using Objective1 = std::function<double(double)>;
using Objective2 = std::function<double(double, double)>;

/// `points` evenly spaced samples of [lo, hi] (both ends included).
Grid1 grid_1d(const Objective1& f, double lo, double hi, int points);
/// Points (i, j) * budget / resolution with i + j <= resolution.
Grid2 grid_simplex(const Objective2& f, double budget, int resolution);
/// Points (i * cap1, j * cap2) / resolution.
Grid2 grid_box(const Objective2& f, double cap1, double cap2, int resolution);

/// Coarse grid followed by repeated refinement around the incumbent.
Grid1 zoom_1d(const Objective1& f, double lo, double hi, int points, int levels);
Grid2 zoom_simplex(const Objective2& f, double budget, int resolution,
                   int levels);
Grid2 zoom_box(const Objective2& f, double cap1, double cap2, int resolution,
               int levels);

// ---- backhaul --------------------------------------------------------------

struct FoundSwap {
  int type = 0;  // 1..5
  int tst1 = -1, sat1 = -1, subch1 = -1;
  int tst2 = -1, sat2 = -1, subch2 = -1;
  double before = 0.0;
  double after = 0.0;
};

struct SwapOracleOptions {
  int points_1d = 400;
  int resolution_2d = 40;
  int zoom_levels = 8;
  // Relative improvement that counts as a blocking swap.
  double tolerance = 1e-9;
};

/// Force-evaluates every feasible swap of `phi` with grid power control.
/// Empty means swap-stable.
std::vector<FoundSwap> verify_swap_stability(const Network& net,
                                             const BackhaulMatching& phi,
                                             std::span<const double> weight,
                                             const SwapOracleOptions& opt = {});

/// -dU_q/dp of a held link by central differences (one-sided, second
/// order, within `step` of zero power).
double finite_difference_gradient(const Network& net, const BackhaulMatching& phi,
                                  std::span<const double> weight, int sat,
                                  int subch, double step);

/// Co-located TSTs with equal link powers: no exchange of satellites between
/// two co-channel links raises both satellites' rates.
bool verify_colocated_equilibrium(const Network& net,
                                  const BackhaulMatching& phi);

struct SwapCounts {
  long long n12 = 0;
  long long n3 = 0;
  long long n45 = 0;
};

/// Builds the worst-case matching of the complexity bound explicitly and
/// counts the candidates of each class.
SwapCounts enumerate_worst_case(int tsts, int sats, int subch, int n_r);

}  // namespace leo::oracle
