// TST -> satellite backhaul: swap matching with power control over
// (satellite, subchannel) units, and the delay-aware equivalent capacity.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "leo/channel.hpp"
#include "leo/matching.hpp"
#include "leo/power_control.hpp"
#include "leo/terrestrial.hpp"

namespace leo {

class FeasibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ClassificationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LoadSplitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoLinkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-TST weights (the multipliers of the LSC cells) in TST order.
std::vector<double> tst_weights(const Scenario& s, std::span<const double> lambda);

/// Preference of SS unit (n, q) for the candidate pair (m', (n', q)).
double tst_preference(const Network& net, std::size_t n, std::size_t q,
                      std::size_t m2, std::size_t n2,
                      const PreferenceParams& prefs);

// ---- gradients ---------------------------------------------------------

/// w^m_{n,q} = -dR^T_q/dp of TST m's link on (n, q): at its current power
/// when m holds the unit, otherwise at 0+ for a hypothetical link that
/// replaces the unit's current holder.
double gradient_entry(const Network& net, const BackhaulMatching& b,
                      std::span<const double> weight, std::size_t m,
                      std::size_t n, std::size_t q);

/// One N x Q matrix per TST.
using GradientMatrix = Matrix<double>;
std::vector<GradientMatrix> gradient_matrices(const Network& net,
                                              const BackhaulMatching& b,
                                              std::span<const double> weight);

/// Link of TST m with the largest w, i.e. the one least hurt by losing power.
std::pair<int, int> least_affected_link(const Network& net,
                                        const BackhaulMatching& b,
                                        std::span<const double> weight,
                                        std::size_t m);

// ---- swaps -------------------------------------------------------------

enum class SwapType { kAdd = 1, kWithdraw = 2, kSameTst = 3, kCross = 4, kCoChannel = 5 };

/// One side of a swap: a TST and an SS unit, either of which may be virtual
/// (kNone).
struct SwapPair {
  int tst = kNone;
  int sat = kNone;
  int subch = kNone;
};

SwapType classify_swap(const SwapPair& p1, const SwapPair& p2);

/// A fully specified candidate.
///   kAdd:      tst1 takes the free unit (sat2, subch2); (sat1, subch1) is the
///              power donor link of tst1, or virtual when tst1 has no links.
///   kWithdraw: tst1 lowers the power of its link (sat1, subch1).
///   kSameTst:  tst1 re-splits power between its link (sat1, subch1) and
///              (sat2, subch2), which it either holds or takes while free.
///   kCross / kCoChannel: tst1 on (sat1, subch1) and tst2 on (sat2, subch2)
///              exchange units.
struct Swap {
  SwapType type = SwapType::kAdd;
  int tst1 = kNone;
  int sat1 = kNone;
  int subch1 = kNone;
  int tst2 = kNone;
  int sat2 = kNone;
  int subch2 = kNone;
};

/// Feasibility: visibility, angle gates of every touched TST on every
/// touched subchannel, link-count limit, unit exclusivity.
bool swap_feasible(const Network& net, const BackhaulMatching& b, const Swap& s);

struct SwapEvaluation {
  bool approved = false;
  double before = 0.0;  // weighted utility of the touched subchannels
  double after = 0.0;
  BackhaulMatching result;
};

/// Relative improvement an approved swap must exceed.
inline constexpr double kApprovalTolerance = 1e-10;
bool improves(double before, double after);

/// Solves the type's power-control problem and applies the approval rule.
/// Throws FeasibilityError for infeasible swaps.
SwapEvaluation evaluate_swap(const Network& net, const BackhaulMatching& b,
                             const Swap& s, std::span<const double> weight);

/// Gradient-based pruning; true keeps the candidate.
bool prune_keep(const Network& net, const BackhaulMatching& b, const Swap& s,
                std::span<const double> weight);

/// Every structurally possible swap of the current matching.
std::vector<Swap> enumerate_swaps(const Network& net, const BackhaulMatching& b,
                                  std::span<const double> weight);

// ---- capacity ------------------------------------------------------------

struct BackhaulCapacity {
  // Per TST.
  std::vector<std::vector<double>> link_bps;  // C_{m,n}, N entries
  std::vector<std::vector<double>> load_bits; // L_{m,n}
  std::vector<double> equivalent_bps;          // C_m
  std::vector<double> raw_bps;                 // C~_m
  std::vector<double> delay_s;                 // common completion time
  std::vector<double> traffic_bits;            // L_m
};

/// Equal-completion-time split of L over links with capacities C_n (bits/s)
/// and round-trip delays T_n. Links with C_n <= 0 carry nothing.
std::vector<double> solve_load_split(std::span<const double> capacity_bps,
                                     std::span<const double> delay_s,
                                     double load_bits);

double equivalent_capacity(std::span<const double> capacity_bps,
                           std::span<const double> delay_s,
                           std::span<const double> loads_bits);

/// Completion time L_n / C_n + T_n shared by all loaded links; 0 without load.
double completion_time(std::span<const double> capacity_bps,
                       std::span<const double> delay_s,
                       std::span<const double> loads_bits);

/// Capacities for the given per-TST traffic (bits over the accounting
/// window). An empty traffic vector means no load.
BackhaulCapacity backhaul_capacity(const Network& net, const BackhaulMatching& b,
                                   std::span<const double> traffic_bits = {});

/// sum_t weight_t C~_t, bits/s.
double weighted_capacity(const Network& net, const BackhaulMatching& b,
                         std::span<const double> weight);

// ---- SMPC ----------------------------------------------------------------

struct SmpcOptions {
  PreferenceParams prefs;
  bool prune = true;
  int max_swaps = 100000;
};

struct SmpcStats {
  std::array<int, 6> executed{};  // by type, index 1..5
  long long evaluated = 0;
  long long pruned = 0;
  int sweeps = 0;
  std::vector<double> objective;  // weighted capacity after init and each swap
  bool converged = true;
};

struct SmpcResult {
  BackhaulMatching phi;
  SmpcStats stats;
};

/// One-to-one start: at most one unit per TST at power P/N_r.
BackhaulMatching smpc_initialize(const Network& net,
                                 std::span<const double> weight,
                                 const PreferenceParams& prefs);

SmpcResult smpc(const Network& net, std::span<const double> weight,
                const SmpcOptions& options = {});

/// Comparison solvers: random feasible units, or each TST greedily taking
/// its strongest free units; power split equally over a TST's links.
BackhaulMatching random_backhaul(const Network& net, std::uint64_t seed);
BackhaulMatching greedy_backhaul(const Network& net);

/// Structural and physical invariants; empty when the matching is valid.
std::vector<std::string> validate_backhaul(const Network& net,
                                           const BackhaulMatching& b);

// ---- complexity ----------------------------------------------------------

struct SwapSpace {
  long long n12 = 0;
  long long n3 = 0;
  long long n45 = 0;
};

SwapSpace count_swap_space(long long tsts, long long sats, long long subch,
                           long long n_r);

}  // namespace leo
