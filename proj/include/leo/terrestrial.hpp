// User association and subchannel allocation over the C-band: a one-to-one
// matching of users to (cell, subchannel) units in which every pair affects
// its co-channel neighbours through interference.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "leo/channel.hpp"
#include "leo/matching.hpp"

namespace leo {

inline constexpr double kGainFloor = 1e-30;

struct PreferenceParams {
  double rho1 = 1.0;
  double rho2 = 1.0;
  double mu = 1.0;  // objective weight per accessed user, bits/s/Hz

  void validate() const;
};

/// Score that unit (m, k) assigns to the candidate pair (j', (m', k)):
/// |h_{m',j',k}|^(rho1 lambda_{m'}) / |h_{m,j',k}|^rho2.
double unit_preference(const Network& net, std::size_t m, std::size_t k,
                       std::size_t m2, std::size_t j2,
                       std::span<const double> lambda,
                       const PreferenceParams& prefs);

/// Matching plus the bookkeeping carried between propose/reject rounds.
struct TuasaState {
  TerrestrialMatching psi;
  // crossed[(m * K + k)][m' * J + j'] = 1 once unit (m, k) had its proposal
  // of (j', (m', k)) rejected; it never proposes that pair again.
  std::vector<std::vector<std::uint8_t>> crossed;
  // Cells that may take part (all cells when empty).
  std::vector<std::uint8_t> enabled;
};

struct RoundOutcome {
  bool progressed = false;  // at least one user was matched
  int proposals = 0;
  int accepted = 0;
};

struct TuasaStats {
  int init_loops = 0;      // initialization passes that matched a user
  int matching_rounds = 0;  // propose/reject rounds that matched a user
  int idle_rounds = 0;      // rounds where every proposal was rejected
  int completions = 0;      // users admitted by the access-completion phase
  // Rounds that admitted at least one user, all phases counted.
  int rounds() const { return init_loops + matching_rounds + completions; }
};

struct TuasaOptions {
  PreferenceParams prefs;
  // Serve every user for whom some augmenting assignment exists once the
  // propose/reject rounds stop.
  bool complete_access = true;
  std::vector<std::uint8_t> enabled_cells;  // empty: all cells
};

bool cell_enabled(std::span<const std::uint8_t> enabled, std::size_t m);

TuasaState tuasa_initialize(const Network& net, std::span<const double> lambda,
                            std::span<const std::uint8_t> enabled = {},
                            int* loops = nullptr);

RoundOutcome tuasa_round(TuasaState& state, const Network& net,
                         std::span<const double> lambda,
                         const PreferenceParams& prefs);

/// Admits unmatched users along augmenting paths of the coverage graph.
/// Returns the number of users admitted.
int complete_access(TuasaState& state, const Network& net,
                    std::span<const double> lambda);

TerrestrialMatching tuasa(const Network& net, std::span<const double> lambda,
                          const TuasaOptions& options = {},
                          TuasaStats* stats = nullptr);

/// sum_m (1 - lambda_m) R^B_m + mu * accessed, rates in bits/s/Hz.
double weighted_objective(const Network& net, const TerrestrialMatching& psi,
                          std::span<const double> lambda,
                          const PreferenceParams& prefs);

/// Subchannel utility after tentatively adding user j on unit (m, k).
double utility_with(const Network& net, const TerrestrialMatching& psi,
                    std::size_t k, std::span<const double> lambda,
                    std::size_t m, std::size_t j);

}  // namespace leo
