#include "leo/terrestrial.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace leo {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_magnitude(double gain2) {
  return 0.5 * std::log(std::max(gain2, kGainFloor));
}

struct Candidate {
  int user = kNone;
  int cell = kNone;
  std::vector<std::size_t> proposers;  // proposing cells on this subchannel
  double gain = 0.0;
};

// Utility of subchannel k over the given (cell, user) occupants.
double occupants_utility(const Network& net,
                         const std::vector<std::pair<int, int>>& occ,
                         std::size_t k, std::span<const double> lambda) {
  const auto& h = net.realization();
  const double pu = net.params().user_power_w;
  double u = 0.0;
  for (const auto& [m, j] : occ) {
    double interference = 0.0;
    for (const auto& [m2, j2] : occ) {
      if (m2 != m) {
        interference += pu * h.hb2(static_cast<std::size_t>(m),
                                   static_cast<std::size_t>(j2), k);
      }
    }
    const double r = std::log2(
        1.0 + pu *
                  h.hb2(static_cast<std::size_t>(m),
                        static_cast<std::size_t>(j), k) /
                  (net.noise_b() + interference));
    u += (1.0 - lambda[static_cast<std::size_t>(m)]) * r;
  }
  return u;
}

std::vector<std::pair<int, int>> occupants(const TerrestrialMatching& psi,
                                           std::size_t k) {
  std::vector<std::pair<int, int>> occ;
  for (std::size_t m = 0; m < psi.cell_count(); ++m) {
    const int j = psi.unit_user(m, k);
    if (j != kNone) occ.emplace_back(static_cast<int>(m), j);
  }
  return occ;
}

}  // namespace

void PreferenceParams::validate() const {
  if (rho1 < 0.0 || rho2 < 0.0 || (rho1 == 0.0 && rho2 == 0.0)) {
    throw std::invalid_argument(
        "preference exponents must be non-negative and not both zero");
  }
}

bool cell_enabled(std::span<const std::uint8_t> enabled, std::size_t m) {
  return enabled.empty() || enabled[m] != 0;
}

double unit_preference(const Network& net, std::size_t m, std::size_t k,
                       std::size_t m2, std::size_t j2,
                       std::span<const double> lambda,
                       const PreferenceParams& prefs) {
  const auto& h = net.realization();
  const double num = prefs.rho1 * lambda[m2] * log_magnitude(h.hb2(m2, j2, k));
  const double den = prefs.rho2 * log_magnitude(h.hb2(m, j2, k));
  return std::exp(num - den);
}

double utility_with(const Network& net, const TerrestrialMatching& psi,
                    std::size_t k, std::span<const double> lambda,
                    std::size_t m, std::size_t j) {
  auto occ = occupants(psi, k);
  occ.emplace_back(static_cast<int>(m), static_cast<int>(j));
  return occupants_utility(net, occ, k, lambda);
}

TuasaState tuasa_initialize(const Network& net, std::span<const double> lambda,
                            std::span<const std::uint8_t> enabled, int* loops) {
  (void)lambda;
  const Scenario& s = net.scenario();
  const auto& h = net.realization();
  const std::size_t cells = s.cell_count();
  const std::size_t users = s.user_count();
  const auto subch = static_cast<std::size_t>(s.k_subch());

  TuasaState st;
  st.psi = TerrestrialMatching(cells, users, subch);
  st.crossed.assign(cells * subch, {});
  st.enabled.assign(enabled.begin(), enabled.end());

  std::vector<std::uint8_t> has_pair(subch, 0);
  std::vector<std::uint8_t> exhausted(subch, 0);
  int passes = 0;
  for (;;) {
    // proposals[j] = list of (k, m)
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> proposals(
        users);
    bool any = false;
    for (std::size_t k = 0; k < subch; ++k) {
      if (has_pair[k] || exhausted[k]) continue;
      double best = kNegInf;
      std::size_t bj = 0, bm = 0;
      for (std::size_t j = 0; j < users; ++j) {
        if (st.psi.user_matched(j)) continue;
        for (std::size_t m = 0; m < cells; ++m) {
          if (!cell_enabled(enabled, m) || !s.covers(m, j)) continue;
          if (h.hb2(m, j, k) > best) {
            best = h.hb2(m, j, k);
            bj = j;
            bm = m;
          }
        }
      }
      if (best == kNegInf) {
        exhausted[k] = 1;
        continue;
      }
      proposals[bj].emplace_back(k, bm);
      any = true;
    }
    if (!any) break;
    bool matched = false;
    for (std::size_t j = 0; j < users; ++j) {
      if (proposals[j].empty()) continue;
      auto choice = proposals[j].front();
      for (const auto& [k, m] : proposals[j]) {
        if (h.hb2(m, j, k) > h.hb2(choice.second, j, choice.first)) {
          choice = {k, m};
        }
      }
      st.psi.assign(j, choice.second, choice.first);
      has_pair[choice.first] = 1;
      matched = true;
    }
    if (matched) ++passes;
  }
  if (loops != nullptr) *loops = passes;
  return st;
}

RoundOutcome tuasa_round(TuasaState& st, const Network& net,
                         std::span<const double> lambda,
                         const PreferenceParams& prefs) {
  const Scenario& s = net.scenario();
  const auto& h = net.realization();
  TerrestrialMatching& psi = st.psi;
  const std::size_t cells = psi.cell_count();
  const std::size_t users = psi.user_count();
  const std::size_t subch = psi.subch_count();

  // Per-subchannel accepted candidate, if any.
  std::vector<Candidate> chosen(subch);
  RoundOutcome out;

  for (std::size_t k = 0; k < subch; ++k) {
    std::vector<Candidate> cands;
    for (std::size_t m = 0; m < cells; ++m) {
      if (psi.unit_free(m, k)) continue;
      auto& crossed = st.crossed[m * subch + k];
      if (crossed.empty()) crossed.assign(cells * users, 0);
      double best = kNegInf;
      int bj = kNone, bm = kNone;
      for (std::size_t j = 0; j < users; ++j) {
        if (psi.user_matched(j)) continue;
        const double den = prefs.rho2 * log_magnitude(h.hb2(m, j, k));
        for (std::size_t m2 = 0; m2 < cells; ++m2) {
          if (m2 == m || !psi.unit_free(m2, k) ||
              !cell_enabled(st.enabled, m2) || !s.covers(m2, j) ||
              crossed[m2 * users + j]) {
            continue;
          }
          const double score =
              prefs.rho1 * lambda[m2] * log_magnitude(h.hb2(m2, j, k)) - den;
          if (score > best) {
            best = score;
            bj = static_cast<int>(j);
            bm = static_cast<int>(m2);
          }
        }
      }
      if (bj == kNone) continue;
      ++out.proposals;
      auto it = std::find_if(cands.begin(), cands.end(), [&](const auto& c) {
        return c.user == bj && c.cell == bm;
      });
      if (it == cands.end()) {
        cands.push_back({bj, bm, {m}, 0.0});
      } else {
        it->proposers.push_back(m);
      }
    }
    if (cands.empty()) continue;

    const double base = occupants_utility(net, occupants(psi, k), k, lambda);
    int pick = -1;
    for (std::size_t c = 0; c < cands.size(); ++c) {
      cands[c].gain = utility_with(net, psi, k, lambda,
                                   static_cast<std::size_t>(cands[c].cell),
                                   static_cast<std::size_t>(cands[c].user)) -
                      base;
      if (!(cands[c].gain > 0.0)) continue;
      if (pick < 0 || cands[c].gain > cands[static_cast<std::size_t>(pick)].gain ||
          (cands[c].gain == cands[static_cast<std::size_t>(pick)].gain &&
           std::tie(cands[c].user, cands[c].cell) <
               std::tie(cands[static_cast<std::size_t>(pick)].user,
                        cands[static_cast<std::size_t>(pick)].cell))) {
        pick = static_cast<int>(c);
      }
    }
    for (std::size_t c = 0; c < cands.size(); ++c) {
      if (static_cast<int>(c) == pick) continue;
      for (std::size_t m : cands[c].proposers) {
        st.crossed[m * subch + k]
                  [static_cast<std::size_t>(cands[c].cell) * users +
                   static_cast<std::size_t>(cands[c].user)] = 1;
      }
    }
    if (pick >= 0) chosen[k] = cands[static_cast<std::size_t>(pick)];
  }

  // User rejecting: a user selected on several subchannels keeps the one
  // with the largest utility gain.
  std::vector<int> best_k(users, kNone);
  for (std::size_t k = 0; k < subch; ++k) {
    if (chosen[k].user == kNone) continue;
    const auto j = static_cast<std::size_t>(chosen[k].user);
    if (best_k[j] == kNone ||
        chosen[k].gain > chosen[static_cast<std::size_t>(best_k[j])].gain) {
      best_k[j] = static_cast<int>(k);
    }
  }
  for (std::size_t j = 0; j < users; ++j) {
    if (best_k[j] == kNone) continue;
    const auto k = static_cast<std::size_t>(best_k[j]);
    psi.assign(j, static_cast<std::size_t>(chosen[k].cell), k);
    ++out.accepted;
  }
  out.progressed = out.accepted > 0;
  return out;
}

int complete_access(TuasaState& st, const Network& net,
                    std::span<const double> lambda) {
  const Scenario& s = net.scenario();
  TerrestrialMatching& psi = st.psi;
  const std::size_t cells = psi.cell_count();
  const std::size_t users = psi.user_count();
  const std::size_t subch = psi.subch_count();
  int admitted = 0;

  for (std::size_t j = 0; j < users; ++j) {
    if (psi.user_matched(j)) continue;

    // A free unit reachable directly: take the one that helps its
    // subchannel most.
    double best = kNegInf;
    int bm = kNone, bk = kNone;
    for (std::size_t m = 0; m < cells; ++m) {
      if (!cell_enabled(st.enabled, m) || !s.covers(m, j)) continue;
      for (std::size_t k = 0; k < subch; ++k) {
        if (!psi.unit_free(m, k)) continue;
        const double g =
            utility_with(net, psi, k, lambda, m, j) -
            occupants_utility(net, occupants(psi, k), k, lambda);
        if (g > best) {
          best = g;
          bm = static_cast<int>(m);
          bk = static_cast<int>(k);
        }
      }
    }
    if (bm != kNone) {
      psi.assign(j, static_cast<std::size_t>(bm), static_cast<std::size_t>(bk));
      ++admitted;
      continue;
    }

    // Breadth-first search for an alternating path ending at a free unit.
    std::vector<int> via_unit(users, kNone);  // unit through which user reached
    std::vector<int> parent(users, kNone);
    std::vector<std::uint8_t> seen_user(users, 0);
    std::vector<std::uint8_t> seen_unit(cells * subch, 0);
    std::deque<std::size_t> queue{j};
    seen_user[j] = 1;
    int end_user = kNone, end_unit = kNone;
    while (!queue.empty() && end_unit == kNone) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t m = 0; m < cells && end_unit == kNone; ++m) {
        if (!cell_enabled(st.enabled, m) || !s.covers(m, u)) continue;
        for (std::size_t k = 0; k < subch; ++k) {
          const std::size_t unit = m * subch + k;
          if (seen_unit[unit]) continue;
          seen_unit[unit] = 1;
          const int holder = psi.unit_user(m, k);
          if (holder == kNone) {
            end_user = static_cast<int>(u);
            end_unit = static_cast<int>(unit);
            break;
          }
          const auto hu = static_cast<std::size_t>(holder);
          if (seen_user[hu]) continue;
          seen_user[hu] = 1;
          parent[hu] = static_cast<int>(u);
          via_unit[hu] = static_cast<int>(unit);
          queue.push_back(hu);
        }
      }
    }
    if (end_unit == kNone) continue;

    // Shift users along the path, last hop first.
    auto u = static_cast<std::size_t>(end_user);
    auto target = static_cast<std::size_t>(end_unit);
    for (;;) {
      const int vacated = psi.user_matched(u)
                              ? psi.user_cell(u) * static_cast<int>(subch) +
                                    psi.user_subch(u)
                              : kNone;
      psi.unassign(u);
      psi.assign(u, target / subch, target % subch);
      if (u == j) break;
      target = static_cast<std::size_t>(vacated);
      u = static_cast<std::size_t>(parent[u]);
    }
    ++admitted;
  }
  return admitted;
}

TerrestrialMatching tuasa(const Network& net, std::span<const double> lambda,
                          const TuasaOptions& options, TuasaStats* stats) {
  options.prefs.validate();
  TuasaStats local;
  TuasaState st =
      tuasa_initialize(net, lambda, options.enabled_cells, &local.init_loops);
  for (;;) {
    const RoundOutcome r = tuasa_round(st, net, lambda, options.prefs);
    if (!r.progressed) {
      if (r.proposals > 0) ++local.idle_rounds;
      break;
    }
    ++local.matching_rounds;
  }
  if (options.complete_access) {
    local.completions = complete_access(st, net, lambda);
  }
  if (stats != nullptr) *stats = local;
  return std::move(st.psi);
}

double weighted_objective(const Network& net, const TerrestrialMatching& psi,
                          std::span<const double> lambda,
                          const PreferenceParams& prefs) {
  double v = 0.0;
  for (std::size_t m = 0; m < psi.cell_count(); ++m) {
    v += (1.0 - lambda[m]) * cell_rate_bphz(net, psi, m);
  }
  return v + prefs.mu * static_cast<double>(psi.accessed_count());
}

}  // namespace leo
