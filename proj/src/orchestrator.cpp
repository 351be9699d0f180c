#include "leo/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

namespace leo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double to_mbps(double bps) { return bps * 1e-6; }

std::vector<double> cell_rates(const Network& net,
                               const TerrestrialMatching& psi) {
  std::vector<double> r(psi.cell_count());
  for (std::size_t m = 0; m < r.size(); ++m) r[m] = cell_rate(net, psi, m);
  return r;
}

double user_rate(const Network& net, const TerrestrialMatching& psi,
                 std::size_t j) {
  return terrestrial_rate(net, psi, static_cast<std::size_t>(psi.user_cell(j)),
                          j, static_cast<std::size_t>(psi.user_subch(j)));
}

double cell_demand_bits(const Scenario& s, const TerrestrialMatching& psi,
                        std::size_t m) {
  double d = 0.0;
  for (std::size_t j = 0; j < psi.user_count(); ++j) {
    if (psi.user_cell(j) == static_cast<int>(m)) {
      d += 8.0 * s.users()[j].data_bytes_per_s;
    }
  }
  return d;
}

// Per-TST link capacities and satellite delays for a fixed backhaul.
struct LinkTable {
  std::vector<std::vector<double>> link_bps;
  std::vector<double> delay_s;
};

LinkTable link_table(const Network& net, const BackhaulMatching& phi) {
  LinkTable lt;
  const BackhaulCapacity cap = backhaul_capacity(net, phi);
  lt.link_bps = cap.link_bps;
  for (std::size_t n = 0; n < phi.sat_count(); ++n) {
    lt.delay_s.push_back(propagation_delay(net.scenario(), n));
  }
  return lt;
}

double lsc_capacity(const LinkTable& lt, std::size_t t, double traffic) {
  if (traffic <= 0.0) return 0.0;
  const auto& c = lt.link_bps[t];
  if (std::none_of(c.begin(), c.end(), [](double x) { return x > 0.0; })) {
    return 0.0;
  }
  const auto loads = solve_load_split(c, lt.delay_s, traffic);
  return equivalent_capacity(c, lt.delay_s, loads);
}

enum class LscBackhaul { kSmpc, kRandom, kGreedy, kFixed };

struct EngineSpec {
  Scheme scheme = Scheme::kLits;
  std::vector<std::uint8_t> enabled;  // empty: all cells
  LscBackhaul lsc = LscBackhaul::kSmpc;
  bool ideal = false;
};

bool uses_satellites(const Scenario& s, const EngineSpec& spec) {
  if (spec.ideal || spec.lsc == LscBackhaul::kFixed) return false;
  for (std::size_t t = 0; t < s.tst_count(); ++t) {
    if (cell_enabled(spec.enabled, s.tst_cell(t))) return true;
  }
  return false;
}

void check_finite(double v, const char* what, int t) {
  if (!std::isfinite(v)) {
    throw NumericalError(std::string("non-finite ") + what + " at iteration " +
                         std::to_string(t));
  }
}

RunResult run_engine(const Network& net, const LitsOptions& options,
                     const EngineSpec& spec) {
  options.prefs.validate();
  options.dual.validate();
  const Scenario& s = net.scenario();
  const std::size_t cells = s.cell_count();
  const bool satellites = uses_satellites(s, spec);

  TuasaOptions topt;
  topt.prefs = options.prefs;
  topt.complete_access = options.complete_access;
  topt.enabled_cells = spec.enabled;
  SmpcOptions sopt;
  sopt.prefs = options.prefs;
  sopt.prune = options.prune;

  std::map<std::vector<double>, TerrestrialMatching> tuasa_memo;
  std::map<std::vector<double>, BackhaulMatching> smpc_memo;
  std::optional<BackhaulMatching> fixed_phi;
  if (spec.lsc == LscBackhaul::kRandom) {
    fixed_phi = random_backhaul(net, net.realization().seed());
  } else if (spec.lsc == LscBackhaul::kGreedy) {
    fixed_phi = greedy_backhaul(net);
  }

  RunResult res;
  res.scheme = spec.scheme;
  res.phi = BackhaulMatching(s.tst_count(), s.satellite_count(),
                             static_cast<std::size_t>(s.q_subch()),
                             net.params().tst_max_power_w);

  DualState st = initial_dual_state(cells, options.dual);
  // The multipliers oscillate, so the best repaired iterate is returned.
  TerrestrialMatching best_psi;
  BackhaulMatching best_phi = res.phi;
  double best_objective = -kInf;
  while (st.t < options.dual.max_iterations && !stop_rule(options.dual, st.t)) {
    auto it = tuasa_memo.find(st.lambda);
    if (it == tuasa_memo.end()) {
      it = tuasa_memo.emplace(st.lambda, tuasa(net, st.lambda, topt)).first;
    }
    TerrestrialMatching psi = it->second;

    if (satellites) {
      if (fixed_phi) {
        res.phi = *fixed_phi;
      } else {
        const std::vector<double> w = tst_weights(s, st.lambda);
        auto jt = smpc_memo.find(w);
        if (jt == smpc_memo.end()) {
          jt = smpc_memo.emplace(w, smpc(net, w, sopt).phi).first;
          ++res.smpc_runs;
        }
        res.phi = jt->second;
      }
    }
    const LinkTable lt = link_table(net, res.phi);
    const CapacityFn capacity = [&](std::size_t m, double traffic) {
      if (spec.ideal) return kInf;
      if (s.is_lsc(m) && spec.lsc != LscBackhaul::kFixed) {
        return lsc_capacity(lt, m - 1 - s.tsc_count(), traffic);
      }
      return s.cells()[m].fixed_backhaul_bps;
    };

    const std::vector<double> rate = cell_rates(net, psi);
    const std::vector<double> traffic = cell_traffic(net, psi);
    std::vector<double> rate_mbps(cells), cap_mbps(cells);
    double violation = 0.0;
    for (std::size_t m = 0; m < cells; ++m) {
      check_finite(rate[m], "cell rate", st.t);
      const double c = capacity(m, traffic[m]);
      rate_mbps[m] = to_mbps(rate[m]);
      cap_mbps[m] = to_mbps(c);
      if (cell_enabled(spec.enabled, m) && std::isfinite(c)) {
        violation = std::max(violation, to_mbps(rate[m] - c));
      }
    }

    repair_backhaul(net, psi, capacity);
    IterationRecord rec;
    rec.t = st.t;
    rec.delta = st.delta;
    rec.objective = evaluate_objective(net, psi, options.prefs.mu);
    check_finite(rec.objective, "objective", st.t);
    for (double r : cell_rates(net, psi)) rec.sum_rate_mbps += to_mbps(r);
    rec.accessed_users = static_cast<int>(psi.accessed_count());
    rec.max_violation_mbps = violation;
    rec.lambda = st.lambda;
    if (rec.objective > best_objective) {
      best_objective = rec.objective;
      best_psi = std::move(psi);
      best_phi = res.phi;
      res.best_iteration = st.t;
    }
    st.history.push_back(std::move(rec));

    st = lagrangian_update(std::move(st), rate_mbps, cap_mbps, options.dual);
  }

  res.psi = std::move(best_psi);
  res.phi = std::move(best_phi);
  res.iterations = st.t;
  res.lambda = st.lambda;
  res.history = std::move(st.history);
  res.rate_bps = cell_rates(net, res.psi);
  res.traffic_bits = cell_traffic(net, res.psi);

  std::vector<double> tst_traffic(s.tst_count(), 0.0);
  for (std::size_t t = 0; t < s.tst_count(); ++t) {
    tst_traffic[t] = res.traffic_bits[s.tst_cell(t)];
  }
  res.backhaul = backhaul_capacity(net, res.phi, tst_traffic);
  res.capacity_bps.assign(cells, 0.0);
  res.delay_s.assign(cells, 0.0);
  res.users.assign(cells, 0);
  for (std::size_t j = 0; j < res.psi.user_count(); ++j) {
    if (res.psi.user_matched(j)) {
      ++res.users[static_cast<std::size_t>(res.psi.user_cell(j))];
    }
  }
  for (std::size_t m = 0; m < cells; ++m) {
    const double l = res.traffic_bits[m];
    if (spec.ideal) {
      res.capacity_bps[m] = kInf;
      res.delay_s[m] = 0.0;
    } else if (s.is_lsc(m) && spec.lsc != LscBackhaul::kFixed) {
      const std::size_t t = m - 1 - s.tsc_count();
      res.capacity_bps[m] = res.backhaul.equivalent_bps[t];
      res.delay_s[m] = res.backhaul.delay_s[t];
    } else {
      res.capacity_bps[m] = s.cells()[m].fixed_backhaul_bps;
      res.delay_s[m] = fixed_backhaul_delay(l, res.capacity_bps[m]);
    }
  }
  res.accessed = static_cast<int>(res.psi.accessed_count());
  for (double r : res.rate_bps) res.sum_rate_bps += r;
  res.objective = evaluate_objective(net, res.psi, options.prefs.mu);
  return res;
}

std::vector<std::uint8_t> mask(const Scenario& s, bool macro, bool tsc,
                               bool lsc) {
  std::vector<std::uint8_t> m(s.cell_count(), 0);
  for (std::size_t c = 0; c < m.size(); ++c) {
    m[c] = c == 0 ? macro : (s.is_tsc(c) ? tsc : lsc);
  }
  return m;
}

}  // namespace

void DualParams::validate() const {
  if (!(delta0 > 0.0) || !(gamma > 0.0 && gamma < 1.0) || !(epsilon > 0.0) ||
      !(lambda0 >= 0.0) || max_iterations < 1) {
    throw ConfigError("invalid dual parameters");
  }
}

double step_size(const DualParams& p, int t) {
  return p.delta0 * std::pow(p.gamma, t);
}

bool stop_rule(const DualParams& p, int t) {
  return std::abs(step_size(p, t + 1) - step_size(p, t)) < p.epsilon;
}

int iteration_bound(const DualParams& p) {
  int t = 0;
  while (t < p.max_iterations && !stop_rule(p, t)) ++t;
  return t;
}

DualState initial_dual_state(std::size_t cells, const DualParams& p) {
  DualState st;
  st.lambda.assign(cells, p.lambda0);
  st.delta = step_size(p, 0);
  return st;
}

DualState lagrangian_update(DualState state, std::span<const double> rate_mbps,
                            std::span<const double> capacity_mbps,
                            const DualParams& p) {
  for (std::size_t m = 0; m < state.lambda.size(); ++m) {
    const double slack = capacity_mbps[m] - rate_mbps[m];
    if (slack == 0.0) continue;
    state.lambda[m] = std::max(0.0, state.lambda[m] - state.delta * slack);
  }
  ++state.t;
  state.delta = step_size(p, state.t);
  return state;
}

std::vector<double> cell_traffic(const Network& net,
                                 const TerrestrialMatching& psi) {
  std::vector<double> l(psi.cell_count());
  for (std::size_t m = 0; m < l.size(); ++m) {
    l[m] = std::min(cell_rate(net, psi, m) * 1.0,
                    cell_demand_bits(net.scenario(), psi, m));
  }
  return l;
}

int repair_backhaul(const Network& net, TerrestrialMatching& psi,
                    const CapacityFn& capacity) {
  const Scenario& s = net.scenario();
  int removed = 0;
  for (;;) {
    bool violated = false;
    for (std::size_t m = 0; m < psi.cell_count(); ++m) {
      for (;;) {
        const double r = cell_rate(net, psi, m);
        if (r <= 0.0) break;
        const double l = std::min(r, cell_demand_bits(s, psi, m));
        if (r <= capacity(m, l)) break;
        int worst = kNone;
        double worst_rate = kInf;
        for (std::size_t j = 0; j < psi.user_count(); ++j) {
          if (psi.user_cell(j) != static_cast<int>(m)) continue;
          const double uj = user_rate(net, psi, j);
          if (uj < worst_rate) {
            worst_rate = uj;
            worst = static_cast<int>(j);
          }
        }
        psi.unassign(static_cast<std::size_t>(worst));
        ++removed;
        violated = true;
      }
    }
    // Removals lower interference elsewhere, so re-check every cell.
    if (!violated) break;
  }
  return removed;
}

TerrestrialMatching repair_backhaul(const Network& net, TerrestrialMatching psi,
                                    std::span<const double> capacity_bps) {
  repair_backhaul(net, psi,
                  [&](std::size_t m, double) { return capacity_bps[m]; });
  return psi;
}

double fixed_backhaul_delay(double traffic_bits, double capacity_bps) {
  if (traffic_bits <= 0.0) return 0.0;
  if (capacity_bps <= 0.0) return kInf;
  return traffic_bits / capacity_bps;
}

double evaluate_objective(const Network& net, const TerrestrialMatching& psi,
                          double mu) {
  double v = 0.0;
  for (std::size_t m = 0; m < psi.cell_count(); ++m) {
    v += cell_rate_bphz(net, psi, m);
  }
  return v + mu * static_cast<double>(psi.accessed_count());
}

Scheme parse_scheme(const std::string& name) {
  if (name == "lits") return Scheme::kLits;
  if (name == "ideal") return Scheme::kIdeal;
  if (name == "tth") return Scheme::kTth;
  if (name == "nits") return Scheme::kNits;
  if (name == "random") return Scheme::kRandom;
  if (name == "greedy") return Scheme::kGreedy;
  throw ConfigError("unknown scheme '" + name + "'");
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kLits: return "lits";
    case Scheme::kIdeal: return "ideal";
    case Scheme::kTth: return "tth";
    case Scheme::kNits: return "nits";
    case Scheme::kRandom: return "random";
    case Scheme::kGreedy: return "greedy";
  }
  return "?";
}

double RunResult::total_backhaul_bps() const {
  double c = 0.0;
  for (double x : backhaul.raw_bps) c += x;
  for (const auto& p : parts) c += p.total_backhaul_bps();
  return c;
}

double RunResult::lsc_user_fraction(const Scenario& s) const {
  if (accessed == 0) return 0.0;
  int lsc = 0;
  for (std::size_t m = 0; m < users.size(); ++m) {
    if (s.is_lsc(m)) lsc += users[m];
  }
  return static_cast<double>(lsc) / accessed;
}

double RunResult::mean_delay_s(const Scenario& s, bool lsc) const {
  double sum = 0.0;
  int n = 0;
  for (std::size_t m = 0; m < delay_s.size(); ++m) {
    const bool match = lsc ? s.is_lsc(m) : s.is_tsc(m);
    if (!match || traffic_bits[m] <= 0.0) continue;
    sum += delay_s[m];
    ++n;
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / n;
}

RunResult run_lits(const Network& net, const LitsOptions& options) {
  return run_engine(net, options, {});
}

RunResult run_baseline(Scheme kind, const Network& net,
                       const LitsOptions& options) {
  const Scenario& s = net.scenario();
  EngineSpec spec;
  spec.scheme = kind;
  switch (kind) {
    case Scheme::kLits:
      return run_lits(net, options);
    case Scheme::kIdeal:
      spec.ideal = true;
      return run_engine(net, options, spec);
    case Scheme::kTth:
      spec.lsc = LscBackhaul::kFixed;
      return run_engine(net, options, spec);
    case Scheme::kRandom:
      spec.lsc = LscBackhaul::kRandom;
      return run_engine(net, options, spec);
    case Scheme::kGreedy:
      spec.lsc = LscBackhaul::kGreedy;
      return run_engine(net, options, spec);
    case Scheme::kNits: {
      EngineSpec terrestrial;
      terrestrial.scheme = kind;
      terrestrial.enabled = mask(s, false, true, false);
      terrestrial.lsc = LscBackhaul::kFixed;
      EngineSpec satellite;
      satellite.scheme = kind;
      satellite.enabled = mask(s, false, false, true);
      RunResult a = run_engine(net, options, terrestrial);
      RunResult b = run_engine(net, options, satellite);
      RunResult r = b;
      for (std::size_t m = 0; m < r.rate_bps.size(); ++m) {
        if (!s.is_tsc(m)) continue;
        r.rate_bps[m] = a.rate_bps[m];
        r.capacity_bps[m] = a.capacity_bps[m];
        r.traffic_bits[m] = a.traffic_bits[m];
        r.delay_s[m] = a.delay_s[m];
        r.users[m] = a.users[m];
        r.lambda[m] = a.lambda[m];
      }
      r.accessed = a.accessed + b.accessed;
      r.sum_rate_bps = a.sum_rate_bps + b.sum_rate_bps;
      r.objective = a.objective + b.objective;
      r.iterations = std::max(a.iterations, b.iterations);
      r.smpc_runs = a.smpc_runs + b.smpc_runs;
      r.history.clear();
      r.parts = {std::move(a), std::move(b)};
      return r;
    }
  }
  throw ConfigError("unknown scheme");
}

double backhaul_delay(std::size_t m, const RunResult& result) {
  return result.delay_s.at(m);
}

std::vector<std::string> check_constraints(const Network& net,
                                           const RunResult& result) {
  std::vector<std::string> err;
  if (!result.parts.empty()) {
    for (const auto& p : result.parts) {
      for (auto& e : check_constraints(net, p)) err.push_back(std::move(e));
    }
    return err;
  }
  for (std::size_t m = 0; m < result.rate_bps.size(); ++m) {
    if (result.rate_bps[m] > result.capacity_bps[m]) {
      err.push_back("cell " + std::to_string(m) + " exceeds its backhaul");
    }
  }
  for (auto& e : validate_backhaul(net, result.phi)) err.push_back(std::move(e));
  return err;
}

}  // namespace leo
