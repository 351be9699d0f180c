#include "leo/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "leo/backhaul.hpp"
#include "leo/oracle.hpp"
#include "leo/orchestrator.hpp"
#include "leo/power_control.hpp"
#include "leo/random.hpp"
#include "leo/terrestrial.hpp"

namespace leo::verify {
namespace {

// Stream for instance parameters; distinct from every scenario stream.
constexpr std::uint64_t kInstanceStream = 99;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int pick(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Network make_network(const ScenarioConfig& c, std::uint64_t seed) {
  Scenario s = generate_scenario(c, seed);
  RadioParams rp;
  ChannelRealization real = sample_realization(s, rp, seed);
  return Network(std::move(s), rp, std::move(real));
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

CheckResult start(int id, std::string name) {
  CheckResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

CheckResult finish(CheckResult r, const Timer& t, double limit_s = 0.0) {
  r.seconds = t.seconds();
  r.passed = r.violations == 0 && (limit_s <= 0.0 || r.seconds < limit_s);
  if (limit_s > 0.0 && r.seconds >= limit_s) {
    r.detail += (r.detail.empty() ? "" : "; ") + fmt("over the %.0f s limit", limit_s);
  }
  return r;
}

// Random dense subchannel with up to `max_links` links, noise normalized to 1.
SubchannelModel random_model(Rng& rng, int links) {
  SubchannelModel m;
  const auto n = static_cast<std::size_t>(links);
  m.noise = 1.0;
  m.coupling.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    m.tst.push_back(static_cast<int>(i));
    m.sat.push_back(static_cast<int>(i));
    m.own.push_back(std::pow(10.0, uniform(rng, 1.0, 4.0)));
    m.weight.push_back(uniform(rng, 0.2, 1.2));
    m.power.push_back(uniform(rng, 0.0, 2.0));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) m.coupling[i * n + j] = m.own[i] * std::pow(10.0, uniform(rng, -4.0, -0.5));
    }
  }
  return m;
}

double utility_at(SubchannelModel m, std::size_t i, double p) {
  m.power[i] = p;
  return m.utility();
}

double utility_at(SubchannelModel m, std::size_t i1, double p1, std::size_t i2,
                  double p2) {
  m.power[i1] = p1;
  m.power[i2] = p2;
  return m.utility();
}

std::vector<double> cell_means(const std::vector<ResultRow>& rows,
                               const std::vector<double>& values,
                               double ResultRow::*field) {
  std::vector<double> out;
  for (double v : values) {
    double s = 0.0;
    int n = 0;
    for (const auto& r : rows) {
      if (r.axis_value == v && !std::isnan(r.*field)) {
        s += r.*field;
        ++n;
      }
    }
    out.push_back(n ? s / n : 0.0);
  }
  return out;
}

std::string list(const std::vector<double>& x, const char* f = "%.4g") {
  std::string s = "[";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + fmt(f, x[i]);
  return s + "]";
}

RunConfig with_seeds(RunConfig c, int seeds) {
  c.seed_base = 1;
  c.seed_count = seeds;
  return c;
}

}  // namespace

AccessInstance access_instance(std::uint64_t seed) {
  Rng rng = make_rng(seed, kInstanceStream);
  ScenarioConfig c;
  c.n_tsc = pick(rng, 0, 1);
  c.n_lsc = pick(rng, 0, 3 - c.n_tsc);
  c.n_users = pick(rng, 1, 8);
  c.n_satellites = 2;
  c.k_subch = pick(rng, 1, 3);
  c.q_subch = 2;
  c.macro_radius_m = 400.0;
  c.small_radius_m = 150.0;
  AccessInstance inst{make_network(c, seed), {}};
  for (std::size_t m = 0; m < inst.net.scenario().cell_count(); ++m) {
    inst.lambda.push_back(uniform(rng, 0.0, 1.0));
  }
  return inst;
}

BackhaulInstance backhaul_instance(std::uint64_t seed) {
  Rng rng = make_rng(seed, kInstanceStream);
  ScenarioConfig c;
  c.n_tsc = 0;
  c.n_lsc = pick(rng, 1, 4);
  c.n_users = 4;
  c.n_satellites = pick(rng, 1, 3);
  c.k_subch = 2;
  c.q_subch = pick(rng, 1, 3);
  c.n_r = pick(rng, 1, 2);
  c.projected_area_km2 = 2.0e5;
  BackhaulInstance inst{make_network(c, seed), {}};
  for (std::size_t t = 0; t < inst.net.scenario().tst_count(); ++t) {
    inst.weight.push_back(uniform(rng, 0.2, 1.2));
  }
  return inst;
}

// ---- oracle checks -------------------------------------------------------

CheckResult access_maximality(int instances) {
  Timer timer;
  CheckResult r = start(1, "accessed-user maximality");
  for (int i = 0; i < instances; ++i) {
    const auto inst = access_instance(5000 + static_cast<std::uint64_t>(i));
    const auto psi = tuasa(inst.net, inst.lambda);
    const int best = oracle::max_bipartite(inst.net.scenario());
    ++r.cases;
    if (static_cast<int>(psi.accessed_count()) != best) ++r.violations;
  }
  return finish(r, timer, 10.0);
}

CheckResult round_bound(int instances) {
  Timer timer;
  CheckResult r = start(2, "TUASA round bound");
  for (int i = 0; i < instances; ++i) {
    const auto inst = access_instance(5000 + static_cast<std::uint64_t>(i));
    TuasaStats st;
    const auto psi = tuasa(inst.net, inst.lambda, {}, &st);
    const int j = static_cast<int>(psi.accessed_count());
    const int k = inst.net.scenario().k_subch();
    const int lo = (j + k - 1) / k;
    ++r.cases;
    if (st.rounds() < lo || st.rounds() > j) ++r.violations;
  }
  return finish(r, timer);
}

CheckResult group_stability(int instances) {
  Timer timer;
  CheckResult r = start(3, "group stability");
  for (int i = 0; i < instances; ++i) {
    const auto inst = access_instance(6000 + static_cast<std::uint64_t>(i));
    TuasaOptions opt;
    opt.prefs.rho2 = 0.0;
    const auto psi = tuasa(inst.net, inst.lambda, opt);
    ++r.cases;
    if (!oracle::verify_group_stability(inst.net, psi).empty()) ++r.violations;
  }
  return finish(r, timer, 30.0);
}

CheckResult smpc_monotone(int instances) {
  Timer timer;
  CheckResult r = start(4, "SMPC monotone convergence");
  long long swaps = 0;
  for (int i = 0; i < instances; ++i) {
    const auto inst = backhaul_instance(1000 + static_cast<std::uint64_t>(i));
    const auto res = smpc(inst.net, inst.weight);
    const auto& obj = res.stats.objective;
    bool ok = res.stats.converged;
    for (std::size_t k = 1; k < obj.size(); ++k) ok = ok && obj[k] > obj[k - 1];
    swaps += static_cast<long long>(obj.size()) - 1;
    ++r.cases;
    if (!ok) ++r.violations;
  }
  r.detail = std::to_string(swaps) + " executed swaps";
  return finish(r, timer);
}

CheckResult swap_stability(int instances) {
  Timer timer;
  CheckResult r = start(5, "swap stability");
  for (int i = 0; i < instances; ++i) {
    const auto inst = backhaul_instance(1000 + static_cast<std::uint64_t>(i));
    const auto res = smpc(inst.net, inst.weight);
    ++r.cases;
    if (!oracle::verify_swap_stability(inst.net, res.phi, inst.weight).empty()) {
      ++r.violations;
    }
  }
  return finish(r, timer, 120.0);
}

CheckResult power_control(int instances) {
  Timer timer;
  CheckResult r = start(6, "power-control optimality");
  Rng rng = make_rng(424242, kInstanceStream);
  int bad3 = 0, bad1 = 0, below2 = 0;
  for (int i = 0; i < instances; ++i) {
    const auto m = random_model(rng, pick(rng, 1, 4));
    const auto idx = static_cast<std::size_t>(pick(rng, 0, static_cast<int>(m.size()) - 1));
    const double hi = uniform(rng, 0.2, 2.0);
    const auto got = solve_pc3(m, idx, 0.0, hi);
    const auto grid = oracle::grid_1d([&](double p) { return utility_at(m, idx, p); },
                                      0.0, hi, 100000);
    if (got.value < grid.value - 1e-6 * std::max(1.0, std::abs(grid.value))) ++bad3;
  }
  for (int i = 0; i < instances; ++i) {
    const auto a = random_model(rng, pick(rng, 1, 3));
    const auto b = random_model(rng, pick(rng, 1, 3));
    const auto ia = static_cast<std::size_t>(pick(rng, 0, static_cast<int>(a.size()) - 1));
    const auto ib = static_cast<std::size_t>(pick(rng, 0, static_cast<int>(b.size()) - 1));
    const double budget = uniform(rng, 0.2, 2.0);
    const auto got = solve_pc1(a, ia, b, ib, budget);
    const auto grid = oracle::grid_simplex(
        [&](double p1, double p2) { return utility_at(a, ia, p1) + utility_at(b, ib, p2); },
        budget, 300);
    if (got.value < grid.value - 1e-3 * std::max(1.0, std::abs(grid.value))) ++bad1;
  }
  for (int i = 0; i < instances; ++i) {
    const auto m = random_model(rng, pick(rng, 2, 4));
    const auto i1 = static_cast<std::size_t>(pick(rng, 0, static_cast<int>(m.size()) - 1));
    auto i2 = static_cast<std::size_t>(pick(rng, 0, static_cast<int>(m.size()) - 2));
    if (i2 >= i1) ++i2;
    const double budget = uniform(rng, 0.2, 2.0);
    const auto got = solve_pc2(m, i1, i2, budget);
    const auto grid = oracle::grid_simplex(
        [&](double p1, double p2) { return utility_at(m, i1, p1, i2, p2); }, budget, 300);
    if (got.value < 0.99 * grid.value) ++below2;
  }
  r.cases = 3 * instances;
  const bool pc2_ok = below2 <= instances / 20;
  r.violations = bad3 + bad1 + (pc2_ok ? 0 : 1);
  r.detail = "PC3 misses " + std::to_string(bad3) + ", PC1 misses " +
             std::to_string(bad1) + ", PC2 below 0.99 of grid " +
             std::to_string(below2) + "/" + std::to_string(instances);
  return finish(r, timer, 60.0);
}

CheckResult gradients(int states) {
  Timer timer;
  CheckResult r = start(7, "gradient correctness");
  double worst = 0.0;
  for (int i = 0; i < states; ++i) {
    const auto inst = backhaul_instance(7000 + static_cast<std::uint64_t>(i));
    const Network& net = inst.net;
    const auto phi = i % 2 == 0 ? smpc(net, inst.weight).phi
                                : random_backhaul(net, 7000 + static_cast<std::uint64_t>(i));
    const auto w = gradient_matrices(net, phi, inst.weight);
    const double step = 1e-7 * phi.max_power_w();
    for (std::size_t m = 0; m < phi.tst_count(); ++m) {
      for (std::size_t n = 0; n < phi.sat_count(); ++n) {
        for (std::size_t q = 0; q < phi.subch_count(); ++q) {
          BackhaulMatching probe = phi;
          if (probe.unit_tst(n, q) != static_cast<int>(m)) {
            probe.remove(n, q);
            probe.add({static_cast<int>(m), static_cast<int>(n), static_cast<int>(q), 0.0});
          }
          const double ref = oracle::finite_difference_gradient(
              net, probe, inst.weight, static_cast<int>(n), static_cast<int>(q), step);
          const double got = w[m](n, q);
          const double tol = std::max(1e-6, 1e-4 * std::abs(got));
          worst = std::max(worst, std::abs(got - ref) / tol);
          ++r.cases;
          if (std::abs(got - ref) > tol) ++r.violations;
        }
      }
    }
  }
  r.detail = "worst error " + fmt("%.3g", worst) + " of tolerance";
  return finish(r, timer);
}

CheckResult pruning(int instances) {
  Timer timer;
  CheckResult r = start(8, "pruning soundness");
  long long pruned = 0;
  for (int i = 0; i < instances; ++i) {
    const auto inst = backhaul_instance(9000 + static_cast<std::uint64_t>(i));
    const Network& net = inst.net;
    const std::vector<BackhaulMatching> states = {
        smpc_initialize(net, inst.weight, {}),
        random_backhaul(net, 9000 + static_cast<std::uint64_t>(i)),
        smpc(net, inst.weight).phi};
    for (const auto& phi : states) {
      for (const auto& sw : enumerate_swaps(net, phi, inst.weight)) {
        if (prune_keep(net, phi, sw, inst.weight)) continue;
        ++pruned;
        ++r.cases;
        if (evaluate_swap(net, phi, sw, inst.weight).approved) ++r.violations;
      }
    }
  }
  r.detail = std::to_string(pruned) + " pruned candidates force-evaluated";
  return finish(r, timer);
}

CheckResult swap_space() {
  Timer timer;
  CheckResult r = start(9, "swap-space counting");
  for (int sats = 1; sats <= 3; ++sats) {
    for (int subch = 1; subch <= 3; ++subch) {
      for (int tsts = 1; tsts <= 3; ++tsts) {
        for (int n_r = 1; n_r <= 2; ++n_r) {
          const auto got = count_swap_space(tsts, sats, subch, n_r);
          const auto ref = oracle::enumerate_worst_case(tsts, sats, subch, n_r);
          ++r.cases;
          if (got.n12 != ref.n12 || got.n3 != ref.n3 || got.n45 != ref.n45) {
            ++r.violations;
          }
        }
      }
    }
  }
  return finish(r, timer);
}

CheckResult load_split(int instances) {
  Timer timer;
  CheckResult r = start(10, "load split and capacity");
  Rng rng = make_rng(777, kInstanceStream);
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const int n = pick(rng, 1, 4);
    std::vector<double> c, t;
    for (int k = 0; k < n; ++k) {
      c.push_back(uniform(rng, 1e6, 1e8));
      t.push_back(uniform(rng, 2e-3, 20e-3));
    }
    const double load = std::pow(10.0, uniform(rng, 3.0, 7.0));
    const auto l = solve_load_split(c, t, load);
    double sum = 0.0, tau = 0.0;
    for (int k = 0; k < n; ++k) {
      sum += l[static_cast<std::size_t>(k)];
      if (l[static_cast<std::size_t>(k)] > 0.0) tau = std::max(tau, l[static_cast<std::size_t>(k)] / c[static_cast<std::size_t>(k)] + t[static_cast<std::size_t>(k)]);
    }
    double res = std::abs(sum - load) / load;
    for (int k = 0; k < n; ++k) {
      const auto u = static_cast<std::size_t>(k);
      if (l[u] < 0.0) res = std::max(res, 1.0);
      if (l[u] > 0.0) {
        res = std::max(res, std::abs(l[u] / c[u] + t[u] - tau) / tau);
      } else {
        res = std::max(res, std::max(0.0, tau - t[u]) / tau);
      }
    }
    worst = std::max(worst, res);
    ++r.cases;
    if (res > 1e-9) ++r.violations;
  }
  const std::vector<double> c{100e6, 50e6}, t{4e-3, 8e-3};
  const auto l = solve_load_split(c, t, 1e6);
  const double cm = equivalent_capacity(c, t, l);
  auto sig4 = [](double x, double ref) { return std::abs(x - ref) <= 5e-5 * std::abs(ref); };
  ++r.cases;
  if (!sig4(l[0], 0.8e6) || !sig4(l[1], 0.2e6) || !sig4(cm, 83.33e6)) ++r.violations;
  r.detail = "worst residual " + fmt("%.2e", worst) + "; example C_m = " +
             fmt("%.4g", cm * 1e-6) + " Mbps";
  return finish(r, timer);
}

std::vector<CheckResult> oracle_checks() {
  return {access_maximality(), round_bound(), group_stability(),
          smpc_monotone(),     swap_stability(), power_control(),
          gradients(),         pruning(),        swap_space(),
          load_split()};
}

// ---- trend checks --------------------------------------------------------

CheckResult constraints(const RunConfig& desk, int seeds) {
  Timer timer;
  CheckResult r = start(11, "backhaul constraint satisfaction");
  const RunConfig c = with_seeds(desk, seeds);
  std::vector<int> bad(static_cast<std::size_t>(seeds), 0);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < seeds; ++i) {
    const Network net = build_network(c, c.seeds()[static_cast<std::size_t>(i)]);
    const RunResult res = run_lits(net, c.lits);
    bad[static_cast<std::size_t>(i)] = static_cast<int>(check_constraints(net, res).size());
  }
  r.cases = seeds;
  for (int b : bad) r.violations += b > 0 ? 1 : 0;
  return finish(r, timer);
}

CheckResult integration_gain(const RunConfig& desk, int seeds) {
  Timer timer;
  CheckResult r = start(12, "integration gain");
  RunConfig c = with_seeds(desk, seeds);
  c.axis = Axis::kNone;
  double mean[4] = {};
  const Scheme schemes[4] = {Scheme::kIdeal, Scheme::kLits, Scheme::kNits, Scheme::kTth};
  for (int k = 0; k < 4; ++k) {
    c.scheme = schemes[k];
    for (const auto& row : sweep_parallel(c)) mean[k] += row.sum_rate_mbps / seeds;
  }
  const double ideal = mean[0], lits = mean[1], nits = mean[2], tth = mean[3];
  r.cases = seeds;
  const bool order = ideal >= lits && lits >= std::max(nits, tth);
  const bool margin = lits >= 1.05 * nits && lits >= 1.05 * tth;
  r.violations = (order ? 0 : 1) + (margin ? 0 : 1);
  r.detail = "mean Mbps ideal " + fmt("%.1f", ideal) + ", lits " + fmt("%.1f", lits) +
             ", nits " + fmt("%.1f", nits) + ", tth " + fmt("%.1f", tth);
  return finish(r, timer, 300.0);
}

CheckResult satellite_returns(const RunConfig& desk, int seeds) {
  Timer timer;
  CheckResult r = start(13, "diminishing returns in satellites");
  const std::vector<double> ns{2, 4, 6, 8};
  std::vector<double> cap[2];
  for (int n_r = 1; n_r <= 2; ++n_r) {
    RunConfig c = with_seeds(desk, seeds);
    c.scenario.n_r = n_r;
    const int total = static_cast<int>(ns.size()) * seeds;
    std::vector<double> v(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < total; ++i) {
      const RunConfig ci = with_axis(c, Axis::kNSatellites, ns[static_cast<std::size_t>(i / seeds)]);
      const Network net = build_network(ci, c.seeds()[static_cast<std::size_t>(i % seeds)]);
      SmpcOptions opt;
      opt.prefs = ci.lits.prefs;
      opt.prune = ci.lits.prune;
      v[static_cast<std::size_t>(i)] = constellation_capacity_bps(net, opt) * 1e-6;
    }
    for (std::size_t a = 0; a < ns.size(); ++a) {
      double s = 0.0;
      for (int k = 0; k < seeds; ++k) s += v[a * static_cast<std::size_t>(seeds) + static_cast<std::size_t>(k)];
      cap[n_r - 1].push_back(s / seeds);
    }
  }
  const auto& c2 = cap[1];
  const auto& c1 = cap[0];
  r.cases = 4;
  for (std::size_t a = 1; a < c2.size(); ++a) {
    if (c2[a] < c2[a - 1]) ++r.violations;
  }
  if (!(c2[3] - c2[2] < c2[1] - c2[0])) ++r.violations;
  for (std::size_t a = 0; a < c2.size(); ++a) {
    if (!(c2[a] > c1[a])) ++r.violations;
  }
  r.detail = "Mbps at N=2,4,6,8: N_r=2 " + list(c2) + ", N_r=1 " + list(c1);
  return finish(r, timer);
}

CheckResult area_optimum(const RunConfig& desk, int seeds) {
  Timer timer;
  CheckResult r = start(14, "projected-area optimum");
  const std::vector<double> areas{1.0e4, 1.0e5, 1.0e6, 4.0e6, 1.6e7};
  RunConfig c = with_seeds(desk, seeds);
  const int total = static_cast<int>(areas.size()) * seeds;
  std::vector<double> v(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < total; ++i) {
    const RunConfig ci =
        with_axis(c, Axis::kProjectedArea, areas[static_cast<std::size_t>(i / seeds)]);
    const Network net = build_network(ci, c.seeds()[static_cast<std::size_t>(i % seeds)]);
    SmpcOptions opt;
    opt.prefs = ci.lits.prefs;
    opt.prune = ci.lits.prune;
    v[static_cast<std::size_t>(i)] = constellation_capacity_bps(net, opt) * 1e-6;
  }
  std::vector<double> mean;
  for (std::size_t a = 0; a < areas.size(); ++a) {
    double s = 0.0;
    for (int k = 0; k < seeds; ++k) s += v[a * static_cast<std::size_t>(seeds) + static_cast<std::size_t>(k)];
    mean.push_back(s / seeds);
  }
  const double peak = *std::max_element(mean.begin() + 1, mean.end() - 1);
  r.cases = static_cast<int>(areas.size());
  if (!(peak > mean.front() && peak > mean.back())) r.violations = 1;
  r.detail = "areas " + list(areas, "%.0e") + " km2 -> Mbps " + list(mean);
  return finish(r, timer);
}

CheckResult delay_crossover(const RunConfig& desk, int seeds) {
  Timer timer;
  CheckResult r = start(15, "delay crossover");
  RunConfig c = with_seeds(desk, seeds);
  c.scheme = Scheme::kLits;
  c.axis = Axis::kTrafficLoad;
  // One decade up from the default per-user rate.
  const double base = ScenarioConfig{}.data_bytes_per_s;
  c.values = {base, 2.0 * base, 5.0 * base, 10.0 * base};
  const auto rows = sweep_parallel(c);
  const auto tsc = cell_means(rows, c.values, &ResultRow::mean_tsc_delay_ms);
  const auto lsc = cell_means(rows, c.values, &ResultRow::mean_lsc_delay_ms);
  const auto frac = cell_means(rows, c.values, &ResultRow::lsc_user_fraction);
  r.cases = static_cast<int>(c.values.size());
  if (!(tsc.front() < lsc.front())) ++r.violations;
  if (!(tsc.back() > lsc.back())) ++r.violations;
  for (std::size_t a = 1; a < frac.size(); ++a) {
    if (frac[a] < frac[a - 1]) ++r.violations;
  }
  r.detail = "data " + list(c.values) + " B/s: TSC ms " + list(tsc) + ", LSC ms " +
             list(lsc) + ", LSC fraction " + list(frac, "%.3f");
  return finish(r, timer);
}

CheckResult determinism(const RunConfig& desk) {
  Timer timer;
  CheckResult r = start(16, "determinism");
  RunConfig c = with_seeds(desk, 2);
  c.scheme = Scheme::kLits;
  c.axis = Axis::kNSatellites;
  c.values = {2, 4};
  auto csv = [](const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    write_rows_csv(os, rows);
    write_aggregate_csv(os, aggregate(rows));
    return os.str();
  };
  const std::string a = csv(sweep_serial(c));
  const std::string b = csv(sweep_serial(c));
  const std::string p = csv(sweep_parallel(c));
  const Network net = build_network(c, 7);
  const std::string j1 = result_to_json(net, run_lits(net, c.lits)).dump();
  const std::string j2 = result_to_json(net, run_lits(net, c.lits)).dump();
  r.cases = 3;
  r.violations = (a == b ? 0 : 1) + (a == p ? 0 : 1) + (j1 == j2 ? 0 : 1);
  return finish(r, timer);
}

std::string format_result(const CheckResult& r) {
  std::string s = std::string(r.passed ? "[PASS] " : "[FAIL] ") +
                  std::to_string(r.id) + " " + r.name + ": " +
                  std::to_string(r.cases) + " cases, " +
                  std::to_string(r.violations) + " violations, " +
                  fmt("%.2f", r.seconds) + " s";
  if (!r.detail.empty()) s += "; " + r.detail;
  return s;
}

}  // namespace leo::verify
