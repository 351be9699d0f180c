#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "leo/harness.hpp"
#include "leo/orchestrator.hpp"
#include "leo/verify.hpp"

namespace leo {
namespace {

TEST(DualSchedule, StepSizeAndStopRule) {
  const DualParams p;
  EXPECT_DOUBLE_EQ(step_size(p, 0), 0.1);
  EXPECT_NEAR(step_size(p, 2), 0.081, 1e-15);
  // First t with 0.1 * 0.9^t * 0.1 < 1e-7.
  int t = 0;
  while (0.1 * std::pow(0.9, t) * 0.1 >= 1e-7) ++t;
  EXPECT_EQ(iteration_bound(p), t);
  EXPECT_EQ(iteration_bound(p), 110);
  EXPECT_TRUE(stop_rule(p, 110));
  EXPECT_FALSE(stop_rule(p, 109));
  DualParams capped = p;
  capped.max_iterations = 7;
  EXPECT_EQ(iteration_bound(capped), 7);
}

TEST(DualParams, Validation) {
  DualParams p;
  p.gamma = 1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = {};
  p.lambda0 = -0.1;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(LagrangianUpdate, ViolationRaisesMultiplier) {
  DualParams p;
  DualState st;
  st.lambda = {0.5, 0.5, 0.05};
  st.delta = 0.01;
  const std::vector<double> rate{40.0, 30.0, 0.0};
  const std::vector<double> cap{30.0, 30.0, 10.0};
  const DualState next = lagrangian_update(st, rate, cap, p);
  EXPECT_NEAR(next.lambda[0], 0.6, 1e-12);
  EXPECT_EQ(next.lambda[1], 0.5);
  EXPECT_EQ(next.lambda[2], 0.0);  // 0.05 - 0.1 clamps at zero
  EXPECT_EQ(next.t, 1);
  EXPECT_DOUBLE_EQ(next.delta, step_size(p, 1));
}

TEST(LagrangianUpdate, InitialState) {
  DualParams p;
  const DualState st = initial_dual_state(4, p);
  EXPECT_EQ(st.lambda, std::vector<double>(4, 0.5));
  EXPECT_EQ(st.delta, 0.1);
  EXPECT_EQ(st.t, 0);
}

TEST(FixedBackhaulDelay, LoadOverCapacity) {
  EXPECT_NEAR(fixed_backhaul_delay(1e6, 25e6), 0.04, 1e-15);
  EXPECT_EQ(fixed_backhaul_delay(0.0, 25e6), 0.0);
  EXPECT_EQ(fixed_backhaul_delay(1e3, 0.0), std::numeric_limits<double>::infinity());
}

// Users' rates in bits/s within one cell of a matching.
double user_bps(const Network& net, const TerrestrialMatching& psi, std::size_t j) {
  const auto m = static_cast<std::size_t>(psi.user_cell(j));
  const auto k = static_cast<std::size_t>(psi.user_subch(j));
  return terrestrial_rate(net, psi, m, j, k) * net.bw_sub_c();
}

TEST(RepairBackhaul, NoViolationLeavesMatchingUnchanged) {
  const auto inst = verify::access_instance(5);
  const auto psi = tuasa(inst.net, inst.lambda);
  std::vector<double> rates;
  for (std::size_t m = 0; m < psi.cell_count(); ++m) rates.push_back(cell_rate(inst.net, psi, m));
  const auto out = repair_backhaul(inst.net, psi, rates);
  EXPECT_EQ(out.pairs(), psi.pairs());
}

TEST(RepairBackhaul, RemovesOnlyTheLowestRateUser) {
  int tested = 0;
  for (std::uint64_t seed = 1; seed < 200 && tested < 10; ++seed) {
    const auto inst = verify::access_instance(seed);
    const Network& net = inst.net;
    const auto psi = tuasa(net, inst.lambda);
    // A cell with at least two users.
    for (std::size_t m = 0; m < psi.cell_count(); ++m) {
      int count = 0, lowest = -1;
      double lowest_rate = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < psi.user_count(); ++j) {
        if (psi.user_cell(j) != static_cast<int>(m)) continue;
        ++count;
        const double r = user_bps(net, psi, j);
        if (r < lowest_rate) {
          lowest_rate = r;
          lowest = static_cast<int>(j);
        }
      }
      if (count < 2) continue;
      std::vector<double> cap(psi.cell_count(), std::numeric_limits<double>::infinity());
      cap[m] = cell_rate(net, psi, m) - 0.5 * lowest_rate;
      const auto out = repair_backhaul(net, psi, cap);
      EXPECT_EQ(out.accessed_count() + 1, psi.accessed_count()) << seed;
      EXPECT_FALSE(out.user_matched(static_cast<std::size_t>(lowest))) << seed;
      ++tested;
      break;
    }
  }
  EXPECT_GE(tested, 5);
}

TEST(RepairBackhaul, ZeroCapacityRemovesEveryone) {
  const auto inst = verify::access_instance(9);
  const auto psi = tuasa(inst.net, inst.lambda);
  ASSERT_GT(psi.accessed_count(), 0u);
  const std::vector<double> zero(psi.cell_count(), 0.0);
  EXPECT_EQ(repair_backhaul(inst.net, psi, zero).accessed_count(), 0u);
}

TEST(EvaluateObjective, TermByTerm) {
  const auto inst = verify::access_instance(12);
  const auto psi = tuasa(inst.net, inst.lambda);
  double ref = 0.0;
  for (const auto& p : psi.pairs()) {
    ref += terrestrial_rate(inst.net, psi, static_cast<std::size_t>(p.cell),
                            static_cast<std::size_t>(p.user), static_cast<std::size_t>(p.subch));
  }
  ref += 2.5 * psi.accessed_count();
  EXPECT_NEAR(evaluate_objective(inst.net, psi, 2.5), ref, 1e-9);
}

RunConfig small_config() {
  RunConfig c = desk_profile();
  c.scenario.n_users = 20;
  c.scenario.n_satellites = 3;
  return c;
}

TEST(RunLits, ReportedStateIsConsistent) {
  const RunConfig c = small_config();
  const Network net = build_network(c, 3);
  const RunResult r = run_lits(net, c.lits);
  EXPECT_NEAR(r.objective, evaluate_objective(net, r.psi, c.lits.prefs.mu), 1e-9);
  EXPECT_EQ(r.accessed, static_cast<int>(r.psi.accessed_count()));
  double sum = 0.0;
  for (std::size_t m = 0; m < r.rate_bps.size(); ++m) {
    EXPECT_NEAR(r.rate_bps[m], cell_rate(net, r.psi, m), 1e-6);
    sum += r.rate_bps[m];
    EXPECT_DOUBLE_EQ(backhaul_delay(m, r), r.delay_s[m]);
  }
  EXPECT_NEAR(r.sum_rate_bps, sum, 1e-3);
  EXPECT_TRUE(check_constraints(net, r).empty());
  EXPECT_LE(r.iterations, iteration_bound(c.lits.dual));
  ASSERT_FALSE(r.history.empty());
  double best = -1.0;
  for (const auto& h : r.history) best = std::max(best, h.objective);
  EXPECT_NEAR(r.objective, best, 1e-9);
}

TEST(RunLits, TrafficIsCappedByRateAndDemand) {
  const RunConfig c = small_config();
  const Network net = build_network(c, 4);
  const RunResult r = run_lits(net, c.lits);
  const auto& s = net.scenario();
  for (std::size_t m = 0; m < r.traffic_bits.size(); ++m) {
    double demand = 0.0;
    for (std::size_t j = 0; j < s.user_count(); ++j) {
      if (r.psi.user_cell(j) == static_cast<int>(m)) demand += 8.0 * s.users()[j].data_bytes_per_s;
    }
    EXPECT_NEAR(r.traffic_bits[m], std::min(r.rate_bps[m], demand), 1e-6);
  }
}

TEST(Baselines, IdealDominatesLits) {
  const RunConfig c = small_config();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Network net = build_network(c, seed);
    const RunResult lits = run_lits(net, c.lits);
    const RunResult ideal = run_baseline(Scheme::kIdeal, net, c.lits);
    EXPECT_GE(ideal.sum_rate_bps, lits.sum_rate_bps * (1.0 - 1e-9)) << seed;
    EXPECT_TRUE(check_constraints(net, ideal).empty());
  }
}

TEST(Baselines, NitsCombinesItsParts) {
  const RunConfig c = small_config();
  const Network net = build_network(c, 2);
  const RunResult r = run_baseline(Scheme::kNits, net, c.lits);
  ASSERT_EQ(r.parts.size(), 2u);
  EXPECT_EQ(r.accessed, r.parts[0].accessed + r.parts[1].accessed);
  EXPECT_NEAR(r.sum_rate_bps, r.parts[0].sum_rate_bps + r.parts[1].sum_rate_bps, 1e-3);
  EXPECT_TRUE(check_constraints(net, r).empty());
  const auto& s = net.scenario();
  EXPECT_EQ(r.users[0], 0);  // the macro is not part of either network
  for (std::size_t m = 1; m < s.cell_count(); ++m) {
    const int part = s.is_tsc(m) ? 0 : 1;
    EXPECT_EQ(r.users[m], r.parts[static_cast<std::size_t>(part)].users[m]);
  }
}

TEST(Baselines, TthWithoutSmallCellBackhaulUsesTheMacroOnly) {
  RunConfig c = small_config();
  c.scenario.tsc_backhaul_min_bps = 0.0;
  c.scenario.tsc_backhaul_max_bps = 0.0;
  const Network net = build_network(c, 6);
  const RunResult r = run_baseline(Scheme::kTth, net, c.lits);
  for (std::size_t m = 1; m < r.users.size(); ++m) EXPECT_EQ(r.users[m], 0) << m;
  EXPECT_GT(r.users[0], 0);
  EXPECT_TRUE(check_constraints(net, r).empty());
}

TEST(RunLits, MacroOnlyTopology) {
  const Scenario s = test::scenario({test::cell(CellKind::kMacro, 0, 0, 1000, 1e12)},
                                    {test::user(100, 0), test::user(-200, 50), test::user(0, 300)},
                                    {}, 4);
  const Network net = test::network(s);
  const RunResult r = run_lits(net);
  EXPECT_EQ(r.accessed, 3);
  EXPECT_NEAR(r.sum_rate_bps, cell_rate(net, r.psi, 0), 1e-6);
  EXPECT_TRUE(check_constraints(net, r).empty());
  EXPECT_TRUE(std::isnan(r.mean_delay_s(s, true)));
  EXPECT_TRUE(std::isnan(r.mean_delay_s(s, false)));
}

TEST(Scheme, NamesRoundTrip) {
  for (Scheme k : {Scheme::kLits, Scheme::kIdeal, Scheme::kTth, Scheme::kNits, Scheme::kRandom,
                   Scheme::kGreedy}) {
    EXPECT_EQ(parse_scheme(scheme_name(k)), k);
  }
  EXPECT_THROW(parse_scheme("best"), ConfigError);
}

}  // namespace
}  // namespace leo
