#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "leo/oracle.hpp"
#include "leo/terrestrial.hpp"
#include "leo/verify.hpp"

namespace leo {
namespace {

Network pref_net() {
  const Scenario s = test::scenario(
      {test::cell(CellKind::kMacro, 0, 0, 1000), test::cell(CellKind::kTraditional, 400, 0, 200)},
      {test::user(400, 10)}, {}, 1);
  return test::network(s);
}

TEST(UnitPreference, HandEvaluation) {
  Network net = pref_net();
  auto& h = net.mutable_realization();
  h.hb2(1, 0, 0) = 16.0;  // |h| = 4 towards the candidate's own cell
  h.hb2(0, 0, 0) = 4.0;   // |h| = 2 towards the proposing unit
  const std::vector<double> lambda{1.0, 1.0};
  PreferenceParams p;
  EXPECT_NEAR(unit_preference(net, 0, 0, 1, 0, lambda, p), 2.0, 1e-12);
  p.rho2 = 0.0;
  EXPECT_NEAR(unit_preference(net, 0, 0, 1, 0, lambda, p), 4.0, 1e-12);
  p.rho1 = 0.0;
  p.rho2 = 1.0;
  EXPECT_NEAR(unit_preference(net, 0, 0, 1, 0, lambda, p), 0.5, 1e-12);
  h.hb2(1, 0, 0) = 1e6;  // pessimistic score ignores the own-cell gain
  EXPECT_NEAR(unit_preference(net, 0, 0, 1, 0, lambda, p), 0.5, 1e-12);
}

TEST(PreferenceParams, Validation) {
  PreferenceParams p;
  p.rho1 = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(TuasaInitialize, SingleUserTakesBestSubchannel) {
  const Scenario s = test::scenario({test::cell(CellKind::kMacro, 0, 0, 1000)},
                                    {test::user(50, 0)}, {}, 2);
  Network net = test::network(s);
  auto& h = net.mutable_realization();
  h.hb2(0, 0, 0) = 1e-9;
  h.hb2(0, 0, 1) = 1e-8;
  const std::vector<double> lambda{0.5};
  const TuasaState st = tuasa_initialize(net, lambda);
  EXPECT_TRUE(st.psi.has(0, 0, 1));
  EXPECT_TRUE(st.psi.unit_free(0, 0));
}

TEST(Tuasa, UncoveredUserStaysUnmatched) {
  const Scenario s = test::scenario(
      {test::cell(CellKind::kMacro, 0, 0, 1000), test::cell(CellKind::kTraditional, 400, 0, 200)},
      {test::user(50, 0), test::user(2000, 0)}, {}, 2);
  const Network net = test::network(s);
  const std::vector<double> lambda{0.5, 0.5};
  const auto psi = tuasa(net, lambda);
  EXPECT_TRUE(psi.user_matched(0));
  EXPECT_FALSE(psi.user_matched(1));
  EXPECT_FALSE(tuasa_initialize(net, lambda).psi.user_matched(1));
}

TEST(Tuasa, NoUsersGivesEmptyMatching) {
  const Scenario s = test::scenario({test::cell(CellKind::kMacro, 0, 0, 1000)}, {}, {}, 3);
  const Network net = test::network(s);
  const std::vector<double> lambda{0.5};
  TuasaStats st;
  const auto psi = tuasa(net, lambda, {}, &st);
  EXPECT_EQ(psi.accessed_count(), 0u);
  EXPECT_EQ(st.rounds(), 0);
}

TEST(TuasaRound, NothingToDoMeansNoProgress) {
  const Scenario s = test::scenario({test::cell(CellKind::kMacro, 0, 0, 1000)},
                                    {test::user(50, 0)}, {}, 2);
  const Network net = test::network(s);
  const std::vector<double> lambda{0.5};
  TuasaState st = tuasa_initialize(net, lambda);
  ASSERT_EQ(st.psi.accessed_count(), 1u);
  EXPECT_FALSE(tuasa_round(st, net, lambda, {}).progressed);
}

TEST(Tuasa, StructuralConstraintsOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto inst = verify::access_instance(seed);
    const Scenario& s = inst.net.scenario();
    const auto psi = tuasa(inst.net, inst.lambda);
    std::set<std::pair<int, int>> units;
    std::set<int> users;
    for (const auto& p : psi.pairs()) {
      EXPECT_TRUE(s.covers(static_cast<std::size_t>(p.cell), static_cast<std::size_t>(p.user)));
      EXPECT_TRUE(units.insert({p.cell, p.subch}).second);
      EXPECT_TRUE(users.insert(p.user).second);
    }
    EXPECT_EQ(static_cast<int>(psi.accessed_count()), oracle::max_bipartite(s)) << seed;
  }
}

TEST(Tuasa, DisabledCellsServeNobody) {
  const auto inst = verify::access_instance(17);
  TuasaOptions opt;
  opt.enabled_cells.assign(inst.net.scenario().cell_count(), 1);
  opt.enabled_cells[0] = 0;
  const auto psi = tuasa(inst.net, inst.lambda, opt);
  for (const auto& p : psi.pairs()) EXPECT_NE(p.cell, 0);
}

TEST(WeightedObjective, EmptyAndUnitMultipliers) {
  const auto inst = verify::access_instance(3);
  const Network& net = inst.net;
  const Scenario& s = net.scenario();
  PreferenceParams p;
  p.mu = 1.7;
  const TerrestrialMatching empty(s.cell_count(), s.user_count(),
                                  static_cast<std::size_t>(s.k_subch()));
  EXPECT_EQ(weighted_objective(net, empty, inst.lambda, p), 0.0);
  const auto psi = tuasa(net, inst.lambda);
  const std::vector<double> ones(s.cell_count(), 1.0);
  EXPECT_NEAR(weighted_objective(net, psi, ones, p), 1.7 * psi.accessed_count(), 1e-12);
}

TEST(WeightedObjective, TermByTermRecomputation) {
  for (std::uint64_t seed = 20; seed < 30; ++seed) {
    const auto inst = verify::access_instance(seed);
    const Network& net = inst.net;
    const auto psi = tuasa(net, inst.lambda);
    double ref = 0.0;
    for (const auto& pr : psi.pairs()) {
      const auto m = static_cast<std::size_t>(pr.cell);
      ref += (1.0 - inst.lambda[m]) *
             terrestrial_rate(net, psi, m, static_cast<std::size_t>(pr.user),
                              static_cast<std::size_t>(pr.subch));
    }
    ref += 1.0 * psi.accessed_count();
    EXPECT_NEAR(weighted_objective(net, psi, inst.lambda, {}), ref, 1e-9);
  }
}

TEST(UtilityWith, AddsOneOccupant) {
  const auto inst = verify::access_instance(41);
  const Network& net = inst.net;
  const Scenario& s = net.scenario();
  TerrestrialMatching psi(s.cell_count(), s.user_count(), static_cast<std::size_t>(s.k_subch()));
  for (std::size_t j = 0; j < s.user_count(); ++j) {
    if (!s.covers(0, j)) continue;
    psi.assign(j, 0, 0);
    const double ref = (1.0 - inst.lambda[0]) * terrestrial_rate(net, psi, 0, j, 0);
    psi.unassign(j);
    EXPECT_NEAR(utility_with(net, psi, 0, inst.lambda, 0, j), ref, 1e-12);
    break;
  }
}

}  // namespace
}  // namespace leo
