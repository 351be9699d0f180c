#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "leo/backhaul.hpp"
#include "leo/oracle.hpp"

namespace leo {
namespace {

TEST(ExhaustiveTto, SingleUserSingleUnit) {
  const Scenario s = test::scenario({test::cell(CellKind::kMacro, 0, 0, 1000)},
                                    {test::user(100, 0)}, {}, 1);
  const Network net = test::network(s);
  const std::vector<double> lambda{0.25};
  const auto opt = oracle::exhaustive_tto(net, lambda, 1.0);
  EXPECT_EQ(opt.max_accessed, 1);
  ASSERT_TRUE(opt.best.has(0, 0, 0));
  const double r = terrestrial_rate(net, opt.best, 0, 0, 0);
  EXPECT_NEAR(opt.objective, 0.75 * r + 1.0, 1e-12);
}

TEST(ExhaustiveTto, NoCoverageGivesZero) {
  const Scenario s = test::scenario({test::cell(CellKind::kMacro, 0, 0, 1000)},
                                    {test::user(5000, 0)}, {}, 2);
  const Network net = test::network(s);
  const std::vector<double> lambda{0.5};
  const auto opt = oracle::exhaustive_tto(net, lambda, 1.0);
  EXPECT_EQ(opt.objective, 0.0);
  EXPECT_EQ(opt.max_accessed, 0);
  EXPECT_EQ(opt.best.accessed_count(), 0u);
}

TEST(ExhaustiveTto, RefusesOversizedInstances) {
  std::vector<User> users;
  for (int j = 0; j < 9; ++j) users.push_back(test::user(10.0 * j, 0));
  const Scenario s = test::scenario({test::cell(CellKind::kMacro, 0, 0, 1000)}, users, {}, 1);
  const Network net = test::network(s);
  const std::vector<double> lambda{0.5};
  EXPECT_THROW(oracle::exhaustive_tto(net, lambda, 1.0), oracle::RefusedError);
}

TEST(MaxBipartite, HandCountedInstances) {
  // Two users share one single-subchannel small cell; the macro has two units.
  const Scenario s = test::scenario(
      {test::cell(CellKind::kMacro, 0, 0, 1000), test::cell(CellKind::kTraditional, 500, 0, 200)},
      {test::user(500, 0), test::user(510, 0), test::user(0, 0), test::user(5000, 0)}, {}, 1);
  EXPECT_EQ(oracle::max_bipartite(s), 2);
  const std::vector<std::uint8_t> no_macro{0, 1};
  EXPECT_EQ(oracle::max_bipartite(s, no_macro), 1);
}

// Macro and one small cell sharing a subchannel with swapped gains.
Network crossed_net() {
  const Scenario s = test::scenario(
      {test::cell(CellKind::kMacro, 0, 0, 1000), test::cell(CellKind::kTraditional, 400, 0, 200)},
      {test::user(400, 10), test::user(410, 0)}, {}, 1);
  Network net = test::network(s);
  auto& h = net.mutable_realization();
  const double weak = 1e-14, strong = 1e-9;
  // hb2(m, j, k): user j towards cell m.
  h.hb2(0, 0, 0) = weak;
  h.hb2(1, 0, 0) = strong;
  h.hb2(0, 1, 0) = strong;
  h.hb2(1, 1, 0) = weak;
  return net;
}

TEST(GroupStability, DetectsHandBuiltBlockingPair) {
  const Network net = crossed_net();
  TerrestrialMatching psi(2, 2, 1);
  psi.assign(0, 0, 0);  // each user on the cell it hears worst
  psi.assign(1, 1, 0);
  const auto found = oracle::verify_group_stability(net, psi);
  ASSERT_FALSE(found.empty());
  TerrestrialMatching fixed(2, 2, 1);
  fixed.assign(0, 1, 0);
  fixed.assign(1, 0, 0);
  EXPECT_TRUE(oracle::verify_group_stability(net, fixed).empty());
}

TEST(GroupStability, SingleUserHasNoPair) {
  const Network net = crossed_net();
  TerrestrialMatching psi(2, 2, 1);
  psi.assign(0, 0, 0);
  EXPECT_TRUE(oracle::verify_group_stability(net, psi).empty());
}

TEST(Grid, EndpointsAndMonotoneBoundary) {
  const auto g = oracle::grid_1d([](double p) { return p; }, 0.0, 2.0, 11);
  EXPECT_DOUBLE_EQ(g.p, 2.0);
  EXPECT_DOUBLE_EQ(g.value, 2.0);
  const auto corners = oracle::grid_box([](double a, double b) { return a - b; }, 3.0, 5.0, 1);
  EXPECT_DOUBLE_EQ(corners.p1, 3.0);
  EXPECT_DOUBLE_EQ(corners.p2, 0.0);
  const auto simplex =
      oracle::grid_simplex([](double a, double b) { return a + 2 * b; }, 1.0, 10);
  EXPECT_NEAR(simplex.p2, 1.0, 1e-12);
  EXPECT_NEAR(simplex.value, 2.0, 1e-12);
  const auto zoom =
      oracle::zoom_1d([](double p) { return -(p - 0.3137) * (p - 0.3137); }, 0.0, 1.0, 21, 10);
  EXPECT_NEAR(zoom.p, 0.3137, 1e-6);
}

// One TST and one satellite with `q` subchannels.
Network single_link_net(int q = 1, int n_r = 1) {
  const double h = 800e3;
  const double g = test::range_for_elevation(60.0, h);
  const Scenario s = test::scenario(
      {test::cell(CellKind::kMacro, 0, 0, 1000), test::cell(CellKind::kLeo, 0, 0, 200)},
      {test::user(10, 0)}, {place_satellite(g, 0.0, h)}, 1, q, n_r);
  return test::network(s);
}

TEST(SwapStability, FindsAdditionForUnderusedTst) {
  const Network net = single_link_net(2, 2);
  const std::vector<double> w{1.0};
  BackhaulMatching phi(1, 1, 2, 2.0);
  phi.add({0, 0, 0, 0.2});
  const auto found = oracle::verify_swap_stability(net, phi, w);
  ASSERT_FALSE(found.empty());
  EXPECT_GT(found.front().after, found.front().before);
  EXPECT_TRUE(oracle::verify_swap_stability(net, smpc(net, w).phi, w).empty());
}

TEST(SwapStability, FullPowerLoneLinkIsStable) {
  const Network net = single_link_net();
  const std::vector<double> w{1.0};
  BackhaulMatching phi(1, 1, 1, 2.0);
  phi.add({0, 0, 0, 2.0});
  EXPECT_TRUE(oracle::verify_swap_stability(net, phi, w).empty());
}

TEST(SwapStability, NoVisibleSatelliteMeansNothingToSwap) {
  const double h = 800e3;
  const double g = test::range_for_elevation(10.0, h);
  const Scenario s = test::scenario(
      {test::cell(CellKind::kMacro, 0, 0, 1000), test::cell(CellKind::kLeo, 0, 0, 200)},
      {test::user(10, 0)}, {place_satellite(g, 0.0, h)}, 1, 1, 1);
  const Network net = test::network(s);
  const std::vector<double> w{1.0};
  const BackhaulMatching phi(1, 1, 1, 2.0);
  EXPECT_TRUE(oracle::verify_swap_stability(net, phi, w).empty());
}

TEST(FiniteDifference, LoneLinkDerivativeIsNegativeRateSlope) {
  const Network net = single_link_net();
  const std::vector<double> w{1.0};
  BackhaulMatching phi(1, 1, 1, 2.0);
  phi.add({0, 0, 0, 0.5});
  const double a = net.g_max() * net.realization().ht2(0, 0, 0) / net.noise_t();
  const double ref = -a / ((1.0 + 0.5 * a) * std::log(2.0));
  EXPECT_NEAR(oracle::finite_difference_gradient(net, phi, w, 0, 0, 1e-7), ref,
              1e-5 * std::abs(ref));
}

}  // namespace
}  // namespace leo
