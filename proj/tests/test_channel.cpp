#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "leo/channel.hpp"
#include "leo/random.hpp"

namespace leo {
namespace {

TEST(Fading, UnitMeanRayleighAndRician) {
  Rng rng = make_rng(1, 42);
  double ray = 0.0, ric = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    ray += sample_rayleigh_power(rng);
    ric += sample_rician_power(rng, 7.0);
  }
  EXPECT_NEAR(ray / n, 1.0, 0.02);
  EXPECT_NEAR(ric / n, 1.0, 0.02);
}

TEST(PathGain, InverseSquareFreeSpace) {
  EXPECT_NEAR(free_space_gain(2000.0, 30.0) / free_space_gain(1000.0, 30.0), 0.25, 1e-12);
  EXPECT_LT(terrestrial_path_gain(200.0, {}), terrestrial_path_gain(100.0, {}));
}

TEST(OffAxisGain, MaskSegments) {
  const RadioParams p;
  EXPECT_NEAR(offaxis_gain_dbi(0.0, p), 43.3, 1e-12);
  EXPECT_NEAR(offaxis_gain_dbi(10.0, p), 7.0, 1e-12);
  EXPECT_NEAR(offaxis_gain_dbi(60.0, p), -10.0, 1e-12);
  double prev = offaxis_gain_dbi(0.0, p);
  for (double phi = 0.1; phi < 90.0; phi += 0.1) {
    const double g = offaxis_gain_dbi(phi, p);
    EXPECT_LE(g, prev + 1e-12) << phi;
    prev = g;
  }
}

TEST(Realization, DeterministicPositiveFinite) {
  ScenarioConfig c;
  c.n_tsc = 2;
  c.n_lsc = 2;
  c.n_users = 20;
  const Scenario s = generate_scenario(c, 4);
  const ChannelRealization a = sample_realization(s, {}, 4);
  const ChannelRealization b = sample_realization(s, {}, 4);
  EXPECT_EQ(a, b);
  for (double g : a.hb2_data()) EXPECT_TRUE(g > 0.0 && std::isfinite(g));
  for (double g : a.ht2_data()) EXPECT_TRUE(g > 0.0 && std::isfinite(g));
}

// Macro plus one small cell, two users, one subchannel.
Network two_cell_net(int k = 1) {
  const Scenario s = test::scenario(
      {test::cell(CellKind::kMacro, 0, 0, 1000), test::cell(CellKind::kTraditional, 400, 0, 200)},
      {test::user(-100, 0), test::user(400, 50), test::user(50, 0)}, {}, k);
  return test::network(s);
}

TEST(TerrestrialRate, UnitSnrGivesOneBit) {
  Network net = two_cell_net();
  const double pu = net.params().user_power_w;
  net.mutable_realization().hb2(0, 0, 0) = net.noise_b() / pu;
  TerrestrialMatching x(2, 3, 1);
  x.assign(0, 0, 0);
  EXPECT_NEAR(terrestrial_rate(net, x, 0, 0, 0), 1.0, 1e-12);
}

TEST(TerrestrialRate, InterferenceEqualToSignal) {
  Network net = two_cell_net();
  net.set_noise(1e-300, net.noise_t());
  auto& h = net.mutable_realization();
  h.hb2(0, 0, 0) = 1e-9;
  h.hb2(0, 1, 0) = 1e-9;  // user 1 served by cell 1 interferes at the macro
  TerrestrialMatching x(2, 3, 1);
  x.assign(0, 0, 0);
  x.assign(1, 1, 0);
  EXPECT_NEAR(terrestrial_rate(net, x, 0, 0, 0), 1.0, 1e-9);
  EXPECT_THROW(terrestrial_rate(net, x, 0, 2, 0), ContractError);
}

TEST(CellRate, UnitsAndAdditivity) {
  RadioParams rp;
  const Scenario s = test::scenario(
      {test::cell(CellKind::kMacro, 0, 0, 1000)},
      {test::user(10, 0), test::user(20, 0), test::user(30, 0)}, {}, 10);
  Network net = test::network(s, rp);
  EXPECT_NEAR(net.bw_sub_c(), 2e6, 1e-6);
  net.mutable_realization().hb2(0, 0, 3) = net.noise_b() / rp.user_power_w;
  TerrestrialMatching x(1, 3, 10);
  EXPECT_EQ(cell_rate(net, x, 0), 0.0);
  x.assign(0, 0, 3);
  EXPECT_NEAR(cell_rate(net, x, 0), 2e6, 1e-3);
  x.assign(1, 0, 5);
  x.assign(2, 0, 7);
  const double sum = terrestrial_rate(net, x, 0, 0, 3) + terrestrial_rate(net, x, 0, 1, 5) +
                     terrestrial_rate(net, x, 0, 2, 7);
  EXPECT_NEAR(cell_rate_bphz(net, x, 0), sum, 1e-12);
  EXPECT_NEAR(cell_rate(net, x, 0), sum * 2e6, 1e-3);
}

TEST(TerrestrialRate, MatchesIndependentSinr) {
  ScenarioConfig c;
  c.n_tsc = 1;
  c.n_lsc = 1;
  c.n_users = 3;
  c.k_subch = 1;
  c.macro_radius_m = 300;
  c.small_radius_m = 150;
  const Scenario s = generate_scenario(c, 8);
  const Network net = test::network(s, {}, 8);
  const auto& h = net.realization();
  const double pu = net.params().user_power_w;
  TerrestrialMatching x(3, 3, 1);
  // Any one-to-one assignment; coverage is irrelevant to the formula.
  x.assign(0, 0, 0);
  x.assign(1, 1, 0);
  x.assign(2, 2, 0);
  for (std::size_t m = 0; m < 3; ++m) {
    double interf = 0.0;
    for (std::size_t m2 = 0; m2 < 3; ++m2) {
      if (m2 != m) interf += pu * h.hb2(m, m2, 0);
    }
    const double ref = std::log2(1.0 + pu * h.hb2(m, m, 0) / (net.noise_b() + interf));
    EXPECT_NEAR(terrestrial_rate(net, x, m, m, 0), ref, 1e-12);
  }
}

// One LSC at the origin and two satellites 90 degrees apart.
Network ka_net() {
  const double h = 800e3;
  const double g = test::range_for_elevation(45.0, h);
  const Scenario s = test::scenario(
      {test::cell(CellKind::kMacro, 0, 0, 1000), test::cell(CellKind::kLeo, 0, 0, 200),
       test::cell(CellKind::kLeo, 300, 0, 200)},
      {test::user(10, 0)},
      {place_satellite(g, 0.0, h), place_satellite(g * 0.5, 2.0, h)}, 1, 1);
  return test::network(s);
}

TEST(KaRate, SingleLinkSnrAndZeroPower) {
  Network net = ka_net();
  const double p = 1.0;
  net.mutable_realization().ht2(0, 0, 0) = 3.0 * net.noise_t() / (p * net.g_max());
  BackhaulMatching b(2, 2, 1, 2.0);
  b.add({0, 0, 0, p});
  EXPECT_NEAR(ka_rate(net, b, 0, 0, 0), 2.0, 1e-12);
  b.set_power(0, 0, 0.0);
  EXPECT_EQ(ka_rate(net, b, 0, 0, 0), 0.0);
}

TEST(KaRate, CoChannelMatchesOffAxisRecomputation) {
  const Network net = ka_net();
  BackhaulMatching b(2, 2, 1, 2.0);
  b.add({0, 0, 0, 1.5});
  b.add({1, 1, 0, 0.7});
  const auto& s = net.scenario();
  const auto& h = net.realization();
  const RadioParams& rp = net.params();
  // Victim: satellite 0, interferer: TST 1 aimed at satellite 1.
  const double g10 = offaxis_gain(line_of_sight_angle(s, 1, 1, 0), rp);
  const double ref0 = std::log2(
      1.0 + 1.5 * rp.g_max_linear() * h.ht2(0, 0, 0) / (net.noise_t() + 0.7 * g10 * h.ht2(1, 0, 0)));
  EXPECT_NEAR(ka_rate(net, b, 0, 0, 0), ref0, 1e-12);
  const double g01 = offaxis_gain(line_of_sight_angle(s, 0, 0, 1), rp);
  const double ref1 = std::log2(
      1.0 + 0.7 * rp.g_max_linear() * h.ht2(1, 1, 0) / (net.noise_t() + 1.5 * g01 * h.ht2(0, 1, 0)));
  EXPECT_NEAR(ka_rate(net, b, 1, 1, 0), ref1, 1e-12);
  EXPECT_NEAR(link_capacity(net, b, 0, 0), ref0 * net.bw_sub_ka(), 1e-3);
}

TEST(SubchannelModel, AgreesWithKaRate) {
  const Network net = ka_net();
  BackhaulMatching b(2, 2, 1, 2.0);
  b.add({0, 0, 0, 1.5});
  b.add({1, 1, 0, 0.7});
  const std::vector<double> w{0.3, 0.9};
  const SubchannelModel m = subchannel_model(net, b, 0, w);
  const double ref = 0.3 * ka_rate(net, b, 0, 0, 0) + 0.9 * ka_rate(net, b, 1, 1, 0);
  EXPECT_NEAR(m.utility(), ref, 1e-12);
  EXPECT_NEAR(ka_subchannel_utility(net, b, 0, w), ref, 1e-12);
  // Analytic derivative against central differences.
  for (std::size_t i = 0; i < m.size(); ++i) {
    SubchannelModel lo = m, hi = m;
    const double step = 1e-7;
    lo.power[i] -= step;
    hi.power[i] += step;
    const double fd = (hi.utility() - lo.utility()) / (2 * step);
    EXPECT_NEAR(m.gradient(i), fd, 1e-4 * std::max(1.0, std::abs(fd)));
  }
}

TEST(RadioParams, RejectsNonPositive) {
  RadioParams p;
  p.bw_c_hz = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace leo
