#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "leo/scenario.hpp"

namespace leo {
namespace {

constexpr double kRad = std::numbers::pi / 180.0;

TEST(GenerateScenario, FullScaleDefaultsAreValid) {
  const ScenarioConfig c;
  const Scenario s = generate_scenario(c, 3);
  ASSERT_EQ(s.cell_count(), 51u);
  EXPECT_EQ(s.tsc_count(), 25u);
  EXPECT_EQ(s.tst_count(), 25u);
  EXPECT_EQ(s.cells()[0].kind, CellKind::kMacro);
  for (std::size_t m = 1; m < s.cell_count(); ++m) {
    EXPECT_EQ(s.cells()[m].kind, s.is_tsc(m) ? CellKind::kTraditional : CellKind::kLeo);
    EXPECT_EQ(s.is_lsc(m), !s.is_tsc(m));
  }
  ASSERT_EQ(s.satellite_count(), 8u);
  for (const auto& sat : s.satellites()) {
    EXPECT_GE(sat.altitude_m, c.min_altitude_m);
    EXPECT_LE(sat.altitude_m, c.max_altitude_m);
  }
  for (std::size_t t = 0; t < s.tst_count(); ++t) {
    for (std::size_t n = 0; n < s.satellite_count(); ++n) {
      const double e = s.elevation()(t, n);
      EXPECT_GE(e, 0.0);
      EXPECT_LE(e, 90.0);
      EXPECT_EQ(s.visible(t, n), e >= c.min_elevation_deg);
    }
  }
}

TEST(GenerateScenario, SameSeedSameScenario) {
  ScenarioConfig c;
  c.n_tsc = 3;
  c.n_lsc = 3;
  c.n_users = 30;
  const Scenario a = generate_scenario(c, 11);
  const Scenario b = generate_scenario(c, 11);
  ASSERT_EQ(a.user_count(), b.user_count());
  for (std::size_t j = 0; j < a.user_count(); ++j) {
    EXPECT_EQ(a.users()[j].position.x, b.users()[j].position.x);
    EXPECT_EQ(a.users()[j].position.y, b.users()[j].position.y);
  }
  for (std::size_t n = 0; n < a.satellite_count(); ++n) {
    EXPECT_EQ(a.satellites()[n].position_m.x, b.satellites()[n].position_m.x);
  }
  EXPECT_EQ(a.coverage(), b.coverage());
  EXPECT_EQ(a.elevation(), b.elevation());
  const Scenario d = generate_scenario(c, 12);
  EXPECT_NE(a.users()[0].position.x, d.users()[0].position.x);
}

TEST(GenerateScenario, ZeroUsersIsAPreconditionError) {
  ScenarioConfig c;
  c.n_users = 0;
  EXPECT_THROW(generate_scenario(c, 1), ScenarioError);
}

TEST(Coverage, MacroCentreAndSmallCellBoundary) {
  const Scenario s = test::scenario(
      {test::cell(CellKind::kMacro, 0, 0, 1000), test::cell(CellKind::kTraditional, 500, 0, 200)},
      {test::user(0, 0), test::user(701, 0), test::user(699, 0)});
  EXPECT_TRUE(s.covers(0, 0));
  EXPECT_FALSE(s.covers(1, 0));
  EXPECT_FALSE(s.covers(1, 1));  // 201 m from a 200 m cell
  EXPECT_TRUE(s.covers(1, 2));
}

TEST(Coverage, MatchesDistanceRecomputation) {
  ScenarioConfig c;
  c.n_tsc = 4;
  c.n_lsc = 4;
  c.n_users = 50;
  const Scenario s = generate_scenario(c, 5);
  const CoverageMatrix a = coverage_matrix(s);
  for (std::size_t m = 0; m < s.cell_count(); ++m) {
    for (std::size_t j = 0; j < s.user_count(); ++j) {
      const auto& cc = s.cells()[m];
      const auto& u = s.users()[j];
      const double d = std::hypot(u.position.x - cc.center.x, u.position.y - cc.center.y);
      EXPECT_EQ(a(m, j) != 0, d <= cc.radius_m) << m << " " << j;
    }
  }
  EXPECT_EQ(a, s.coverage());
}

Scenario symmetric_pair(double elevation) {
  const double h = 800e3;
  const double g = test::range_for_elevation(elevation, h);
  return test::scenario(
      {test::cell(CellKind::kMacro, 0, 0, 1000), test::cell(CellKind::kLeo, 0, 0, 200)},
      {test::user(10, 0)},
      {place_satellite(g, 0.0, h), place_satellite(g, std::numbers::pi, h)});
}

TEST(AngularSeparation, IdenticalAndSymmetricDirections) {
  const Scenario s = symmetric_pair(45.0);
  EXPECT_NEAR(s.elevation()(0, 0), 45.0, 1e-6);
  EXPECT_DOUBLE_EQ(angular_separation(s, 0, 0, 0), 0.0);
  EXPECT_NEAR(angular_separation(s, 0, 0, 1), 90.0, 1e-6);
}

TEST(AngularSeparation, MatchesVectorRecomputation) {
  ScenarioConfig c;
  c.n_tsc = 0;
  c.n_lsc = 3;
  c.n_users = 10;
  c.projected_area_km2 = 2e5;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Scenario s = generate_scenario(c, seed);
    for (std::size_t t = 0; t < s.tst_count(); ++t) {
      const Vec3 g = s.tst_position(t);
      for (std::size_t a = 0; a < s.satellite_count(); ++a) {
        for (std::size_t b = 0; b < s.satellite_count(); ++b) {
          const Vec3 p = s.satellites()[a].position_m, q = s.satellites()[b].position_m;
          const double ux = p.x - g.x, uy = p.y - g.y, uz = p.z - g.z;
          const double vx = q.x - g.x, vy = q.y - g.y, vz = q.z - g.z;
          // atan2(|u x v|, u . v) stays accurate for nearly parallel directions.
          const double cx = uy * vz - uz * vy, cy = uz * vx - ux * vz, cz = ux * vy - uy * vx;
          const double ref =
              std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), ux * vx + uy * vy + uz * vz) / kRad;
          EXPECT_NEAR(line_of_sight_angle(s, t, a, b), ref, 1e-6);
        }
      }
    }
  }
}

TEST(AngularSeparation, InvisibleSatelliteIsRejected) {
  const Scenario s = symmetric_pair(20.0);
  EXPECT_FALSE(s.visible(0, 0));
  EXPECT_THROW(angular_separation(s, 0, 0, 1), VisibilityError);
}

TEST(AngleGate, ElevationDifferenceThreshold) {
  EXPECT_FALSE(angle_gate(40.0, 43.0, 5.0));
  EXPECT_TRUE(angle_gate(40.0, 50.0, 5.0));
  const Scenario s = symmetric_pair(45.0);
  EXPECT_FALSE(angle_gate(s, 0, 1, 1));
  EXPECT_FALSE(angle_gate(s, 0, 0, 1));  // equal elevations
}

TEST(PropagationDelay, RoundTrip) {
  const double c = 299792458.0;
  EXPECT_NEAR(propagation_delay(600e3), 2 * 600e3 / c, 1e-15);
  EXPECT_NEAR(propagation_delay(1200e3), 2 * 1200e3 / c, 1e-15);
  EXPECT_NEAR(propagation_delay(600e3) * 1e3, 4.003, 1e-3);
  EXPECT_EQ(propagation_delay(0.0), 0.0);
}

TEST(Scenario, SubsetsKeepGeometry) {
  ScenarioConfig c;
  c.n_tsc = 1;
  c.n_lsc = 2;
  c.n_users = 5;
  const Scenario s = generate_scenario(c, 2);
  const Scenario two = s.with_satellites({s.satellites()[0], s.satellites()[1]});
  EXPECT_EQ(two.satellite_count(), 2u);
  EXPECT_EQ(two.elevation()(1, 1), s.elevation()(1, 1));
  EXPECT_EQ(s.with_n_r(1).n_r(), 1);
  EXPECT_THROW(s.with_n_r(0), ScenarioError);
}

}  // namespace
}  // namespace leo
