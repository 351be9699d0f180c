#include "leo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "leo/random.hpp"

namespace leo {
namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

Vec3 sub(const Vec3& a, const Vec3& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Point2 uniform_in_disc(Rng& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double a = 2.0 * std::numbers::pi * u(rng);
  return {r * std::cos(a), r * std::sin(a)};
}

Vec3 ground_point(const Point2& p) {
  // Local tangent-plane coordinates projected onto the sphere.
  const Vec3 v{p.x, p.y, kEarthRadius};
  const double s = kEarthRadius / norm(v);
  return {v.x * s, v.y * s, v.z * s};
}

void require(bool ok, const char* what) {
  if (!ok) throw ScenarioError(what);
}

}  // namespace

double elevation_deg(const Vec3& ground, const Vec3& satellite) {
  const Vec3 los = sub(satellite, ground);
  const double up = dot(los, ground) / (norm(los) * norm(ground));
  const double el = std::asin(std::clamp(up, -1.0, 1.0)) * kDeg;
  return std::clamp(el, 0.0, 90.0);
}

Satellite place_satellite(double ground_range_m, double azimuth_rad,
                          double altitude_m) {
  const double gamma = ground_range_m / kEarthRadius;
  const double r = kEarthRadius + altitude_m;
  return {{r * std::sin(gamma) * std::cos(azimuth_rad),
           r * std::sin(gamma) * std::sin(azimuth_rad), r * std::cos(gamma)},
          altitude_m};
}

Scenario::Scenario(double macro_radius_m, double small_radius_m,
                   std::vector<Cell> cells, std::vector<User> users,
                   std::vector<Satellite> satellites, double theta_th_deg,
                   double min_elevation_deg, int n_r, int k_subch, int q_subch)
    : macro_radius_m_(macro_radius_m),
      small_radius_m_(small_radius_m),
      cells_(std::move(cells)),
      users_(std::move(users)),
      satellites_(std::move(satellites)),
      theta_th_deg_(theta_th_deg),
      min_elevation_deg_(min_elevation_deg),
      n_r_(n_r),
      k_subch_(k_subch),
      q_subch_(q_subch) {
  require(!cells_.empty() && cells_[0].kind == CellKind::kMacro,
          "cell 0 must be the macro cell");
  require(theta_th_deg_ > 0.0, "theta_th must be positive");
  require(n_r_ >= 1, "n_r must be at least 1");
  require(k_subch_ >= 1 && q_subch_ >= 1, "subchannel counts must be >= 1");
  std::size_t i = 1;
  while (i < cells_.size() && cells_[i].kind == CellKind::kTraditional) ++i;
  n_tsc_ = i - 1;
  while (i < cells_.size() && cells_[i].kind == CellKind::kLeo) ++i;
  require(i == cells_.size(), "cells must be ordered macro, TSC, LSC");
  n_lsc_ = cells_.size() - 1 - n_tsc_;
  for (const auto& sat : satellites_) {
    require(sat.altitude_m > 0.0, "satellite altitude must be positive");
  }
  build_derived();
}

void Scenario::build_derived() {
  coverage_ = coverage_matrix(*this);
  elevation_ = AngleMatrix(n_lsc_, satellites_.size());
  for (std::size_t t = 0; t < n_lsc_; ++t) {
    const Vec3 g = tst_position(t);
    for (std::size_t n = 0; n < satellites_.size(); ++n) {
      elevation_(t, n) = elevation_deg(g, satellites_[n].position_m);
    }
  }
}

bool Scenario::visible(std::size_t t, std::size_t n) const {
  return elevation_(t, n) >= min_elevation_deg_;
}

Vec3 Scenario::tst_position(std::size_t t) const {
  return ground_point(cells_[tst_cell(t)].center);
}

double Scenario::slant_range(std::size_t t, std::size_t n) const {
  return norm(sub(satellites_[n].position_m, tst_position(t)));
}

Scenario Scenario::with_users(std::vector<User> users) const {
  Scenario s = *this;
  s.users_ = std::move(users);
  s.build_derived();
  return s;
}

Scenario Scenario::with_satellites(std::vector<Satellite> satellites) const {
  Scenario s = *this;
  s.satellites_ = std::move(satellites);
  s.build_derived();
  return s;
}

Scenario Scenario::with_n_r(int n_r) const {
  require(n_r >= 1, "n_r must be at least 1");
  Scenario s = *this;
  s.n_r_ = n_r;
  return s;
}

Scenario generate_scenario(const ScenarioConfig& c, std::uint64_t seed) {
  require(c.n_users >= 1, "at least one user is required");
  require(c.macro_radius_m > 0.0 && c.small_radius_m > 0.0,
          "cell radii must be positive");
  require(c.n_tsc >= 0 && c.n_lsc >= 0 && c.n_satellites >= 0,
          "cell and satellite counts must be non-negative");
  require(c.min_altitude_m > 0.0 && c.max_altitude_m >= c.min_altitude_m,
          "altitude range must be positive and ordered");
  require(c.projected_area_km2 > 0.0, "projected area must be positive");
  require(c.tsc_backhaul_max_bps >= c.tsc_backhaul_min_bps &&
              c.tsc_backhaul_min_bps >= 0.0,
          "TSC backhaul range must be ordered");

  std::vector<Cell> cells;
  cells.push_back({CellKind::kMacro, {0.0, 0.0}, c.macro_radius_m,
                   c.macro_backhaul_bps});

  Rng cell_rng = make_rng(seed, Stream::kCells);
  Rng backhaul_rng = make_rng(seed, Stream::kBackhaul);
  std::uniform_real_distribution<double> backhaul(c.tsc_backhaul_min_bps,
                                                  c.tsc_backhaul_max_bps);
  const int small = c.n_tsc + c.n_lsc;
  int attempts = 0;
  while (static_cast<int>(cells.size()) < small + 1) {
    if (++attempts > c.max_placement_attempts) {
      throw PlacementError("could not place " + std::to_string(small) +
                           " small cells in the macro disc");
    }
    const Point2 p = uniform_in_disc(cell_rng, c.macro_radius_m);
    if (distance(p, {0.0, 0.0}) < c.small_radius_m) continue;
    bool clear = true;
    for (std::size_t i = 1; i < cells.size() && clear; ++i) {
      clear = distance(p, cells[i].center) >= c.small_radius_m;
    }
    if (!clear) continue;
    const bool tsc = static_cast<int>(cells.size()) <= c.n_tsc;
    cells.push_back({tsc ? CellKind::kTraditional : CellKind::kLeo, p,
                     c.small_radius_m, backhaul(backhaul_rng)});
  }

  Rng user_rng = make_rng(seed, Stream::kUsers);
  std::vector<User> users;
  users.reserve(static_cast<std::size_t>(c.n_users));
  for (int j = 0; j < c.n_users; ++j) {
    users.push_back({uniform_in_disc(user_rng, c.macro_radius_m),
                     c.data_bytes_per_s});
  }

  Rng sat_rng = make_rng(seed, Stream::kSatellites);
  std::uniform_real_distribution<double> altitude(c.min_altitude_m,
                                                  c.max_altitude_m);
  const double projected_radius =
      std::sqrt(c.projected_area_km2 * 1.0e6 / std::numbers::pi);
  std::vector<Satellite> sats;
  for (int n = 0; n < c.n_satellites; ++n) {
    const Point2 p = uniform_in_disc(sat_rng, projected_radius);
    const double h = altitude(sat_rng);
    sats.push_back(place_satellite(std::hypot(p.x, p.y),
                                   std::atan2(p.y, p.x), h));
  }

  return Scenario(c.macro_radius_m, c.small_radius_m, std::move(cells),
                  std::move(users), std::move(sats), c.theta_th_deg,
                  c.min_elevation_deg, c.n_r, c.k_subch, c.q_subch);
}

CoverageMatrix coverage_matrix(const Scenario& s) {
  CoverageMatrix a(s.cell_count(), s.user_count(), 0);
  for (std::size_t m = 0; m < s.cell_count(); ++m) {
    const Cell& cell = s.cells()[m];
    for (std::size_t j = 0; j < s.user_count(); ++j) {
      a(m, j) = distance(cell.center, s.users()[j].position) <= cell.radius_m;
    }
  }
  return a;
}

double line_of_sight_angle(const Scenario& s, std::size_t tst, std::size_t n1,
                           std::size_t n2) {
  if (n1 == n2) return 0.0;
  const Vec3 g = s.tst_position(tst);
  const Vec3 u = sub(s.satellites()[n1].position_m, g);
  const Vec3 v = sub(s.satellites()[n2].position_m, g);
  const double c = dot(u, v) / (norm(u) * norm(v));
  return std::acos(std::clamp(c, -1.0, 1.0)) * kDeg;
}

double angular_separation(const Scenario& s, std::size_t tst, std::size_t n1,
                          std::size_t n2) {
  if (!s.visible(tst, n1) || !s.visible(tst, n2)) {
    throw VisibilityError("satellite not visible from TST " +
                          std::to_string(tst));
  }
  return line_of_sight_angle(s, tst, n1, n2);
}

bool angle_gate(double elevation1_deg, double elevation2_deg,
                double theta_th_deg) {
  return std::abs(elevation1_deg - elevation2_deg) >= theta_th_deg;
}

bool angle_gate(const Scenario& s, std::size_t tst, std::size_t n1,
                std::size_t n2) {
  return angle_gate(s.elevation()(tst, n1), s.elevation()(tst, n2),
                    s.theta_th_deg());
}

double propagation_delay(const Scenario& s, std::size_t n) {
  return propagation_delay(s.satellites()[n].altitude_m);
}

}  // namespace leo
