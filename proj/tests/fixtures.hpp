// Hand-built scenarios and networks for unit tests.
#pragma once

#include <cmath>
#include <vector>

#include "leo/channel.hpp"
#include "leo/scenario.hpp"

namespace leo::test {

inline Cell cell(CellKind kind, double x, double y, double radius,
                 double backhaul_bps = 25e6) {
  Cell c;
  c.kind = kind;
  c.center = {x, y};
  c.radius_m = radius;
  c.fixed_backhaul_bps = backhaul_bps;
  return c;
}

inline User user(double x, double y, double data = 3000.0) {
  User u;
  u.position = {x, y};
  u.data_bytes_per_s = data;
  return u;
}

/// Ground range at which a satellite at `altitude_m` is seen from the
/// macro site at `elevation` degrees, by bisection.
inline double range_for_elevation(double elevation, double altitude_m) {
  double lo = 0.0, hi = 3.0e6;
  const Vec3 ground{0.0, 0.0, kEarthRadius};
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const Satellite s = place_satellite(mid, 0.0, altitude_m);
    if (elevation_deg(ground, s.position_m) > elevation) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline Scenario scenario(std::vector<Cell> cells, std::vector<User> users,
                         std::vector<Satellite> sats = {}, int k = 1, int q = 1,
                         int n_r = 2, double theta_th = 5.0) {
  return Scenario(1000.0, 200.0, std::move(cells), std::move(users),
                  std::move(sats), theta_th, 35.0, n_r, k, q);
}

inline Network network(const Scenario& s, RadioParams rp = {},
                       std::uint64_t seed = 1) {
  return Network(s, rp, sample_realization(s, rp, seed));
}

}  // namespace leo::test
