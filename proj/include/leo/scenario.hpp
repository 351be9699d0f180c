// Static network geometry for the integrated terrestrial / LEO offloading
// system: macro cell, traditionally backhauled small cells (TSC), LEO
// backhauled small cells (LSC) whose base stations carry a terrestrial-
// satellite terminal (TST), users, and a one-slot constellation snapshot.
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace leo {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kEarthRadius = 6371.0e3;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

enum class CellKind { kMacro, kTraditional, kLeo };

struct Cell {
  CellKind kind = CellKind::kMacro;
  Point2 center;
  double radius_m = 0.0;
  // Fixed backhaul of the macro and of traditional small cells. For LEO
  // cells this is the traditional capacity they would have without a TST
  // (used by the terrestrial-only comparison scheme).
  double fixed_backhaul_bps = 0.0;
};

struct User {
  Point2 position;
  double data_bytes_per_s = 0.0;
};

struct Satellite {
  // Earth-centred frame whose +z axis passes through the macro BS.
  Vec3 position_m;
  double altitude_m = 0.0;
};

struct ScenarioConfig {
  double macro_radius_m = 1000.0;
  double small_radius_m = 200.0;
  int n_tsc = 25;
  int n_lsc = 25;
  int n_users = 200;
  int n_satellites = 8;
  double min_altitude_m = 600.0e3;
  double max_altitude_m = 1200.0e3;
  // Area of the ground disc that contains the sub-satellite points.
  double projected_area_km2 = 1.0e6;
  double theta_th_deg = 5.0;
  double min_elevation_deg = 35.0;
  int n_r = 2;
  int k_subch = 10;
  int q_subch = 10;
  double data_bytes_per_s = 3000.0;
  double macro_backhaul_bps = 150.0e6;
  double tsc_backhaul_min_bps = 20.0e6;
  double tsc_backhaul_max_bps = 30.0e6;
  int max_placement_attempts = 200000;
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PlacementError : public ScenarioError {
 public:
  using ScenarioError::ScenarioError;
};

class VisibilityError : public ScenarioError {
 public:
  using ScenarioError::ScenarioError;
};

/// Row-major dense matrix of small integers or doubles.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<T>& data() const { return data_; }
  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using CoverageMatrix = Matrix<std::uint8_t>;  // (M+1) x J
using AngleMatrix = Matrix<double>;           // TSTs x N, degrees

class Scenario {
 public:
  Scenario() = default;
  // Builds the derived coverage and elevation matrices. Cells must be
  // ordered macro, TSCs, LSCs.
  Scenario(double macro_radius_m, double small_radius_m,
           std::vector<Cell> cells, std::vector<User> users,
           std::vector<Satellite> satellites, double theta_th_deg,
           double min_elevation_deg, int n_r, int k_subch, int q_subch);

  double macro_radius_m() const { return macro_radius_m_; }
  double small_radius_m() const { return small_radius_m_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<User>& users() const { return users_; }
  const std::vector<Satellite>& satellites() const { return satellites_; }
  double theta_th_deg() const { return theta_th_deg_; }
  double min_elevation_deg() const { return min_elevation_deg_; }
  int n_r() const { return n_r_; }
  int k_subch() const { return k_subch_; }
  int q_subch() const { return q_subch_; }

  std::size_t cell_count() const { return cells_.size(); }  // M + 1
  std::size_t user_count() const { return users_.size(); }  // J
  std::size_t satellite_count() const { return satellites_.size(); }
  std::size_t tsc_count() const { return n_tsc_; }  // M'
  std::size_t tst_count() const { return n_lsc_; }  // M - M'
  // Cell index of TST t (0-based among LSCs).
  std::size_t tst_cell(std::size_t t) const { return 1 + n_tsc_ + t; }
  bool is_lsc(std::size_t m) const { return m > n_tsc_; }
  bool is_tsc(std::size_t m) const { return m >= 1 && m <= n_tsc_; }

  const CoverageMatrix& coverage() const { return coverage_; }
  const AngleMatrix& elevation() const { return elevation_; }
  bool covers(std::size_t m, std::size_t j) const { return coverage_(m, j) != 0; }
  bool visible(std::size_t t, std::size_t n) const;

  // Location of a TST on the Earth surface in the satellite frame.
  Vec3 tst_position(std::size_t t) const;
  // Slant range from TST t to satellite n, metres.
  double slant_range(std::size_t t, std::size_t n) const;

  // Scenario with the same geometry and a replaced user population
  // (coverage is recomputed).
  Scenario with_users(std::vector<User> users) const;
  // Same world with a subset of satellites (in the given order).
  Scenario with_satellites(std::vector<Satellite> satellites) const;
  Scenario with_n_r(int n_r) const;

 private:
  void build_derived();

  double macro_radius_m_ = 0.0;
  double small_radius_m_ = 0.0;
  std::vector<Cell> cells_;
  std::vector<User> users_;
  std::vector<Satellite> satellites_;
  double theta_th_deg_ = 5.0;
  double min_elevation_deg_ = 35.0;
  int n_r_ = 1;
  int k_subch_ = 1;
  int q_subch_ = 1;
  std::size_t n_tsc_ = 0;
  std::size_t n_lsc_ = 0;
  CoverageMatrix coverage_;
  AngleMatrix elevation_;
};

Scenario generate_scenario(const ScenarioConfig& config, std::uint64_t seed);

CoverageMatrix coverage_matrix(const Scenario& s);

/// Angle at TST `tst` between its line-of-sight vectors to satellites n1
/// and n2, degrees. Both satellites must be visible.
double angular_separation(const Scenario& s, std::size_t tst, std::size_t n1,
                          std::size_t n2);

/// Same angle without the visibility requirement (interference geometry
/// towards satellites outside the service cone still needs it).
double line_of_sight_angle(const Scenario& s, std::size_t tst, std::size_t n1,
                           std::size_t n2);

/// True iff satellites n1 and n2 may share a subchannel at TST `tst`.
bool angle_gate(const Scenario& s, std::size_t tst, std::size_t n1,
                std::size_t n2);
bool angle_gate(double elevation1_deg, double elevation2_deg,
                double theta_th_deg);

double propagation_delay(const Scenario& s, std::size_t n);
inline double propagation_delay(double altitude_m) {
  return 2.0 * altitude_m / kSpeedOfLight;
}

// Elevation of a satellite seen from a ground point, degrees in [0, 90].
double elevation_deg(const Vec3& ground, const Vec3& satellite);

// Satellite at ground arc distance `ground_range_m` and azimuth `azimuth_rad`
// from the macro BS, at the given altitude.
Satellite place_satellite(double ground_range_m, double azimuth_rad,
                          double altitude_m);

}  // namespace leo
