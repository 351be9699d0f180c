// Fading realizations and the link-level rate formulas for the C-band
// access links and the Ka-band TST -> satellite backhaul links.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "leo/matching.hpp"
#include "leo/random.hpp"
#include "leo/scenario.hpp"

namespace leo {

enum class PathLossModel {
  kUmi,       // 22.7 + 36.7 log10(d) + 26 log10(f_GHz), NLOS street canyon
  kExponent,  // d^-alpha, unit reference distance
};

struct RadioParams {
  double user_power_w = 0.2;  // 23 dBm
  double noise_density_dbm_hz = -174.0;
  double bw_c_hz = 20.0e6;
  double bw_ka_hz = 400.0e6;
  double c_band_ghz = 3.5;
  double ka_band_ghz = 30.0;
  PathLossModel path_loss = PathLossModel::kUmi;
  double alpha = 3.67;
  double shadowing_db = 8.0;
  double rician_k = 7.0;
  double g_max_dbi = 43.3;
  double antenna_diameter_m = 0.6;
  double ka_noise_figure_db = 1.2;
  double sat_g_over_t_dbk = 18.5;
  double tst_max_power_w = 2.0;
  double min_distance_m = 10.0;

  void validate() const;
  // Per-subchannel noise powers, watts.
  double sigma2_b(int k_subch) const;
  // Referenced to the satellite antenna: k T B / (G/T) with the noise
  // figure applied, so that the Ka link gain needs no receive-gain term.
  double sigma2_t(int q_subch) const;
  double subchannel_bw_c(int k_subch) const { return bw_c_hz / k_subch; }
  double subchannel_bw_ka(int q_subch) const { return bw_ka_hz / q_subch; }
  double g_max_linear() const;
  double ka_wavelength_m() const;
};

/// All sampled |h|^2 gains for one drop. Linear power gains including
/// path loss, shadowing (C-band) and small-scale fading.
class ChannelRealization {
 public:
  ChannelRealization() = default;
  ChannelRealization(std::size_t cells, std::size_t users, std::size_t k,
                     std::size_t tsts, std::size_t sats, std::size_t q,
                     std::uint64_t seed);

  double& hb2(std::size_t m, std::size_t j, std::size_t k) {
    return hb2_[(m * users_ + j) * k_ + k];
  }
  double hb2(std::size_t m, std::size_t j, std::size_t k) const {
    return hb2_[(m * users_ + j) * k_ + k];
  }
  double& ht2(std::size_t t, std::size_t n, std::size_t q) {
    return ht2_[(t * sats_ + n) * q_ + q];
  }
  double ht2(std::size_t t, std::size_t n, std::size_t q) const {
    return ht2_[(t * sats_ + n) * q_ + q];
  }

  std::size_t cells() const { return cells_; }
  std::size_t users() const { return users_; }
  std::size_t k() const { return k_; }
  std::size_t tsts() const { return tsts_; }
  std::size_t sats() const { return sats_; }
  std::size_t q() const { return q_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<double>& hb2_data() const { return hb2_; }
  const std::vector<double>& ht2_data() const { return ht2_; }

  bool operator==(const ChannelRealization&) const = default;

 private:
  std::size_t cells_ = 0, users_ = 0, k_ = 0, tsts_ = 0, sats_ = 0, q_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> hb2_;
  std::vector<double> ht2_;
};

ChannelRealization sample_realization(const Scenario& s,
                                      const RadioParams& params,
                                      std::uint64_t seed);

// Path gains (linear, < 1).
double terrestrial_path_gain(double distance_m, const RadioParams& params);
double free_space_gain(double distance_m, double frequency_ghz);

// Unit-mean fading power samplers, exposed for statistical tests.
double sample_rayleigh_power(Rng& rng);
double sample_rician_power(Rng& rng, double k_factor);

/// Off-axis TST antenna gain, dBi. Reference earth-station pattern:
///   Gmax - 2.5e-3 (D phi / lambda)^2        0 <= phi < phi_m
///   G1 = 2 + 15 log10(D / lambda)            phi_m <= phi < phi_r
///   32 - 25 log10(phi)                       phi_r <= phi < 48
///   -10                                      phi >= 48
double offaxis_gain_dbi(double phi_deg, const RadioParams& params);
double offaxis_gain(double phi_deg, const RadioParams& params);

/// Everything needed to evaluate rates for one drop: geometry, radio
/// parameters, realization and the precomputed off-axis gain table.
class Network {
 public:
  Network(Scenario scenario, RadioParams params, ChannelRealization real);

  const Scenario& scenario() const { return scenario_; }
  const RadioParams& params() const { return params_; }
  const ChannelRealization& realization() const { return real_; }

  double noise_b() const { return noise_b_; }
  double noise_t() const { return noise_t_; }
  double g_max() const { return g_max_; }
  // Linear gain of TST t, aimed at satellite `aim`, in the direction of
  // satellite `toward`.
  double offaxis(std::size_t t, std::size_t aim, std::size_t toward) const {
    const std::size_t n = scenario_.satellite_count();
    return offaxis_[(t * n + aim) * n + toward];
  }

  double bw_sub_c() const { return params_.subchannel_bw_c(scenario_.k_subch()); }
  double bw_sub_ka() const {
    return params_.subchannel_bw_ka(scenario_.q_subch());
  }

  // Overrides for constructed test instances.
  void set_noise(double noise_b, double noise_t) {
    noise_b_ = noise_b;
    noise_t_ = noise_t;
  }
  ChannelRealization& mutable_realization() { return real_; }

 private:
  Scenario scenario_;
  RadioParams params_;
  ChannelRealization real_;
  double noise_b_ = 0.0;
  double noise_t_ = 0.0;
  double g_max_ = 0.0;
  std::vector<double> offaxis_;
};

// ---- C-band -------------------------------------------------------------

/// log2(1 + SINR) of user j at BS m on subchannel k; the triple must be in X.
double terrestrial_rate(const Network& net, const TerrestrialMatching& x,
                        std::size_t m, std::size_t j, std::size_t k);
/// Cell rate in bits/s (per-subchannel bandwidth applied).
double cell_rate(const Network& net, const TerrestrialMatching& x,
                 std::size_t m);
/// Cell spectral efficiency sum, bits/s/Hz.
double cell_rate_bphz(const Network& net, const TerrestrialMatching& x,
                      std::size_t m);
/// Subchannel utility sum_m (1 - lambda_m) R_{m,j,k}, bits/s/Hz.
double terrestrial_subchannel_utility(const Network& net,
                                      const TerrestrialMatching& x,
                                      std::size_t k,
                                      std::span<const double> lambda);

// ---- Ka-band ------------------------------------------------------------

/// log2(1 + SINR) of the TST t -> satellite n link on subchannel q.
double ka_rate(const Network& net, const BackhaulMatching& b, std::size_t t,
               std::size_t n, std::size_t q);

/// Sum of the link's subchannel rates times the Ka subchannel bandwidth.
double link_capacity(const Network& net, const BackhaulMatching& b,
                     std::size_t t, std::size_t n);

/// Dense per-subchannel SINR model used by the power-control solvers:
/// rate_i = log2(1 + p_i a_i / (noise + sum_{j != i} p_j c_ij)).
struct SubchannelModel {
  std::vector<int> tst;
  std::vector<int> sat;
  std::vector<double> own;       // a_i
  std::vector<double> coupling;  // c_ij, row i = victim
  std::vector<double> weight;    // lambda of the link's TST
  std::vector<double> power;
  double noise = 0.0;

  std::size_t size() const { return own.size(); }
  double c(std::size_t i, std::size_t j) const {
    return coupling[i * size() + j];
  }
  double rate(std::size_t i) const;
  double utility() const;
  // d utility / d p_i.
  double gradient(std::size_t i) const;
  int find(int t, int n) const;
};

/// Model of the links on subchannel q plus any `extra` (t, n) links, the
/// latter at zero power.
SubchannelModel subchannel_model(const Network& net, const BackhaulMatching& b,
                                 std::size_t q, std::span<const double> weight,
                                 std::span<const std::pair<int, int>> extra = {});

/// Weighted utility R^T_q = sum lambda_t R_{t,n,q}, bits/s/Hz.
double ka_subchannel_utility(const Network& net, const BackhaulMatching& b,
                             std::size_t q, std::span<const double> weight);

}  // namespace leo
