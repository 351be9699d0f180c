#include "leo/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace leo {
namespace {

constexpr double kBoltzmann = 1.380649e-23;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace

void RadioParams::validate() const {
  if (!(user_power_w > 0.0 && bw_c_hz > 0.0 && bw_ka_hz > 0.0 &&
        tst_max_power_w > 0.0 && c_band_ghz > 0.0 && ka_band_ghz > 0.0 &&
        antenna_diameter_m > 0.0 && rician_k >= 0.0 && shadowing_db >= 0.0)) {
    throw std::invalid_argument("radio parameters must be positive");
  }
}

double RadioParams::sigma2_b(int k_subch) const {
  return db_to_linear(noise_density_dbm_hz - 30.0) * subchannel_bw_c(k_subch);
}

double RadioParams::sigma2_t(int q_subch) const {
  return kBoltzmann * subchannel_bw_ka(q_subch) *
         db_to_linear(ka_noise_figure_db) / db_to_linear(sat_g_over_t_dbk);
}

double RadioParams::g_max_linear() const { return db_to_linear(g_max_dbi); }

double RadioParams::ka_wavelength_m() const {
  return kSpeedOfLight / (ka_band_ghz * 1.0e9);
}

ChannelRealization::ChannelRealization(std::size_t cells, std::size_t users,
                                       std::size_t k, std::size_t tsts,
                                       std::size_t sats, std::size_t q,
                                       std::uint64_t seed)
    : cells_(cells),
      users_(users),
      k_(k),
      tsts_(tsts),
      sats_(sats),
      q_(q),
      seed_(seed),
      hb2_(cells * users * k, 0.0),
      ht2_(tsts * sats * q, 0.0) {}

double terrestrial_path_gain(double distance_m, const RadioParams& p) {
  const double d = std::max(distance_m, p.min_distance_m);
  if (p.path_loss == PathLossModel::kExponent) return std::pow(d, -p.alpha);
  const double pl_db =
      22.7 + 36.7 * std::log10(d) + 26.0 * std::log10(p.c_band_ghz);
  return db_to_linear(-pl_db);
}

double free_space_gain(double distance_m, double frequency_ghz) {
  const double lambda = kSpeedOfLight / (frequency_ghz * 1.0e9);
  const double g = lambda / (4.0 * std::numbers::pi * distance_m);
  return g * g;
}

double sample_rayleigh_power(Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  return e(rng);
}

double sample_rician_power(Rng& rng, double k_factor) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double los = std::sqrt(k_factor / (k_factor + 1.0));
  const double s = std::sqrt(0.5 / (k_factor + 1.0));
  const double re = los + s * n(rng);
  const double im = s * n(rng);
  return re * re + im * im;
}

ChannelRealization sample_realization(const Scenario& s,
                                      const RadioParams& params,
                                      std::uint64_t seed) {
  params.validate();
  ChannelRealization r(s.cell_count(), s.user_count(),
                       static_cast<std::size_t>(s.k_subch()), s.tst_count(),
                       s.satellite_count(),
                       static_cast<std::size_t>(s.q_subch()), seed);

  Rng c_rng = make_rng(seed, Stream::kTerrestrialFading);
  std::normal_distribution<double> shadow(0.0, params.shadowing_db);
  for (std::size_t m = 0; m < s.cell_count(); ++m) {
    for (std::size_t j = 0; j < s.user_count(); ++j) {
      const double d = distance(s.cells()[m].center, s.users()[j].position);
      const double large =
          terrestrial_path_gain(d, params) * db_to_linear(shadow(c_rng));
      for (std::size_t k = 0; k < r.k(); ++k) {
        r.hb2(m, j, k) = large * std::max(sample_rayleigh_power(c_rng), 1e-30);
      }
    }
  }

  Rng ka_rng = make_rng(seed, Stream::kKaFading);
  for (std::size_t t = 0; t < s.tst_count(); ++t) {
    for (std::size_t n = 0; n < s.satellite_count(); ++n) {
      const double large =
          free_space_gain(s.slant_range(t, n), params.ka_band_ghz);
      for (std::size_t q = 0; q < r.q(); ++q) {
        r.ht2(t, n, q) =
            large * std::max(sample_rician_power(ka_rng, params.rician_k), 1e-30);
      }
    }
  }
  return r;
}

double offaxis_gain_dbi(double phi_deg, const RadioParams& p) {
  if (phi_deg < 0.0) throw std::invalid_argument("negative off-axis angle");
  const double d_over_lambda = p.antenna_diameter_m / p.ka_wavelength_m();
  const double g1 = 2.0 + 15.0 * std::log10(d_over_lambda);
  const double phi_m =
      20.0 / d_over_lambda * std::sqrt(std::max(p.g_max_dbi - g1, 0.0));
  const double phi_r = 15.85 * std::pow(d_over_lambda, -0.6);
  if (phi_deg < phi_m) {
    const double x = d_over_lambda * phi_deg;
    return p.g_max_dbi - 2.5e-3 * x * x;
  }
  if (phi_deg < phi_r) return g1;
  // Floored at the back-lobe level so the mask stays non-increasing.
  if (phi_deg < 48.0) return std::clamp(32.0 - 25.0 * std::log10(phi_deg), -10.0, g1);
  return -10.0;
}

double offaxis_gain(double phi_deg, const RadioParams& p) {
  return db_to_linear(offaxis_gain_dbi(phi_deg, p));
}

Network::Network(Scenario scenario, RadioParams params, ChannelRealization real)
    : scenario_(std::move(scenario)),
      params_(params),
      real_(std::move(real)),
      noise_b_(params_.sigma2_b(scenario_.k_subch())),
      noise_t_(params_.sigma2_t(scenario_.q_subch())),
      g_max_(params_.g_max_linear()) {
  const std::size_t t_count = scenario_.tst_count();
  const std::size_t n_count = scenario_.satellite_count();
  offaxis_.assign(t_count * n_count * n_count, 0.0);
  for (std::size_t t = 0; t < t_count; ++t) {
    for (std::size_t a = 0; a < n_count; ++a) {
      for (std::size_t b = 0; b < n_count; ++b) {
        offaxis_[(t * n_count + a) * n_count + b] =
            a == b ? g_max_
                   : offaxis_gain(line_of_sight_angle(scenario_, t, a, b),
                                  params_);
      }
    }
  }
}

double terrestrial_rate(const Network& net, const TerrestrialMatching& x,
                        std::size_t m, std::size_t j, std::size_t k) {
  if (!x.has(m, j, k)) {
    throw ContractError("terrestrial_rate on an unassigned triple");
  }
  const auto& h = net.realization();
  const double pu = net.params().user_power_w;
  double interference = 0.0;
  for (std::size_t m2 = 0; m2 < x.cell_count(); ++m2) {
    if (m2 == m) continue;
    const int j2 = x.unit_user(m2, k);
    if (j2 != kNone) interference += pu * h.hb2(m, static_cast<std::size_t>(j2), k);
  }
  return std::log2(1.0 + pu * h.hb2(m, j, k) / (net.noise_b() + interference));
}

double cell_rate_bphz(const Network& net, const TerrestrialMatching& x,
                      std::size_t m) {
  double r = 0.0;
  for (std::size_t k = 0; k < x.subch_count(); ++k) {
    const int j = x.unit_user(m, k);
    if (j != kNone) r += terrestrial_rate(net, x, m, static_cast<std::size_t>(j), k);
  }
  return r;
}

double cell_rate(const Network& net, const TerrestrialMatching& x,
                 std::size_t m) {
  return cell_rate_bphz(net, x, m) * net.bw_sub_c();
}

double terrestrial_subchannel_utility(const Network& net,
                                      const TerrestrialMatching& x,
                                      std::size_t k,
                                      std::span<const double> lambda) {
  double u = 0.0;
  for (std::size_t m = 0; m < x.cell_count(); ++m) {
    const int j = x.unit_user(m, k);
    if (j != kNone) {
      u += (1.0 - lambda[m]) *
           terrestrial_rate(net, x, m, static_cast<std::size_t>(j), k);
    }
  }
  return u;
}

double ka_rate(const Network& net, const BackhaulMatching& b, std::size_t t,
               std::size_t n, std::size_t q) {
  const auto own = b.link_at(n, q);
  if (!own || own->tst != static_cast<int>(t)) {
    throw ContractError("ka_rate on an unassigned triple");
  }
  const auto& h = net.realization();
  double interference = 0.0;
  for (const auto& l : b.links_on(q)) {
    if (l.sat == static_cast<int>(n)) continue;
    const auto lt = static_cast<std::size_t>(l.tst);
    interference += l.power_w *
                    net.offaxis(lt, static_cast<std::size_t>(l.sat), n) *
                    h.ht2(lt, n, q);
  }
  const double signal = own->power_w * net.g_max() * h.ht2(t, n, q);
  return std::log2(1.0 + signal / (interference + net.noise_t()));
}

double link_capacity(const Network& net, const BackhaulMatching& b,
                     std::size_t t, std::size_t n) {
  double r = 0.0;
  for (const auto& l : b.links_of(t)) {
    if (l.sat == static_cast<int>(n)) {
      r += ka_rate(net, b, t, n, static_cast<std::size_t>(l.subch));
    }
  }
  return r * net.bw_sub_ka();
}

double SubchannelModel::rate(std::size_t i) const {
  double d = noise;
  for (std::size_t j = 0; j < size(); ++j) {
    if (j != i) d += power[j] * c(i, j);
  }
  return std::log2(1.0 + power[i] * own[i] / d);
}

double SubchannelModel::utility() const {
  double u = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (weight[i] != 0.0) u += weight[i] * rate(i);
  }
  return u;
}

double SubchannelModel::gradient(std::size_t i) const {
  double g = 0.0;
  for (std::size_t k = 0; k < size(); ++k) {
    double d = noise;
    for (std::size_t j = 0; j < size(); ++j) {
      if (j != k) d += power[j] * c(k, j);
    }
    const double s = power[k] * own[k];
    if (k == i) {
      g += weight[k] * own[k] / (d + s);
    } else if (s > 0.0) {
      g -= weight[k] * s * c(k, i) / (d * (d + s));
    }
  }
  return g / std::numbers::ln2;
}

int SubchannelModel::find(int t, int n) const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (tst[i] == t && sat[i] == n) return static_cast<int>(i);
  }
  return kNone;
}

SubchannelModel subchannel_model(const Network& net, const BackhaulMatching& b,
                                 std::size_t q, std::span<const double> weight,
                                 std::span<const std::pair<int, int>> extra) {
  SubchannelModel sm;
  sm.noise = net.noise_t();
  for (const auto& l : b.links_on(q)) {
    sm.tst.push_back(l.tst);
    sm.sat.push_back(l.sat);
    sm.power.push_back(l.power_w);
  }
  for (const auto& [t, n] : extra) {
    if (sm.find(t, n) != kNone) continue;
    sm.tst.push_back(t);
    sm.sat.push_back(n);
    sm.power.push_back(0.0);
  }
  const std::size_t size = sm.tst.size();
  const auto& h = net.realization();
  sm.own.resize(size);
  sm.weight.resize(size);
  sm.coupling.assign(size * size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    const auto ti = static_cast<std::size_t>(sm.tst[i]);
    const auto ni = static_cast<std::size_t>(sm.sat[i]);
    sm.own[i] = net.g_max() * h.ht2(ti, ni, q);
    sm.weight[i] = weight[ti];
    for (std::size_t j = 0; j < size; ++j) {
      if (j == i) continue;
      const auto tj = static_cast<std::size_t>(sm.tst[j]);
      const auto nj = static_cast<std::size_t>(sm.sat[j]);
      // Two links on one subchannel never share a satellite, except for a
      // hypothetical extra link that competes for an occupied unit.
      sm.coupling[i * size + j] =
          nj == ni ? net.g_max() * h.ht2(tj, ni, q)
                   : net.offaxis(tj, nj, ni) * h.ht2(tj, ni, q);
    }
  }
  return sm;
}

double ka_subchannel_utility(const Network& net, const BackhaulMatching& b,
                             std::size_t q, std::span<const double> weight) {
  return subchannel_model(net, b, q, weight).utility();
}

}  // namespace leo
