#include "leo/backhaul.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

namespace leo {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double utility_on(const Network& net, const BackhaulMatching& b,
                  std::span<const double> weight, std::set<int> subchs) {
  double u = 0.0;
  for (int q : subchs) {
    u += ka_subchannel_utility(net, b, static_cast<std::size_t>(q), weight);
  }
  return u;
}

std::size_t index_of(const SubchannelModel& m, int t, int n) {
  const int i = m.find(t, n);
  if (i == kNone) throw ContractError("link missing from subchannel model");
  return static_cast<std::size_t>(i);
}

// Sets a link's power, dropping it when the power is zero.
void put(BackhaulMatching& b, int t, int n, int q, double p) {
  const auto nn = static_cast<std::size_t>(n);
  const auto qq = static_cast<std::size_t>(q);
  const auto cur = b.link_at(nn, qq);
  if (cur && cur->tst != t) throw ContractError("unit held by another TST");
  if (!(p > 0.0)) {
    if (cur) b.remove(nn, qq);
    return;
  }
  if (cur) {
    b.set_power(nn, qq, p);
  } else {
    b.add({t, n, q, p});
  }
}

bool held_by(const BackhaulMatching& b, int t, int n, int q) {
  return n >= 0 && q >= 0 &&
         b.unit_tst(static_cast<std::size_t>(n), static_cast<std::size_t>(q)) == t;
}

bool unit_valid(const BackhaulMatching& b, int n, int q) {
  return n >= 0 && q >= 0 && static_cast<std::size_t>(n) < b.sat_count() &&
         static_cast<std::size_t>(q) < b.subch_count();
}

// Can TST t hold a link to satellite n on subchannel q next to its links on
// q other than `ignore_sat`?
bool placement_ok(const Network& net, const BackhaulMatching& b, int t, int n,
                  int q, int ignore_sat = kNone) {
  const Scenario& s = net.scenario();
  const auto tt = static_cast<std::size_t>(t);
  if (!s.visible(tt, static_cast<std::size_t>(n))) return false;
  for (const auto& l : b.links_of(tt)) {
    if (l.subch != q || l.sat == ignore_sat || l.sat == n) continue;
    if (!angle_gate(s, tt, static_cast<std::size_t>(n),
                    static_cast<std::size_t>(l.sat))) {
      return false;
    }
  }
  return true;
}

BackhaulMatching without(BackhaulMatching b,
                         std::initializer_list<std::pair<int, int>> units) {
  for (const auto& [n, q] : units) {
    b.remove(static_cast<std::size_t>(n), static_cast<std::size_t>(q));
  }
  return b;
}

// Adds link (t, n2, q2) with a donor link (t, nd, qd) sharing `budget`.
BackhaulMatching add_with_donor(const Network& net, const BackhaulMatching& b,
                                std::span<const double> weight, int t, int n2,
                                int q2, int nd, int qd, double budget) {
  BackhaulMatching r = b;
  const std::pair<int, int> extra{t, n2};
  if (nd == kNone) {
    const auto m = subchannel_model(net, b, static_cast<std::size_t>(q2), weight,
                                    std::span(&extra, 1));
    const ScalarResult x = solve_pc3(m, index_of(m, t, n2), 0.0, budget);
    put(r, t, n2, q2, x.p);
    return r;
  }
  if (qd != q2) {
    const auto ma = subchannel_model(net, b, static_cast<std::size_t>(q2), weight,
                                     std::span(&extra, 1));
    const auto mb = subchannel_model(net, b, static_cast<std::size_t>(qd), weight);
    const PairResult x =
        solve_pc1(ma, index_of(ma, t, n2), mb, index_of(mb, t, nd), budget);
    put(r, t, nd, qd, x.p2);
    put(r, t, n2, q2, x.p1);
    return r;
  }
  const auto m = subchannel_model(net, b, static_cast<std::size_t>(q2), weight,
                                  std::span(&extra, 1));
  const PairResult x =
      solve_pc2(m, index_of(m, t, n2), index_of(m, t, nd), budget);
  put(r, t, nd, qd, x.p2);
  put(r, t, n2, q2, x.p1);
  return r;
}

double link_power(const BackhaulMatching& b, int n, int q) {
  return b.link_at(static_cast<std::size_t>(n), static_cast<std::size_t>(q))
      ->power_w;
}

}  // namespace

std::vector<double> tst_weights(const Scenario& s,
                                std::span<const double> lambda) {
  std::vector<double> w(s.tst_count());
  for (std::size_t t = 0; t < w.size(); ++t) w[t] = lambda[s.tst_cell(t)];
  return w;
}

double tst_preference(const Network& net, std::size_t n, std::size_t q,
                      std::size_t m2, std::size_t n2,
                      const PreferenceParams& prefs) {
  if (!net.scenario().visible(m2, n2)) return 0.0;
  const auto& h = net.realization();
  const double num = prefs.rho1 * std::log(net.g_max() * h.ht2(m2, n2, q));
  const double den = prefs.rho2 * std::log(std::max(
                                      net.offaxis(m2, n2, n) * h.ht2(m2, n, q),
                                      kGainFloor));
  return std::exp(num - den);
}

double gradient_entry(const Network& net, const BackhaulMatching& b,
                      std::span<const double> weight, std::size_t m,
                      std::size_t n, std::size_t q) {
  const int holder = b.unit_tst(n, q);
  if (holder == static_cast<int>(m)) {
    const auto model = subchannel_model(net, b, q, weight);
    return -model.gradient(index_of(model, static_cast<int>(m),
                                    static_cast<int>(n)));
  }
  BackhaulMatching tmp = b;
  if (holder != kNone) tmp.remove(n, q);
  const std::pair<int, int> extra{static_cast<int>(m), static_cast<int>(n)};
  auto model = subchannel_model(net, tmp, q, weight, std::span(&extra, 1));
  return -model.gradient(
      index_of(model, static_cast<int>(m), static_cast<int>(n)));
}

std::vector<GradientMatrix> gradient_matrices(const Network& net,
                                              const BackhaulMatching& b,
                                              std::span<const double> weight) {
  std::vector<GradientMatrix> out;
  for (std::size_t m = 0; m < b.tst_count(); ++m) {
    GradientMatrix w(b.sat_count(), b.subch_count());
    for (std::size_t n = 0; n < b.sat_count(); ++n) {
      for (std::size_t q = 0; q < b.subch_count(); ++q) {
        w(n, q) = gradient_entry(net, b, weight, m, n, q);
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

std::pair<int, int> least_affected_link(const Network& net,
                                        const BackhaulMatching& b,
                                        std::span<const double> weight,
                                        std::size_t m) {
  const auto links = b.links_of(m);
  if (links.empty()) {
    throw NoLinkError("TST " + std::to_string(m) + " holds no link");
  }
  double best = kNegInf;
  std::pair<int, int> arg{kNone, kNone};
  for (const auto& l : links) {
    const double w = gradient_entry(net, b, weight, m,
                                    static_cast<std::size_t>(l.sat),
                                    static_cast<std::size_t>(l.subch));
    if (w > best) {
      best = w;
      arg = {l.sat, l.subch};
    }
  }
  return arg;
}

SwapType classify_swap(const SwapPair& p1, const SwapPair& p2) {
  auto unit = [](const SwapPair& p) { return p.sat != kNone && p.subch != kNone; };
  auto no_unit = [](const SwapPair& p) {
    return p.sat == kNone && p.subch == kNone;
  };
  const bool t1 = p1.tst != kNone, t2 = p2.tst != kNone;
  if (t1 && no_unit(p1) && !t2 && unit(p2)) return SwapType::kAdd;
  if (t1 && unit(p1) && !t2 && no_unit(p2)) return SwapType::kWithdraw;
  if (t1 && t2 && unit(p1) && unit(p2)) {
    if (p1.tst == p2.tst) return SwapType::kSameTst;
    if (p1.sat == p2.sat && p1.subch == p2.subch) {
      throw ClassificationError("two TSTs cannot hold the same unit");
    }
    return p1.subch == p2.subch ? SwapType::kCoChannel : SwapType::kCross;
  }
  throw ClassificationError("ill-formed swap");
}

bool swap_feasible(const Network& net, const BackhaulMatching& b,
                   const Swap& s) {
  const auto n_r = static_cast<std::size_t>(net.scenario().n_r());
  if (s.tst1 < 0 || static_cast<std::size_t>(s.tst1) >= b.tst_count()) {
    return false;
  }
  const auto t1 = static_cast<std::size_t>(s.tst1);
  switch (s.type) {
    case SwapType::kAdd: {
      if (!unit_valid(b, s.sat2, s.subch2) ||
          !b.unit_free(static_cast<std::size_t>(s.sat2),
                       static_cast<std::size_t>(s.subch2))) {
        return false;
      }
      if (b.link_count(t1) >= n_r) return false;
      if (s.sat1 == kNone) {
        if (b.link_count(t1) != 0) return false;
      } else if (!held_by(b, s.tst1, s.sat1, s.subch1)) {
        return false;
      }
      return placement_ok(net, b, s.tst1, s.sat2, s.subch2);
    }
    case SwapType::kWithdraw:
      return held_by(b, s.tst1, s.sat1, s.subch1);
    case SwapType::kSameTst: {
      if (s.tst2 != s.tst1 || !held_by(b, s.tst1, s.sat1, s.subch1) ||
          !unit_valid(b, s.sat2, s.subch2)) {
        return false;
      }
      if (s.sat1 == s.sat2 && s.subch1 == s.subch2) return false;
      if (held_by(b, s.tst1, s.sat2, s.subch2)) return true;
      if (!b.unit_free(static_cast<std::size_t>(s.sat2),
                       static_cast<std::size_t>(s.subch2))) {
        return false;
      }
      if (b.link_count(t1) >= n_r) return false;
      return placement_ok(net, b, s.tst1, s.sat2, s.subch2);
    }
    case SwapType::kCross:
    case SwapType::kCoChannel: {
      if (s.tst2 == s.tst1 || s.tst2 < 0 ||
          static_cast<std::size_t>(s.tst2) >= b.tst_count()) {
        return false;
      }
      if (!held_by(b, s.tst1, s.sat1, s.subch1) ||
          !held_by(b, s.tst2, s.sat2, s.subch2)) {
        return false;
      }
      if ((s.type == SwapType::kCoChannel) != (s.subch1 == s.subch2)) {
        return false;
      }
      const BackhaulMatching tmp =
          without(b, {{s.sat1, s.subch1}, {s.sat2, s.subch2}});
      return placement_ok(net, tmp, s.tst1, s.sat2, s.subch2) &&
             placement_ok(net, tmp, s.tst2, s.sat1, s.subch1);
    }
  }
  return false;
}

bool improves(double before, double after) {
  return after - before >
         kApprovalTolerance * std::max(1.0, std::abs(before));
}

SwapEvaluation evaluate_swap(const Network& net, const BackhaulMatching& b,
                             const Swap& s, std::span<const double> weight) {
  if (!swap_feasible(net, b, s)) throw FeasibilityError("infeasible swap");
  const auto t1 = static_cast<std::size_t>(s.tst1);
  const double u1 = std::max(b.unallocated_power(t1), 0.0);
  std::set<int> touched;
  SwapEvaluation ev;

  switch (s.type) {
    case SwapType::kAdd: {
      touched = {s.subch2};
      double budget = u1;
      if (s.sat1 != kNone) {
        touched.insert(s.subch1);
        budget += link_power(b, s.sat1, s.subch1);
      }
      ev.result = add_with_donor(net, b, weight, s.tst1, s.sat2, s.subch2,
                                 s.sat1, s.subch1, budget);
      break;
    }
    case SwapType::kWithdraw: {
      touched = {s.subch1};
      const auto m = subchannel_model(net, b, static_cast<std::size_t>(s.subch1),
                                      weight);
      const ScalarResult x = solve_pc3(m, index_of(m, s.tst1, s.sat1), 0.0,
                                       link_power(b, s.sat1, s.subch1));
      ev.result = b;
      put(ev.result, s.tst1, s.sat1, s.subch1, x.p);
      break;
    }
    case SwapType::kSameTst: {
      touched = {s.subch1, s.subch2};
      const double p1 = link_power(b, s.sat1, s.subch1);
      if (!held_by(b, s.tst1, s.sat2, s.subch2)) {
        ev.result = add_with_donor(net, b, weight, s.tst1, s.sat2, s.subch2,
                                   s.sat1, s.subch1, u1 + p1);
        break;
      }
      const double budget = p1 + link_power(b, s.sat2, s.subch2) + u1;
      ev.result = b;
      if (s.subch1 != s.subch2) {
        const auto ma = subchannel_model(
            net, b, static_cast<std::size_t>(s.subch1), weight);
        const auto mb = subchannel_model(
            net, b, static_cast<std::size_t>(s.subch2), weight);
        const PairResult x = solve_pc1(ma, index_of(ma, s.tst1, s.sat1), mb,
                                       index_of(mb, s.tst1, s.sat2), budget);
        put(ev.result, s.tst1, s.sat1, s.subch1, x.p1);
        put(ev.result, s.tst1, s.sat2, s.subch2, x.p2);
      } else {
        const auto m = subchannel_model(
            net, b, static_cast<std::size_t>(s.subch1), weight);
        const PairResult x = solve_pc2(m, index_of(m, s.tst1, s.sat1),
                                       index_of(m, s.tst1, s.sat2), budget);
        put(ev.result, s.tst1, s.sat1, s.subch1, x.p1);
        put(ev.result, s.tst1, s.sat2, s.subch2, x.p2);
      }
      break;
    }
    case SwapType::kCross:
    case SwapType::kCoChannel: {
      touched = {s.subch1, s.subch2};
      const auto t2 = static_cast<std::size_t>(s.tst2);
      const double cap1 = link_power(b, s.sat1, s.subch1) + u1;
      const double cap2 =
          link_power(b, s.sat2, s.subch2) + std::max(b.unallocated_power(t2), 0.0);
      const BackhaulMatching tmp =
          without(b, {{s.sat1, s.subch1}, {s.sat2, s.subch2}});
      ev.result = tmp;
      const std::pair<int, int> e1{s.tst1, s.sat2};
      const std::pair<int, int> e2{s.tst2, s.sat1};
      if (s.type == SwapType::kCross) {
        const auto ma = subchannel_model(
            net, tmp, static_cast<std::size_t>(s.subch2), weight, std::span(&e1, 1));
        const auto mb = subchannel_model(
            net, tmp, static_cast<std::size_t>(s.subch1), weight, std::span(&e2, 1));
        const ScalarResult xa =
            solve_pc3(ma, index_of(ma, s.tst1, s.sat2), 0.0, cap1);
        const ScalarResult xb =
            solve_pc3(mb, index_of(mb, s.tst2, s.sat1), 0.0, cap2);
        put(ev.result, s.tst1, s.sat2, s.subch2, xa.p);
        put(ev.result, s.tst2, s.sat1, s.subch1, xb.p);
      } else {
        const std::array<std::pair<int, int>, 2> extra{e1, e2};
        const auto m = subchannel_model(
            net, tmp, static_cast<std::size_t>(s.subch1), weight, extra);
        const PairResult x =
            solve_pc2_box(m, index_of(m, s.tst1, s.sat2),
                          index_of(m, s.tst2, s.sat1), cap1, cap2);
        put(ev.result, s.tst1, s.sat2, s.subch2, x.p1);
        put(ev.result, s.tst2, s.sat1, s.subch1, x.p2);
      }
      break;
    }
  }
  ev.before = utility_on(net, b, weight, touched);
  ev.after = utility_on(net, ev.result, weight, touched);
  ev.approved = improves(ev.before, ev.after);
  return ev;
}

bool prune_keep(const Network& net, const BackhaulMatching& b, const Swap& s,
                std::span<const double> weight) {
  auto w = [&](const BackhaulMatching& bb, int t, int n, int q) {
    return gradient_entry(net, bb, weight, static_cast<std::size_t>(t),
                          static_cast<std::size_t>(n),
                          static_cast<std::size_t>(q));
  };
  switch (s.type) {
    case SwapType::kAdd:
      return w(b, s.tst1, s.sat2, s.subch2) < 0.0;
    case SwapType::kWithdraw:
      return w(b, s.tst1, s.sat1, s.subch1) > 0.0;
    case SwapType::kSameTst: {
      const double w1 = w(b, s.tst1, s.sat1, s.subch1);
      const double w2 = w(b, s.tst1, s.sat2, s.subch2);
      if (held_by(b, s.tst1, s.sat2, s.subch2)) return w1 != w2;
      return w2 < 0.0 && w2 < w1;
    }
    case SwapType::kCross: {
      const BackhaulMatching tmp =
          without(b, {{s.sat1, s.subch1}, {s.sat2, s.subch2}});
      return !(w(tmp, s.tst1, s.sat2, s.subch2) > 0.0 &&
               w(tmp, s.tst2, s.sat1, s.subch1) > 0.0);
    }
    case SwapType::kCoChannel:
      return true;
  }
  return true;
}

std::vector<Swap> enumerate_swaps(const Network& net, const BackhaulMatching& b,
                                  std::span<const double> weight) {
  std::vector<Swap> out;
  const auto& links = b.links();
  const std::size_t tsts = b.tst_count();
  auto push = [&](const Swap& s) {
    if (swap_feasible(net, b, s)) out.push_back(s);
  };
  // Additions, with the least affected link as power donor.
  for (std::size_t t = 0; t < tsts; ++t) {
    std::pair<int, int> donor{kNone, kNone};
    if (b.link_count(t) > 0) donor = least_affected_link(net, b, weight, t);
    for (std::size_t q = 0; q < b.subch_count(); ++q) {
      for (std::size_t n = 0; n < b.sat_count(); ++n) {
        if (!b.unit_free(n, q)) continue;
        push({SwapType::kAdd, static_cast<int>(t), donor.first, donor.second,
              kNone, static_cast<int>(n), static_cast<int>(q)});
      }
    }
  }
  for (const auto& l : links) {
    push({SwapType::kWithdraw, l.tst, l.sat, l.subch, kNone, kNone, kNone});
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    for (std::size_t j = i + 1; j < links.size(); ++j) {
      if (links[i].tst != links[j].tst) continue;
      push({SwapType::kSameTst, links[i].tst, links[i].sat, links[i].subch,
            links[j].tst, links[j].sat, links[j].subch});
    }
  }
  for (const auto& l : links) {
    for (std::size_t q = 0; q < b.subch_count(); ++q) {
      for (std::size_t n = 0; n < b.sat_count(); ++n) {
        if (!b.unit_free(n, q)) continue;
        push({SwapType::kSameTst, l.tst, l.sat, l.subch, l.tst,
              static_cast<int>(n), static_cast<int>(q)});
      }
    }
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    for (std::size_t j = i + 1; j < links.size(); ++j) {
      if (links[i].tst == links[j].tst) continue;
      const SwapType type = links[i].subch == links[j].subch
                                ? SwapType::kCoChannel
                                : SwapType::kCross;
      push({type, links[i].tst, links[i].sat, links[i].subch, links[j].tst,
            links[j].sat, links[j].subch});
    }
  }
  return out;
}

// ---- capacity --------------------------------------------------------------

std::vector<double> solve_load_split(std::span<const double> capacity_bps,
                                     std::span<const double> delay_s,
                                     double load_bits) {
  const std::size_t n = capacity_bps.size();
  std::vector<double> loads(n, 0.0);
  if (load_bits <= 0.0) return loads;
  std::vector<std::uint8_t> active(n, 0);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    active[i] = capacity_bps[i] > 0.0;
    any = any || active[i];
  }
  if (!any) throw LoadSplitError("traffic with no associated satellite");
  for (;;) {
    double sum_c = 0.0, sum_ct = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      sum_c += capacity_bps[i];
      sum_ct += capacity_bps[i] * delay_s[i];
    }
    const double tau = (load_bits + sum_ct) / sum_c;
    bool dropped = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      loads[i] = capacity_bps[i] * (tau - delay_s[i]);
      if (loads[i] < 0.0) {
        active[i] = 0;
        loads[i] = 0.0;
        dropped = true;
      }
    }
    if (!dropped) break;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) loads[i] = 0.0;
    }
  }
  return loads;
}

double equivalent_capacity(std::span<const double> capacity_bps,
                           std::span<const double> delay_s,
                           std::span<const double> loads_bits) {
  double c = 0.0;
  for (std::size_t i = 0; i < capacity_bps.size(); ++i) {
    if (loads_bits[i] > 0.0 && capacity_bps[i] > 0.0) {
      c += 1.0 / (1.0 / capacity_bps[i] + delay_s[i] / loads_bits[i]);
    }
  }
  return c;
}

double completion_time(std::span<const double> capacity_bps,
                       std::span<const double> delay_s,
                       std::span<const double> loads_bits) {
  double t = 0.0;
  for (std::size_t i = 0; i < capacity_bps.size(); ++i) {
    if (loads_bits[i] > 0.0 && capacity_bps[i] > 0.0) {
      t = std::max(t, loads_bits[i] / capacity_bps[i] + delay_s[i]);
    }
  }
  return t;
}

BackhaulCapacity backhaul_capacity(const Network& net, const BackhaulMatching& b,
                                   std::span<const double> traffic_bits) {
  const Scenario& s = net.scenario();
  const std::size_t tsts = b.tst_count();
  const std::size_t sats = b.sat_count();
  std::vector<double> delays(sats);
  for (std::size_t n = 0; n < sats; ++n) delays[n] = propagation_delay(s, n);

  BackhaulCapacity cap;
  cap.link_bps.assign(tsts, std::vector<double>(sats, 0.0));
  cap.load_bits.assign(tsts, std::vector<double>(sats, 0.0));
  cap.equivalent_bps.assign(tsts, 0.0);
  cap.raw_bps.assign(tsts, 0.0);
  cap.delay_s.assign(tsts, 0.0);
  cap.traffic_bits.assign(tsts, 0.0);

  std::vector<double> rate_sum(tsts * sats, 0.0);
  for (const auto& l : b.links()) {
    rate_sum[static_cast<std::size_t>(l.tst) * sats +
             static_cast<std::size_t>(l.sat)] +=
        ka_rate(net, b, static_cast<std::size_t>(l.tst),
                static_cast<std::size_t>(l.sat),
                static_cast<std::size_t>(l.subch));
  }
  for (std::size_t t = 0; t < tsts; ++t) {
    for (std::size_t n = 0; n < sats; ++n) {
      cap.link_bps[t][n] = rate_sum[t * sats + n] * net.bw_sub_ka();
      cap.raw_bps[t] += cap.link_bps[t][n];
    }
    const double load = traffic_bits.empty() ? 0.0 : traffic_bits[t];
    cap.traffic_bits[t] = load;
    if (load <= 0.0) continue;
    if (cap.raw_bps[t] <= 0.0) {
      cap.delay_s[t] = std::numeric_limits<double>::infinity();
      continue;
    }
    cap.load_bits[t] = solve_load_split(cap.link_bps[t], delays, load);
    cap.equivalent_bps[t] =
        equivalent_capacity(cap.link_bps[t], delays, cap.load_bits[t]);
    cap.delay_s[t] = completion_time(cap.link_bps[t], delays, cap.load_bits[t]);
  }
  return cap;
}

double weighted_capacity(const Network& net, const BackhaulMatching& b,
                         std::span<const double> weight) {
  double u = 0.0;
  for (std::size_t q = 0; q < b.subch_count(); ++q) {
    u += ka_subchannel_utility(net, b, q, weight);
  }
  return u * net.bw_sub_ka();
}

// ---- SMPC ----------------------------------------------------------------

BackhaulMatching smpc_initialize(const Network& net,
                                 std::span<const double> weight,
                                 const PreferenceParams& prefs) {
  const Scenario& s = net.scenario();
  const auto& h = net.realization();
  const std::size_t tsts = s.tst_count();
  const std::size_t sats = s.satellite_count();
  const auto subch = static_cast<std::size_t>(s.q_subch());
  const double pmax = net.params().tst_max_power_w;
  const double p0 = pmax / s.n_r();
  BackhaulMatching b(tsts, sats, subch, pmax);
  if (tsts == 0 || sats == 0) return b;

  auto unmatched = [&](std::size_t t) { return b.link_count(t) == 0; };

  // Greedy seeding: each empty subchannel proposes to its strongest
  // (TST, satellite) pair; a TST keeps its strongest proposal.
  std::vector<std::uint8_t> has_link(subch, 0), exhausted(subch, 0);
  for (;;) {
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> props(tsts);
    bool any = false;
    for (std::size_t q = 0; q < subch; ++q) {
      if (has_link[q] || exhausted[q]) continue;
      double best = kNegInf;
      std::size_t bt = 0, bn = 0;
      for (std::size_t t = 0; t < tsts; ++t) {
        if (!unmatched(t)) continue;
        for (std::size_t n = 0; n < sats; ++n) {
          if (!s.visible(t, n)) continue;
          if (h.ht2(t, n, q) > best) {
            best = h.ht2(t, n, q);
            bt = t;
            bn = n;
          }
        }
      }
      if (best == kNegInf) {
        exhausted[q] = 1;
        continue;
      }
      props[bt].emplace_back(q, bn);
      any = true;
    }
    if (!any) break;
    for (std::size_t t = 0; t < tsts; ++t) {
      if (props[t].empty()) continue;
      auto c = props[t].front();
      for (const auto& [q, n] : props[t]) {
        if (h.ht2(t, n, q) > h.ht2(t, c.second, c.first)) c = {q, n};
      }
      b.add({static_cast<int>(t), static_cast<int>(c.second),
             static_cast<int>(c.first), p0});
      has_link[c.first] = 1;
    }
  }

  // Propose/reject rounds driven by the unit preferences.
  std::vector<std::vector<std::uint8_t>> crossed(sats * subch);
  for (;;) {
    struct Cand {
      int t, n;
      std::vector<std::size_t> proposers;  // unit index n*Q + q
      double gain;
    };
    std::vector<std::optional<Cand>> chosen(subch);
    for (std::size_t q = 0; q < subch; ++q) {
      std::vector<Cand> cands;
      for (std::size_t n = 0; n < sats; ++n) {
        if (b.unit_free(n, q)) continue;
        auto& cr = crossed[n * subch + q];
        if (cr.empty()) cr.assign(tsts * sats, 0);
        double best = kNegInf;
        int bt = kNone, bn = kNone;
        for (std::size_t t = 0; t < tsts; ++t) {
          if (!unmatched(t)) continue;
          for (std::size_t n2 = 0; n2 < sats; ++n2) {
            if (n2 == n || !b.unit_free(n2, q) || !s.visible(t, n2) ||
                cr[t * sats + n2]) {
              continue;
            }
            const double w = tst_preference(net, n, q, t, n2, prefs);
            if (w > best) {
              best = w;
              bt = static_cast<int>(t);
              bn = static_cast<int>(n2);
            }
          }
        }
        if (bt == kNone) continue;
        auto it = std::find_if(cands.begin(), cands.end(), [&](const Cand& c) {
          return c.t == bt && c.n == bn;
        });
        if (it == cands.end()) {
          cands.push_back({bt, bn, {n * subch + q}, 0.0});
        } else {
          it->proposers.push_back(n * subch + q);
        }
      }
      if (cands.empty()) continue;
      const double base = ka_subchannel_utility(net, b, q, weight);
      int pick = -1;
      for (std::size_t c = 0; c < cands.size(); ++c) {
        BackhaulMatching tmp = b;
        tmp.add({cands[c].t, cands[c].n, static_cast<int>(q), p0});
        cands[c].gain = ka_subchannel_utility(net, tmp, q, weight) - base;
        if (cands[c].gain > 0.0 &&
            (pick < 0 || cands[c].gain > cands[static_cast<std::size_t>(pick)].gain)) {
          pick = static_cast<int>(c);
        }
      }
      for (std::size_t c = 0; c < cands.size(); ++c) {
        if (static_cast<int>(c) == pick) continue;
        for (std::size_t u : cands[c].proposers) {
          crossed[u][static_cast<std::size_t>(cands[c].t) * sats +
                     static_cast<std::size_t>(cands[c].n)] = 1;
        }
      }
      if (pick >= 0) chosen[q] = cands[static_cast<std::size_t>(pick)];
    }
    std::vector<int> best_q(tsts, kNone);
    for (std::size_t q = 0; q < subch; ++q) {
      if (!chosen[q]) continue;
      const auto t = static_cast<std::size_t>(chosen[q]->t);
      if (best_q[t] == kNone ||
          chosen[q]->gain > chosen[static_cast<std::size_t>(best_q[t])]->gain) {
        best_q[t] = static_cast<int>(q);
      }
    }
    bool accepted = false;
    for (std::size_t t = 0; t < tsts; ++t) {
      if (best_q[t] == kNone) continue;
      const auto q = static_cast<std::size_t>(best_q[t]);
      b.add({chosen[q]->t, chosen[q]->n, static_cast<int>(q), p0});
      accepted = true;
    }
    if (!accepted) break;
  }
  return b;
}

SmpcResult smpc(const Network& net, std::span<const double> weight,
                const SmpcOptions& options) {
  SmpcResult res;
  res.phi = smpc_initialize(net, weight, options.prefs);
  res.stats.objective.push_back(weighted_capacity(net, res.phi, weight));
  // With every weight at zero the utility is identically zero and no swap
  // can be approved.
  if (std::all_of(weight.begin(), weight.end(),
                  [](double w) { return w == 0.0; })) {
    return res;
  }
  int swaps = 0;
  for (;;) {
    bool found = false;
    for (int pass = options.prune ? 0 : 1; pass < 2 && !found; ++pass) {
      ++res.stats.sweeps;
      for (const Swap& s : enumerate_swaps(net, res.phi, weight)) {
        if (pass == 0 && !prune_keep(net, res.phi, s, weight)) {
          ++res.stats.pruned;
          continue;
        }
        ++res.stats.evaluated;
        SwapEvaluation ev = evaluate_swap(net, res.phi, s, weight);
        if (!ev.approved) continue;
        res.phi = std::move(ev.result);
        ++res.stats.executed[static_cast<std::size_t>(s.type)];
        res.stats.objective.push_back(weighted_capacity(net, res.phi, weight));
        found = true;
        break;
      }
    }
    if (!found) break;
    if (++swaps >= options.max_swaps) {
      res.stats.converged = false;
      break;
    }
  }
  return res;
}

namespace {

BackhaulMatching equal_split(BackhaulMatching b) {
  for (std::size_t t = 0; t < b.tst_count(); ++t) {
    const auto links = b.links_of(t);
    for (const auto& l : links) {
      b.set_power(static_cast<std::size_t>(l.sat),
                  static_cast<std::size_t>(l.subch),
                  b.max_power_w() / static_cast<double>(links.size()));
    }
  }
  return b;
}

}  // namespace

BackhaulMatching random_backhaul(const Network& net, std::uint64_t seed) {
  const Scenario& s = net.scenario();
  BackhaulMatching b(s.tst_count(), s.satellite_count(),
                     static_cast<std::size_t>(s.q_subch()),
                     net.params().tst_max_power_w);
  Rng rng = make_rng(seed, Stream::kBaseline);
  for (std::size_t t = 0; t < s.tst_count(); ++t) {
    std::vector<std::pair<int, int>> units;
    for (std::size_t q = 0; q < b.subch_count(); ++q) {
      for (std::size_t n = 0; n < b.sat_count(); ++n) {
        units.emplace_back(static_cast<int>(n), static_cast<int>(q));
      }
    }
    std::shuffle(units.begin(), units.end(), rng);
    for (const auto& [n, q] : units) {
      if (b.link_count(t) >= static_cast<std::size_t>(s.n_r())) break;
      if (!b.unit_free(static_cast<std::size_t>(n), static_cast<std::size_t>(q)) ||
          !placement_ok(net, b, static_cast<int>(t), n, q)) {
        continue;
      }
      b.add({static_cast<int>(t), n, q, 1.0});
    }
  }
  return equal_split(std::move(b));
}

BackhaulMatching greedy_backhaul(const Network& net) {
  const Scenario& s = net.scenario();
  const auto& h = net.realization();
  BackhaulMatching b(s.tst_count(), s.satellite_count(),
                     static_cast<std::size_t>(s.q_subch()),
                     net.params().tst_max_power_w);
  for (std::size_t t = 0; t < s.tst_count(); ++t) {
    while (b.link_count(t) < static_cast<std::size_t>(s.n_r())) {
      double best = kNegInf;
      int bn = kNone, bq = kNone;
      for (std::size_t q = 0; q < b.subch_count(); ++q) {
        for (std::size_t n = 0; n < b.sat_count(); ++n) {
          if (!b.unit_free(n, q) ||
              !placement_ok(net, b, static_cast<int>(t), static_cast<int>(n),
                            static_cast<int>(q))) {
            continue;
          }
          if (h.ht2(t, n, q) > best) {
            best = h.ht2(t, n, q);
            bn = static_cast<int>(n);
            bq = static_cast<int>(q);
          }
        }
      }
      if (bn == kNone) break;
      b.add({static_cast<int>(t), bn, bq, 1.0});
    }
  }
  return equal_split(std::move(b));
}

std::vector<std::string> validate_backhaul(const Network& net,
                                           const BackhaulMatching& b) {
  const Scenario& s = net.scenario();
  std::vector<std::string> err;
  std::set<std::pair<int, int>> units;
  for (const auto& l : b.links()) {
    if (!units.insert({l.sat, l.subch}).second) {
      err.push_back("unit held twice");
    }
    if (l.power_w < 0.0 || !std::isfinite(l.power_w)) {
      err.push_back("invalid link power");
    }
    if (!s.visible(static_cast<std::size_t>(l.tst),
                   static_cast<std::size_t>(l.sat))) {
      err.push_back("link to an invisible satellite");
    }
  }
  for (std::size_t t = 0; t < b.tst_count(); ++t) {
    const auto links = b.links_of(t);
    if (links.size() > static_cast<std::size_t>(s.n_r())) {
      err.push_back("TST " + std::to_string(t) + " exceeds the link limit");
    }
    if (b.allocated_power(t) > b.max_power_w() * (1.0 + 1e-9)) {
      err.push_back("TST " + std::to_string(t) + " exceeds its power budget");
    }
    for (std::size_t i = 0; i < links.size(); ++i) {
      for (std::size_t j = i + 1; j < links.size(); ++j) {
        if (links[i].subch == links[j].subch &&
            !angle_gate(s, t, static_cast<std::size_t>(links[i].sat),
                        static_cast<std::size_t>(links[j].sat))) {
          err.push_back("TST " + std::to_string(t) + " violates the angle gate");
        }
      }
    }
  }
  return err;
}

SwapSpace count_swap_space(long long tsts, long long sats, long long subch,
                           long long n_r) {
  SwapSpace c;
  c.n12 = sats * subch * tsts;
  c.n3 = n_r * (n_r - 1) * tsts / 2;
  c.n45 = tsts < 1 ? 0
                   : n_r * (tsts - 1) *
                         std::max(2 * sats * subch - tsts * n_r, tsts * n_r) / 2;
  return c;
}

}  // namespace leo
