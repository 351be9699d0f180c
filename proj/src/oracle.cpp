#include "leo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <utility>

namespace leo::oracle {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ---- terrestrial helpers -------------------------------------------------

bool augment(const std::vector<std::vector<int>>& adj, int u,
             std::vector<int>& unit_owner, std::vector<std::uint8_t>& seen) {
  for (int v : adj[static_cast<std::size_t>(u)]) {
    const auto vv = static_cast<std::size_t>(v);
    if (seen[vv]) continue;
    seen[vv] = 1;
    if (unit_owner[vv] < 0 || augment(adj, unit_owner[vv], unit_owner, seen)) {
      unit_owner[vv] = u;
      return true;
    }
  }
  return false;
}

double link_rate(const Network& net, const TerrestrialMatching& psi,
                 std::size_t j) {
  return terrestrial_rate(net, psi, static_cast<std::size_t>(psi.user_cell(j)),
                          j, static_cast<std::size_t>(psi.user_subch(j)));
}

// ---- backhaul helpers ----------------------------------------------------

double utility(const Network& net, const BackhaulMatching& b,
               std::span<const double> weight, const std::set<int>& subchs) {
  double u = 0.0;
  for (int q : subchs) {
    for (const auto& l : b.links_on(static_cast<std::size_t>(q))) {
      const double w = weight[static_cast<std::size_t>(l.tst)];
      if (w == 0.0) continue;
      u += w * ka_rate(net, b, static_cast<std::size_t>(l.tst),
                       static_cast<std::size_t>(l.sat),
                       static_cast<std::size_t>(q));
    }
  }
  return u;
}

bool gate_ok(const Scenario& s, const BackhaulMatching& b, int t, int n, int q) {
  if (!s.visible(static_cast<std::size_t>(t), static_cast<std::size_t>(n))) {
    return false;
  }
  for (const auto& l : b.links_of(static_cast<std::size_t>(t))) {
    if (l.subch != q || l.sat == n) continue;
    if (!angle_gate(s, static_cast<std::size_t>(t), static_cast<std::size_t>(n),
                    static_cast<std::size_t>(l.sat))) {
      return false;
    }
  }
  return true;
}

struct Evaluator {
  const Network& net;
  std::span<const double> weight;
  SwapOracleOptions opt;

  // Utility with the listed links at the given powers.
  struct Slot {
    int n, q;
  };

  double one(BackhaulMatching& w, Slot a, const std::set<int>& touched,
             double hi) const {
    auto f = [&](double p) {
      w.set_power(static_cast<std::size_t>(a.n), static_cast<std::size_t>(a.q), p);
      return utility(net, w, weight, touched);
    };
    return zoom_1d(f, 0.0, hi, opt.points_1d, opt.zoom_levels).value;
  }

  double simplex(BackhaulMatching& w, Slot a, Slot b,
                 const std::set<int>& touched, double budget) const {
    auto f = [&](double p1, double p2) {
      w.set_power(static_cast<std::size_t>(a.n), static_cast<std::size_t>(a.q), p1);
      w.set_power(static_cast<std::size_t>(b.n), static_cast<std::size_t>(b.q), p2);
      return utility(net, w, weight, touched);
    };
    return zoom_simplex(f, budget, opt.resolution_2d, opt.zoom_levels).value;
  }

  double box(BackhaulMatching& w, Slot a, Slot b, const std::set<int>& touched,
             double cap1, double cap2) const {
    auto f = [&](double p1, double p2) {
      w.set_power(static_cast<std::size_t>(a.n), static_cast<std::size_t>(a.q), p1);
      w.set_power(static_cast<std::size_t>(b.n), static_cast<std::size_t>(b.q), p2);
      return utility(net, w, weight, touched);
    };
    return zoom_box(f, cap1, cap2, opt.resolution_2d, opt.zoom_levels).value;
  }
};

double power_of(const BackhaulMatching& b, int n, int q) {
  return b.link_at(static_cast<std::size_t>(n), static_cast<std::size_t>(q))
      ->power_w;
}

}  // namespace

// ---- terrestrial -----------------------------------------------------------

int max_bipartite(const Scenario& s, std::span<const std::uint8_t> enabled) {
  const std::size_t cells = s.cell_count();
  const auto k = static_cast<std::size_t>(s.k_subch());
  std::vector<std::vector<int>> adj(s.user_count());
  for (std::size_t j = 0; j < s.user_count(); ++j) {
    for (std::size_t m = 0; m < cells; ++m) {
      if (!enabled.empty() && !enabled[m]) continue;
      if (!s.covers(m, j)) continue;
      for (std::size_t q = 0; q < k; ++q) {
        adj[j].push_back(static_cast<int>(m * k + q));
      }
    }
  }
  std::vector<int> owner(cells * k, -1);
  int matched = 0;
  for (std::size_t j = 0; j < s.user_count(); ++j) {
    std::vector<std::uint8_t> seen(cells * k, 0);
    if (augment(adj, static_cast<int>(j), owner, seen)) ++matched;
  }
  return matched;
}

TtoOptimum exhaustive_tto(const Network& net, std::span<const double> lambda,
                          double mu, const Bounds& bounds) {
  const Scenario& s = net.scenario();
  if (static_cast<int>(s.user_count()) > bounds.max_users ||
      static_cast<int>(s.cell_count()) > bounds.max_small_cells + 1 ||
      s.k_subch() > bounds.max_k) {
    throw RefusedError("instance too large for exhaustive enumeration");
  }
  const std::size_t users = s.user_count();
  const std::size_t cells = s.cell_count();
  const auto k = static_cast<std::size_t>(s.k_subch());
  TerrestrialMatching x(cells, users, k);
  TtoOptimum best;
  best.objective = kNegInf;
  best.best = x;

  auto score = [&]() {
    double v = 0.0;
    for (std::size_t j = 0; j < users; ++j) {
      if (!x.user_matched(j)) continue;
      const auto m = static_cast<std::size_t>(x.user_cell(j));
      v += (1.0 - lambda[m]) * link_rate(net, x, j);
    }
    return v + mu * static_cast<double>(x.accessed_count());
  };

  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == users) {
      const double v = score();
      best.max_accessed =
          std::max(best.max_accessed, static_cast<int>(x.accessed_count()));
      if (v > best.objective) {
        best.objective = v;
        best.best = x;
      }
      return;
    }
    rec(j + 1);
    for (std::size_t m = 0; m < cells; ++m) {
      if (!s.covers(m, j)) continue;
      for (std::size_t q = 0; q < k; ++q) {
        if (!x.unit_free(m, q)) continue;
        x.assign(j, m, q);
        rec(j + 1);
        x.unassign(j);
      }
    }
  };
  rec(0);
  return best;
}

std::vector<BlockingPair> verify_group_stability(const Network& net,
                                                 const TerrestrialMatching& psi,
                                                 bool require_bystanders) {
  const Scenario& s = net.scenario();
  std::vector<BlockingPair> out;
  std::vector<std::size_t> matched;
  for (std::size_t j = 0; j < psi.user_count(); ++j) {
    if (psi.user_matched(j)) matched.push_back(j);
  }
  for (std::size_t a = 0; a < matched.size(); ++a) {
    for (std::size_t b = 0; b < matched.size(); ++b) {
      if (a == b) continue;
      const std::size_t j1 = matched[a], j2 = matched[b];
      const auto m1 = static_cast<std::size_t>(psi.user_cell(j1));
      const auto k1 = static_cast<std::size_t>(psi.user_subch(j1));
      const auto m2 = static_cast<std::size_t>(psi.user_cell(j2));
      const auto k2 = static_cast<std::size_t>(psi.user_subch(j2));
      // Each unordered pair once.
      if (j1 > j2) continue;
      if (!s.covers(m1, j2) || !s.covers(m2, j1)) continue;

      TerrestrialMatching y = psi;
      y.unassign(j1);
      y.unassign(j2);
      y.assign(j2, m1, k1);
      y.assign(j1, m2, k2);

      const bool cond2 =
          terrestrial_rate(net, y, m1, j2, k1) > terrestrial_rate(net, psi, m1, j1, k1) &&
          terrestrial_rate(net, y, m2, j1, k2) > terrestrial_rate(net, psi, m2, j2, k2);
      if (!cond2) continue;
      bool cond1 = true;
      if (require_bystanders) {
        for (std::size_t j : matched) {
          if (j == j1 || j == j2) continue;
          const auto k = static_cast<std::size_t>(psi.user_subch(j));
          if (k != k1 && k != k2) continue;
          const auto m = static_cast<std::size_t>(psi.user_cell(j));
          if (!(terrestrial_rate(net, y, m, j, k) >
                terrestrial_rate(net, psi, m, j, k))) {
            cond1 = false;
            break;
          }
        }
      }
      if (cond1) {
        out.push_back({static_cast<int>(j1), static_cast<int>(m1),
                       static_cast<int>(k1), static_cast<int>(j2),
                       static_cast<int>(m2), static_cast<int>(k2)});
      }
    }
  }
  return out;
}

// ---- grids -------------------------------------------------------------------

Grid1 grid_1d(const Objective1& f, double lo, double hi, int points) {
  Grid1 best{lo, kNegInf};
  const int n = std::max(points, 2);
  for (int i = 0; i < n; ++i) {
    const double p = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
    const double v = f(p);
    if (v > best.value) best = {p, v};
  }
  return best;
}

Grid2 grid_simplex(const Objective2& f, double budget, int resolution) {
  Grid2 best{0.0, 0.0, kNegInf};
  const int r = std::max(resolution, 1);
  for (int i = 0; i <= r; ++i) {
    for (int j = 0; i + j <= r; ++j) {
      const double p1 = budget * i / r, p2 = budget * j / r;
      const double v = f(p1, p2);
      if (v > best.value) best = {p1, p2, v};
    }
  }
  return best;
}

Grid2 grid_box(const Objective2& f, double cap1, double cap2, int resolution) {
  Grid2 best{0.0, 0.0, kNegInf};
  const int r = std::max(resolution, 1);
  for (int i = 0; i <= r; ++i) {
    for (int j = 0; j <= r; ++j) {
      const double p1 = cap1 * i / r, p2 = cap2 * j / r;
      const double v = f(p1, p2);
      if (v > best.value) best = {p1, p2, v};
    }
  }
  return best;
}

Grid1 zoom_1d(const Objective1& f, double lo, double hi, int points, int levels) {
  Grid1 best = grid_1d(f, lo, hi, points);
  double half = (hi - lo) / std::max(points - 1, 1);
  for (int l = 0; l < levels; ++l) {
    const Grid1 g = grid_1d(f, std::max(lo, best.p - half),
                            std::min(hi, best.p + half), 21);
    if (g.value > best.value) best = g;
    half /= 10.0;
  }
  return best;
}

Grid2 zoom_simplex(const Objective2& f, double budget, int resolution,
                   int levels) {
  Grid2 best = grid_simplex(f, budget, resolution);
  double half = budget / std::max(resolution, 1);
  for (int l = 0; l < levels; ++l) {
    const double lo1 = std::max(0.0, best.p1 - half);
    const double lo2 = std::max(0.0, best.p2 - half);
    const double span1 = std::min(budget, best.p1 + half) - lo1;
    const double span2 = std::min(budget, best.p2 + half) - lo2;
    auto g = [&](double a, double b) {
      const double p1 = lo1 + a, p2 = lo2 + b;
      if (p1 + p2 > budget) return kNegInf;
      return f(p1, p2);
    };
    Grid2 z = grid_box(g, span1, span2, 20);
    z.p1 += lo1;
    z.p2 += lo2;
    // Also walk the budget line near the incumbent.
    const double t_lo = std::max(0.0, best.p1 - half);
    const double t_hi = std::min(budget, best.p1 + half);
    const Grid1 edge =
        grid_1d([&](double p1) { return f(p1, budget - p1); }, t_lo, t_hi, 21);
    if (edge.value > z.value) z = {edge.p, budget - edge.p, edge.value};
    if (z.value > best.value) best = z;
    half /= 8.0;
  }
  return best;
}

Grid2 zoom_box(const Objective2& f, double cap1, double cap2, int resolution,
               int levels) {
  Grid2 best = grid_box(f, cap1, cap2, resolution);
  double h1 = cap1 / std::max(resolution, 1), h2 = cap2 / std::max(resolution, 1);
  for (int l = 0; l < levels; ++l) {
    const double lo1 = std::max(0.0, best.p1 - h1);
    const double lo2 = std::max(0.0, best.p2 - h2);
    const double s1 = std::min(cap1, best.p1 + h1) - lo1;
    const double s2 = std::min(cap2, best.p2 + h2) - lo2;
    Grid2 z = grid_box([&](double a, double b) { return f(lo1 + a, lo2 + b); },
                       s1, s2, 20);
    z.p1 += lo1;
    z.p2 += lo2;
    if (z.value > best.value) best = z;
    h1 /= 8.0;
    h2 /= 8.0;
  }
  return best;
}

// ---- backhaul ----------------------------------------------------------------

double finite_difference_gradient(const Network& net, const BackhaulMatching& phi,
                                  std::span<const double> weight, int sat,
                                  int subch, double step) {
  BackhaulMatching w = phi;
  const auto n = static_cast<std::size_t>(sat);
  const auto q = static_cast<std::size_t>(subch);
  const double p = power_of(phi, sat, subch);
  const std::set<int> touched{subch};
  auto u = [&](double x) {
    w.set_power(n, q, x);
    return utility(net, w, weight, touched);
  };
  if (p >= step) return -(u(p + step) - u(p - step)) / (2.0 * step);
  // Second-order one-sided stencil at the zero-power boundary.
  return -(-3.0 * u(p) + 4.0 * u(p + step) - u(p + 2.0 * step)) / (2.0 * step);
}

std::vector<FoundSwap> verify_swap_stability(const Network& net,
                                             const BackhaulMatching& phi,
                                             std::span<const double> weight,
                                             const SwapOracleOptions& opt) {
  const Scenario& s = net.scenario();
  const auto n_r = static_cast<std::size_t>(s.n_r());
  const double pmax = phi.max_power_w();
  const double fd_step = 1e-6 * pmax;
  Evaluator ev{net, weight, opt};
  std::vector<FoundSwap> out;
  const auto& links = phi.links();

  auto report = [&](FoundSwap f, const std::set<int>& touched, double after) {
    const double before = utility(net, phi, weight, touched);
    if (after - before > opt.tolerance * std::max(1.0, std::abs(before))) {
      f.before = before;
      f.after = after;
      out.push_back(f);
    }
  };
  auto donor_of = [&](std::size_t t) {
    std::pair<int, int> best{-1, -1};
    double bw = kNegInf;
    for (const auto& l : phi.links_of(t)) {
      const double w =
          finite_difference_gradient(net, phi, weight, l.sat, l.subch, fd_step);
      if (w > bw) {
        bw = w;
        best = {l.sat, l.subch};
      }
    }
    return best;
  };
  // New link (t, n, q) sharing power with donor (dn, dq), or alone.
  auto add_value = [&](int t, int n, int q, int dn, int dq) {
    BackhaulMatching w = phi;
    w.add({t, n, q, 0.0});
    const double u = std::max(
        0.0, pmax - phi.allocated_power(static_cast<std::size_t>(t)));
    if (dn < 0) return std::pair{ev.one(w, {n, q}, {q}, u), std::set<int>{q}};
    const std::set<int> touched{q, dq};
    return std::pair{
        ev.simplex(w, {n, q}, {dn, dq}, touched, u + power_of(phi, dn, dq)),
        touched};
  };

  // Type 1.
  for (std::size_t t = 0; t < phi.tst_count(); ++t) {
    if (phi.link_count(t) >= n_r) continue;
    const auto donor = donor_of(t);
    for (std::size_t q = 0; q < phi.subch_count(); ++q) {
      for (std::size_t n = 0; n < phi.sat_count(); ++n) {
        const int ti = static_cast<int>(t), ni = static_cast<int>(n),
                  qi = static_cast<int>(q);
        if (!phi.unit_free(n, q) || !gate_ok(s, phi, ti, ni, qi)) continue;
        const auto [after, touched] =
            add_value(ti, ni, qi, donor.first, donor.second);
        report({1, ti, donor.first, donor.second, -1, ni, qi}, touched, after);
      }
    }
  }
  // Type 2.
  for (const auto& l : links) {
    BackhaulMatching w = phi;
    const double after = ev.one(w, {l.sat, l.subch}, {l.subch}, l.power_w);
    report({2, l.tst, l.sat, l.subch, -1, -1, -1}, {l.subch}, after);
  }
  // Type 3, both units held.
  for (std::size_t a = 0; a < links.size(); ++a) {
    for (std::size_t b = a + 1; b < links.size(); ++b) {
      const auto& la = links[a];
      const auto& lb = links[b];
      if (la.tst != lb.tst) continue;
      BackhaulMatching w = phi;
      const std::set<int> touched{la.subch, lb.subch};
      const double budget =
          la.power_w + lb.power_w +
          std::max(0.0, pmax - phi.allocated_power(static_cast<std::size_t>(la.tst)));
      const double after =
          ev.simplex(w, {la.sat, la.subch}, {lb.sat, lb.subch}, touched, budget);
      report({3, la.tst, la.sat, la.subch, lb.tst, lb.sat, lb.subch}, touched,
             after);
    }
  }
  // Type 3, free target unit.
  for (const auto& l : links) {
    const auto t = static_cast<std::size_t>(l.tst);
    if (phi.link_count(t) >= n_r) continue;
    for (std::size_t q = 0; q < phi.subch_count(); ++q) {
      for (std::size_t n = 0; n < phi.sat_count(); ++n) {
        const int ni = static_cast<int>(n), qi = static_cast<int>(q);
        if (!phi.unit_free(n, q) || !gate_ok(s, phi, l.tst, ni, qi)) continue;
        const auto [after, touched] = add_value(l.tst, ni, qi, l.sat, l.subch);
        report({3, l.tst, l.sat, l.subch, l.tst, ni, qi}, touched, after);
      }
    }
  }
  // Types 4 and 5.
  for (std::size_t a = 0; a < links.size(); ++a) {
    for (std::size_t b = a + 1; b < links.size(); ++b) {
      const auto& la = links[a];
      const auto& lb = links[b];
      if (la.tst == lb.tst) continue;
      BackhaulMatching w = phi;
      w.remove(static_cast<std::size_t>(la.sat), static_cast<std::size_t>(la.subch));
      w.remove(static_cast<std::size_t>(lb.sat), static_cast<std::size_t>(lb.subch));
      if (!gate_ok(s, w, la.tst, lb.sat, lb.subch) ||
          !gate_ok(s, w, lb.tst, la.sat, la.subch)) {
        continue;
      }
      const double cap1 =
          la.power_w +
          std::max(0.0, pmax - phi.allocated_power(static_cast<std::size_t>(la.tst)));
      const double cap2 =
          lb.power_w +
          std::max(0.0, pmax - phi.allocated_power(static_cast<std::size_t>(lb.tst)));
      w.add({la.tst, lb.sat, lb.subch, 0.0});
      w.add({lb.tst, la.sat, la.subch, 0.0});
      const std::set<int> touched{la.subch, lb.subch};
      double after = 0.0;
      if (la.subch != lb.subch) {
        // Independent subchannels: each side on its own.
        after = ev.one(w, {lb.sat, lb.subch}, {lb.subch}, cap1) +
                ev.one(w, {la.sat, la.subch}, {la.subch}, cap2);
      } else {
        after = ev.box(w, {lb.sat, lb.subch}, {la.sat, la.subch}, touched, cap1,
                       cap2);
      }
      report({la.subch != lb.subch ? 4 : 5, la.tst, la.sat, la.subch, lb.tst,
              lb.sat, lb.subch},
             touched, after);
    }
  }
  return out;
}

bool verify_colocated_equilibrium(const Network& net,
                                  const BackhaulMatching& phi) {
  const Scenario& s = net.scenario();
  for (std::size_t t = 1; t < s.tst_count(); ++t) {
    const Vec3 a = s.tst_position(0), b = s.tst_position(t);
    const double d = std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
    if (d > 1.0) throw RefusedError("TSTs are not co-located");
  }
  const auto& links = phi.links();
  for (const auto& l : links) {
    if (std::abs(l.power_w - links.front().power_w) > 1e-12) {
      throw RefusedError("link powers differ");
    }
  }
  for (std::size_t a = 0; a < links.size(); ++a) {
    for (std::size_t b = a + 1; b < links.size(); ++b) {
      const auto& la = links[a];
      const auto& lb = links[b];
      if (la.subch != lb.subch || la.tst == lb.tst) continue;
      BackhaulMatching y = phi;
      const auto q = static_cast<std::size_t>(la.subch);
      y.remove(static_cast<std::size_t>(la.sat), q);
      y.remove(static_cast<std::size_t>(lb.sat), q);
      y.add({la.tst, lb.sat, la.subch, la.power_w});
      y.add({lb.tst, la.sat, la.subch, lb.power_w});
      const double r1_before =
          ka_rate(net, phi, static_cast<std::size_t>(la.tst),
                  static_cast<std::size_t>(la.sat), q);
      const double r2_before =
          ka_rate(net, phi, static_cast<std::size_t>(lb.tst),
                  static_cast<std::size_t>(lb.sat), q);
      const double r1_after =
          ka_rate(net, y, static_cast<std::size_t>(lb.tst),
                  static_cast<std::size_t>(la.sat), q);
      const double r2_after =
          ka_rate(net, y, static_cast<std::size_t>(la.tst),
                  static_cast<std::size_t>(lb.sat), q);
      if (r1_after > r1_before && r2_after > r2_before) return false;
    }
  }
  return true;
}

SwapCounts enumerate_worst_case(int tsts, int sats, int subch, int n_r) {
  SwapCounts c;
  const long long units = static_cast<long long>(sats) * subch;
  // Type 1/2: every TST against every unit.
  for (int t = 0; t < tsts; ++t) {
    for (long long u = 0; u < units; ++u) ++c.n12;
  }
  // Type 3: unordered pairs among each TST's N_r links.
  for (int t = 0; t < tsts; ++t) {
    for (int a = 0; a < n_r; ++a) {
      for (int b = a + 1; b < n_r; ++b) ++c.n3;
    }
  }
  // Types 4/5: each link of TST i pairs with every unit outside the first i
  // TSTs' holdings, or with every link slot of the later TSTs, whichever
  // set is larger; pairs are counted once by charging them to the earlier
  // TST.
  for (int i = 1; i < tsts; ++i) {
    const long long free_units = units - static_cast<long long>(i) * n_r;
    const long long later_slots = static_cast<long long>(tsts - i) * n_r;
    const long long partners = std::max(free_units, later_slots);
    for (int l = 0; l < n_r; ++l) {
      for (long long p = 0; p < partners; ++p) ++c.n45;
    }
  }
  return c;
}

}  // namespace leo::oracle
