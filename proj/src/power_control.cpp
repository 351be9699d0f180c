#include "leo/power_control.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace leo {
namespace {

// Sample points on [lo, hi]: uniform plus geometric clustering at lo, where
// the objective curvature of a log-rate is largest.
std::vector<double> sample_points(double lo, double hi) {
  std::vector<double> x{lo, hi};
  const double w = hi - lo;
  constexpr int kUniform = 64;
  constexpr int kGeometric = 48;
  for (int i = 1; i < kUniform; ++i) x.push_back(lo + w * i / kUniform);
  for (int i = 0; i < kGeometric; ++i) {
    const double e = -12.0 + 12.0 * i / kGeometric;
    x.push_back(lo + w * std::pow(10.0, e));
  }
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

// Local maximizers of a smooth f on [lo, hi] given its derivative: sign
// changes of df bracketed on a sample grid and refined by bisection, the
// boundaries, and a golden-section polish around the best sample.
template <class F, class D>
std::vector<double> maximizers_1d(F f, D df, double lo, double hi) {
  if (!(hi > lo)) return {lo};
  const auto x = sample_points(lo, hi);
  std::vector<double> d(x.size()), v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    d[i] = df(x[i]);
    v[i] = f(x[i]);
  }
  std::vector<double> out{lo, hi};
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (d[i] > 0.0 && d[i + 1] < 0.0) {
      double a = x[i], b = x[i + 1];
      for (int it = 0; it < 100 && b - a > 1e-15 * (1.0 + std::abs(b)); ++it) {
        const double mid = 0.5 * (a + b);
        (df(mid) > 0.0 ? a : b) = mid;
      }
      out.push_back(0.5 * (a + b));
    }
  }
  const auto best = static_cast<std::size_t>(
      std::max_element(v.begin(), v.end()) - v.begin());
  double a = x[best == 0 ? 0 : best - 1];
  double b = x[std::min(best + 1, x.size() - 1)];
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), e = a + g * (b - a);
  double fc = f(c), fe = f(e);
  for (int it = 0; it < 100 && b - a > 1e-15 * (1.0 + std::abs(b)); ++it) {
    if (fc < fe) {
      a = c;
      c = e;
      fc = fe;
      e = a + g * (b - a);
      fe = f(e);
    } else {
      b = e;
      e = c;
      fe = fc;
      c = b - g * (b - a);
      fc = f(c);
    }
  }
  out.push_back(x[best]);
  out.push_back(0.5 * (a + b));
  return out;
}

template <class F>
ScalarResult best_of(F f, const std::vector<double>& pts) {
  ScalarResult r{pts.front(), f(pts.front())};
  for (double p : pts) {
    const double v = f(p);
    if (v > r.value) r = {p, v};
  }
  return r;
}

struct Pair {
  double p1, p2;
};

// Concave-convex model of one subchannel utility in two of its powers.
class DcProblem {
 public:
  DcProblem(const SubchannelModel& m, std::size_t i1, std::size_t i2)
      : m_(m), i1_(i1), i2_(i2) {}

  double value(Pair p) {
    set(p);
    return m_.utility();
  }

  // Gradient of the concave part g1 = sum w_k log2(noise + all received).
  std::array<double, 2> grad_g1(Pair p) {
    set(p);
    std::array<double, 2> g{0.0, 0.0};
    for (std::size_t k = 0; k < m_.size(); ++k) {
      if (m_.weight[k] == 0.0) continue;
      const double t = total(k);
      g[0] += m_.weight[k] * coef(k, i1_) / t;
      g[1] += m_.weight[k] * coef(k, i2_) / t;
    }
    g[0] /= std::numbers::ln2;
    g[1] /= std::numbers::ln2;
    return g;
  }

  // Gradient of g2 = sum w_k log2(noise + interference).
  std::array<double, 2> grad_g2(Pair p) {
    set(p);
    std::array<double, 2> g{0.0, 0.0};
    for (std::size_t k = 0; k < m_.size(); ++k) {
      if (m_.weight[k] == 0.0) continue;
      const double u = total(k) - m_.power[k] * m_.own[k];
      if (k != i1_) g[0] += m_.weight[k] * m_.c(k, i1_) / u;
      if (k != i2_) g[1] += m_.weight[k] * m_.c(k, i2_) / u;
    }
    g[0] /= std::numbers::ln2;
    g[1] /= std::numbers::ln2;
    return g;
  }

  double g1(Pair p) {
    set(p);
    double v = 0.0;
    for (std::size_t k = 0; k < m_.size(); ++k) {
      if (m_.weight[k] != 0.0) v += m_.weight[k] * std::log2(total(k));
    }
    return v;
  }

 private:
  void set(Pair p) {
    m_.power[i1_] = p.p1;
    m_.power[i2_] = p.p2;
  }
  double coef(std::size_t k, std::size_t j) const {
    return k == j ? m_.own[k] : m_.c(k, j);
  }
  double total(std::size_t k) const {
    double t = m_.noise;
    for (std::size_t j = 0; j < m_.size(); ++j) t += m_.power[j] * coef(k, j);
    return t;
  }

  SubchannelModel m_;
  std::size_t i1_, i2_;
};

double dist2(Pair a, Pair b) {
  return (a.p1 - b.p1) * (a.p1 - b.p1) + (a.p2 - b.p2) * (a.p2 - b.p2);
}

Pair project_segment(Pair x, Pair a, Pair b) {
  const double dx = b.p1 - a.p1, dy = b.p2 - a.p2;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((x.p1 - a.p1) * dx + (x.p2 - a.p2) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return {a.p1 + t * dx, a.p2 + t * dy};
}

struct Feasible {
  bool simplex;
  double cap1, cap2;  // budget in both for the simplex

  Pair project(Pair x) const {
    if (!simplex) {
      return {std::clamp(x.p1, 0.0, cap1), std::clamp(x.p2, 0.0, cap2)};
    }
    const double b = cap1;
    if (x.p1 >= 0.0 && x.p2 >= 0.0 && x.p1 + x.p2 <= b) return x;
    const std::array<Pair, 3> c{project_segment(x, {0, 0}, {b, 0}),
                                project_segment(x, {0, 0}, {0, b}),
                                project_segment(x, {b, 0}, {0, b})};
    Pair best = c[0];
    for (const auto& p : c) {
      if (dist2(p, x) < dist2(best, x)) best = p;
    }
    return best;
  }
  double scale() const { return std::max(cap1, cap2); }
};

// Maximizes g1(p) - <lin, p> over the feasible set by projected gradient
// ascent with backtracking.
Pair solve_concave(DcProblem& prob, const Feasible& fs, Pair x,
                   std::array<double, 2> lin) {
  auto phi = [&](Pair p) { return prob.g1(p) - lin[0] * p.p1 - lin[1] * p.p2; };
  double fx = phi(x);
  double step = -1.0;
  for (int it = 0; it < 300; ++it) {
    auto g = prob.grad_g1(x);
    g[0] -= lin[0];
    g[1] -= lin[1];
    const double gn = std::hypot(g[0], g[1]);
    if (gn == 0.0) break;
    if (step < 0.0) step = fs.scale() / gn;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Pair y = fs.project({x.p1 + step * g[0], x.p2 + step * g[1]});
      const double fy = phi(y);
      const double lin_gain = g[0] * (y.p1 - x.p1) + g[1] * (y.p2 - x.p2);
      if (fy >= fx + 1e-4 * lin_gain && dist2(x, y) > 0.0) {
        const bool tiny = dist2(x, y) < 1e-26 * fs.scale() * fs.scale();
        x = y;
        fx = fy;
        step *= 2.0;
        moved = !tiny;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return x;
}

PairResult run_dc(const SubchannelModel& model, std::size_t i1, std::size_t i2,
                  const Feasible& fs, const DcOptions& opt) {
  DcProblem prob(model, i1, i2);
  std::vector<Pair> starts;
  if (fs.simplex) {
    starts = {{fs.cap1, 0.0}, {0.0, fs.cap1}, {fs.cap1 / 2, fs.cap1 / 2}};
  } else {
    starts = {{fs.cap1, 0.0}, {0.0, fs.cap2}, {fs.cap1 / 2, fs.cap2 / 2}};
  }
  PairResult best{0.0, 0.0, prob.value({0.0, 0.0}), true};
  for (const Pair& s : starts) {
    Pair x = s;
    double fx = prob.value(x);
    bool converged = false;
    for (int it = 0; it < opt.max_iterations; ++it) {
      const Pair y = solve_concave(prob, fs, x, prob.grad_g2(x));
      const double fy = prob.value(y);
      if (fy > fx) {
        const double gain = fy - fx;
        x = y;
        fx = fy;
        if (gain < opt.tolerance) {
          converged = true;
          break;
        }
      } else {
        converged = true;
        break;
      }
    }
    if (fx > best.value) best = {x.p1, x.p2, fx, converged};
  }

  // Edges of the feasible set as one-dimensional problems.
  auto along = [&](auto point) {
    auto f = [&](double t) { return prob.value(point(t)); };
    auto df = [&](double t) {
      const double h = 1e-7 * fs.scale();
      return f(std::min(t + h, 1.0 * fs.scale())) - f(std::max(t - h, 0.0));
    };
    return best_of(f, maximizers_1d(f, df, 0.0, fs.scale()));
  };
  auto consider = [&](auto point) {
    const ScalarResult r = along(point);
    const Pair p = point(r.p);
    if (r.value > best.value) best = {p.p1, p.p2, r.value, best.converged};
  };
  if (fs.simplex) {
    const double b = fs.cap1;
    consider([&](double t) { return Pair{t, 0.0}; });
    consider([&](double t) { return Pair{0.0, t}; });
    consider([&](double t) { return Pair{t, b - t}; });
  } else {
    const double s = fs.scale();
    consider([&](double t) { return Pair{t * fs.cap1 / s, 0.0}; });
    consider([&](double t) { return Pair{0.0, t * fs.cap2 / s}; });
    consider([&](double t) { return Pair{t * fs.cap1 / s, fs.cap2}; });
    consider([&](double t) { return Pair{fs.cap1, t * fs.cap2 / s}; });
  }
  return best;
}

}  // namespace

std::vector<double> local_maximizers(const SubchannelModel& model,
                                     std::size_t i, double lo, double hi) {
  SubchannelModel m = model;
  auto f = [&](double p) {
    m.power[i] = p;
    return m.utility();
  };
  auto df = [&](double p) {
    m.power[i] = p;
    return m.gradient(i);
  };
  return maximizers_1d(f, df, lo, hi);
}

ScalarResult solve_pc3(const SubchannelModel& model, std::size_t i, double lo,
                       double hi) {
  SubchannelModel m = model;
  auto f = [&](double p) {
    m.power[i] = p;
    return m.utility();
  };
  return best_of(f, local_maximizers(model, i, lo, hi));
}

PairResult solve_pc1(const SubchannelModel& a, std::size_t ia,
                     const SubchannelModel& b, std::size_t ib, double budget) {
  SubchannelModel ma = a, mb = b;
  auto fa = [&](double p) {
    ma.power[ia] = p;
    return ma.utility();
  };
  auto fb = [&](double p) {
    mb.power[ib] = p;
    return mb.utility();
  };
  if (!(budget > 0.0)) return {0.0, 0.0, fa(0.0) + fb(0.0), true};

  const auto ca = local_maximizers(a, ia, 0.0, budget);
  const auto cb = local_maximizers(b, ib, 0.0, budget);
  const ScalarResult ra = best_of(fa, ca);
  const ScalarResult rb = best_of(fb, cb);
  if (ra.p + rb.p <= budget) return {ra.p, rb.p, ra.value + rb.value, true};

  PairResult best{0.0, 0.0, fa(0.0) + fb(0.0), true};
  auto keep = [&](double p1, double p2) {
    const double v = fa(p1) + fb(p2);
    if (v > best.value) best = {p1, p2, v, true};
  };
  for (double p : ca) {
    keep(p, solve_pc3(b, ib, 0.0, budget - p).p);
  }
  for (double p : cb) {
    keep(solve_pc3(a, ia, 0.0, budget - p).p, p);
  }
  // The budget line p2 = budget - p1.
  auto g = [&](double p) { return fa(p) + fb(budget - p); };
  auto dg = [&](double p) {
    ma.power[ia] = p;
    mb.power[ib] = budget - p;
    return ma.gradient(ia) - mb.gradient(ib);
  };
  const ScalarResult r = best_of(g, maximizers_1d(g, dg, 0.0, budget));
  keep(r.p, budget - r.p);
  return best;
}

PairResult solve_pc2(const SubchannelModel& model, std::size_t i1,
                     std::size_t i2, double budget, const DcOptions& opt) {
  if (!(budget > 0.0)) {
    SubchannelModel m = model;
    m.power[i1] = m.power[i2] = 0.0;
    return {0.0, 0.0, m.utility(), true};
  }
  return run_dc(model, i1, i2, {true, budget, budget}, opt);
}

PairResult solve_pc2_box(const SubchannelModel& model, std::size_t i1,
                         std::size_t i2, double cap1, double cap2,
                         const DcOptions& opt) {
  cap1 = std::max(cap1, 0.0);
  cap2 = std::max(cap2, 0.0);
  if (cap1 == 0.0 && cap2 == 0.0) {
    SubchannelModel m = model;
    m.power[i1] = m.power[i2] = 0.0;
    return {0.0, 0.0, m.utility(), true};
  }
  if (cap1 == 0.0 || cap2 == 0.0) {
    SubchannelModel m = model;
    m.power[i1] = m.power[i2] = 0.0;
    const std::size_t i = cap1 == 0.0 ? i2 : i1;
    const ScalarResult r = solve_pc3(m, i, 0.0, std::max(cap1, cap2));
    return cap1 == 0.0 ? PairResult{0.0, r.p, r.value, true}
                       : PairResult{r.p, 0.0, r.value, true};
  }
  return run_dc(model, i1, i2, {false, cap1, cap2}, opt);
}

}  // namespace leo
