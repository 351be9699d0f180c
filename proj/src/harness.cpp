#include "leo/harness.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace leo {
namespace {

using nlohmann::json;

// ---- key -> line index ---------------------------------------------------

// Dotted key paths of a JSON text mapped to the line of their first
// appearance. Only objects nested in objects are named; array elements
// inherit the array's path.
std::map<std::string, int> key_lines(const std::string& text) {
  std::map<std::string, int> out;
  std::vector<std::string> stack;
  std::string last_key;
  int line = 1;
  auto path_of = [&](const std::string& key) {
    std::string p;
    for (const auto& s : stack) {
      if (s.empty()) continue;
      p += s + ".";
    }
    return p + key;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
    } else if (c == '"') {
      std::string s;
      const int start_line = line;
      for (++i; i < text.size() && text[i] != '"'; ++i) {
        if (text[i] == '\\' && i + 1 < text.size()) {
          s += text[++i];
          continue;
        }
        if (text[i] == '\n') ++line;
        s += text[i];
      }
      std::size_t k = i + 1;
      while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) {
        ++k;
      }
      if (k < text.size() && text[k] == ':') {
        last_key = s;
        out.emplace(path_of(s), start_line);
      }
    } else if (c == '{' || c == '[') {
      stack.push_back(last_key);
      last_key.clear();
    } else if (c == '}' || c == ']') {
      if (!stack.empty()) stack.pop_back();
      last_key.clear();
    } else if (c == ',') {
      last_key.clear();
    }
  }
  return out;
}

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

class Section {
 public:
  Section(const json& obj, std::string path,
          const std::map<std::string, int>& lines)
      : obj_(obj), path_(std::move(path)), lines_(lines) {
    if (!obj_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] void fail(const std::string& key_path,
                         const std::string& what) const {
    const auto it = lines_.find(key_path);
    const int line = it == lines_.end() ? 1 : it->second;
    throw ConfigError("line " + std::to_string(line) + ": '" + key_path +
                      "': " + what);
  }

  std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(child_path(key), "expected a number");
      out = v->get<double>();
    }
  }
  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(child_path(key), "expected an integer");
      out = v->get<int>();
    }
  }
  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(child_path(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  bool string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) fail(child_path(key), "expected a string");
      out = v->get<std::string>();
      return true;
    }
    return false;
  }
  template <typename F>
  void section(const std::string& key, F&& body) {
    if (const json* v = find(key)) {
      Section sub(*v, child_path(key), lines_);
      body(sub);
      sub.finish();
    }
  }
  void finish() const {
    for (const auto& [k, v] : obj_.items()) {
      if (!seen_.count(k)) fail(child_path(k), "unknown key");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  const std::map<std::string, int>& lines_;
  std::set<std::string> seen_;
};

// NaN entries (metrics undefined for a seed) are left out.
std::vector<double> defined(const std::vector<double>& x) {
  std::vector<double> out;
  for (double v : x) {
    if (!std::isnan(v)) out.push_back(v);
  }
  return out;
}

double mean_of(const std::vector<double>& raw) {
  const auto x = defined(raw);
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

// Sample standard deviation; 0 for a single value.
double stddev_of(const std::vector<double>& raw) {
  const auto x = defined(raw);
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (x.size() < 2) return 0.0;
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

json point(const Point2& p) { return json::array({p.x, p.y}); }

std::string kind_name(CellKind k) {
  switch (k) {
    case CellKind::kMacro: return "macro";
    case CellKind::kTraditional: return "tsc";
    case CellKind::kLeo: return "lsc";
  }
  return "?";
}

}  // namespace

// ---- axes and profiles -------------------------------------------------------

Axis parse_axis(const std::string& name) {
  if (name == "none") return Axis::kNone;
  if (name == "user_density") return Axis::kUserDensity;
  if (name == "n_satellites") return Axis::kNSatellites;
  if (name == "projected_area") return Axis::kProjectedArea;
  if (name == "traffic_load") return Axis::kTrafficLoad;
  if (name == "n_r") return Axis::kNr;
  throw ConfigError("unknown sweep axis '" + name + "'");
}

std::string axis_name(Axis a) {
  switch (a) {
    case Axis::kNone: return "none";
    case Axis::kUserDensity: return "user_density";
    case Axis::kNSatellites: return "n_satellites";
    case Axis::kProjectedArea: return "projected_area";
    case Axis::kTrafficLoad: return "traffic_load";
    case Axis::kNr: return "n_r";
  }
  return "?";
}

std::vector<std::uint64_t> RunConfig::seeds() const {
  std::vector<std::uint64_t> s;
  for (int i = 0; i < seed_count; ++i) s.push_back(seed_base + static_cast<std::uint64_t>(i));
  return s;
}

void RunConfig::validate() const {
  radio.validate();
  lits.prefs.validate();
  lits.dual.validate();
  if (seed_count < 1) throw ConfigError("seeds.count must be at least 1");
  const auto& s = scenario;
  if (s.n_tsc < 0 || s.n_lsc < 0 || s.n_users < 0 || s.n_satellites < 0 ||
      s.k_subch < 1 || s.q_subch < 1 || s.n_r < 1 || !(s.macro_radius_m > 0.0) ||
      !(s.small_radius_m > 0.0) || !(s.projected_area_km2 > 0.0) ||
      !(s.data_bytes_per_s >= 0.0)) {
    throw ConfigError("invalid scenario parameters");
  }
  if (axis != Axis::kNone && values.empty()) {
    throw ConfigError("sweep axis given without values");
  }
}

RunConfig desk_profile() {
  RunConfig c;
  c.profile = "desk";
  c.scenario.n_tsc = 5;
  c.scenario.n_lsc = 5;
  c.scenario.n_users = 40;
  c.scenario.n_satellites = 4;
  c.scenario.k_subch = 10;
  c.scenario.q_subch = 10;
  c.scenario.data_bytes_per_s = 50000.0;
  c.seed_count = 20;
  return c;
}

RunConfig paper_profile() {
  RunConfig c;
  c.profile = "paper";
  c.seed_count = 5;
  return c;
}

RunConfig profile_config(const std::string& name) {
  if (name == "desk") return desk_profile();
  if (name == "paper") return paper_profile();
  throw ConfigError("unknown profile '" + name + "'");
}

// ---- parsing -------------------------------------------------------------

RunConfig parse_config(const std::string& text, const RunConfig& base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("line " + std::to_string(line_of_byte(text, e.byte)) +
                      ": malformed JSON");
  }
  const auto lines = key_lines(text);
  Section root(doc, "", lines);
  RunConfig c = base;
  std::string profile;
  if (root.string("profile", profile)) {
    try {
      c = profile_config(profile);
    } catch (const ConfigError& e) {
      root.fail("profile", e.what());
    }
  }
  root.section("scenario", [&](Section& s) {
    auto& x = c.scenario;
    s.number("macro_radius_m", x.macro_radius_m);
    s.number("small_radius_m", x.small_radius_m);
    s.integer("n_tsc", x.n_tsc);
    s.integer("n_lsc", x.n_lsc);
    s.integer("n_users", x.n_users);
    s.integer("n_satellites", x.n_satellites);
    s.number("min_altitude_m", x.min_altitude_m);
    s.number("max_altitude_m", x.max_altitude_m);
    s.number("projected_area_km2", x.projected_area_km2);
    s.number("theta_th_deg", x.theta_th_deg);
    s.number("min_elevation_deg", x.min_elevation_deg);
    s.integer("n_r", x.n_r);
    s.integer("k_subch", x.k_subch);
    s.integer("q_subch", x.q_subch);
    s.number("data_bytes_per_s", x.data_bytes_per_s);
    s.number("macro_backhaul_bps", x.macro_backhaul_bps);
    s.number("tsc_backhaul_min_bps", x.tsc_backhaul_min_bps);
    s.number("tsc_backhaul_max_bps", x.tsc_backhaul_max_bps);
  });
  root.section("radio", [&](Section& s) {
    auto& r = c.radio;
    s.number("user_power_w", r.user_power_w);
    s.number("noise_density_dbm_hz", r.noise_density_dbm_hz);
    s.number("bw_c_hz", r.bw_c_hz);
    s.number("bw_ka_hz", r.bw_ka_hz);
    s.number("c_band_ghz", r.c_band_ghz);
    s.number("ka_band_ghz", r.ka_band_ghz);
    std::string pl;
    if (s.string("path_loss", pl)) {
      if (pl == "umi") {
        r.path_loss = PathLossModel::kUmi;
      } else if (pl == "exponent") {
        r.path_loss = PathLossModel::kExponent;
      } else {
        s.fail(s.child_path("path_loss"), "expected \"umi\" or \"exponent\"");
      }
    }
    s.number("alpha", r.alpha);
    s.number("shadowing_db", r.shadowing_db);
    s.number("rician_k", r.rician_k);
    s.number("g_max_dbi", r.g_max_dbi);
    s.number("antenna_diameter_m", r.antenna_diameter_m);
    s.number("ka_noise_figure_db", r.ka_noise_figure_db);
    s.number("sat_g_over_t_dbk", r.sat_g_over_t_dbk);
    s.number("tst_max_power_w", r.tst_max_power_w);
    s.number("min_distance_m", r.min_distance_m);
  });
  root.section("preferences", [&](Section& s) {
    s.number("rho1", c.lits.prefs.rho1);
    s.number("rho2", c.lits.prefs.rho2);
    s.number("mu", c.lits.prefs.mu);
  });
  root.section("dual", [&](Section& s) {
    s.number("delta0", c.lits.dual.delta0);
    s.number("gamma", c.lits.dual.gamma);
    s.number("epsilon", c.lits.dual.epsilon);
    s.number("lambda0", c.lits.dual.lambda0);
    s.integer("max_iterations", c.lits.dual.max_iterations);
  });
  root.section("smpc", [&](Section& s) { s.boolean("prune", c.lits.prune); });
  root.boolean("complete_access", c.lits.complete_access);
  root.section("seeds", [&](Section& s) {
    if (const json* v = s.find("base")) {
      if (!v->is_number_unsigned()) {
        s.fail(s.child_path("base"), "expected a non-negative integer");
      }
      c.seed_base = v->get<std::uint64_t>();
    }
    s.integer("count", c.seed_count);
  });
  std::string scheme;
  if (root.string("scheme", scheme)) {
    try {
      c.scheme = parse_scheme(scheme);
    } catch (const ConfigError& e) {
      root.fail("scheme", e.what());
    }
  }
  root.section("sweep", [&](Section& s) {
    std::string axis;
    if (s.string("axis", axis)) {
      try {
        c.axis = parse_axis(axis);
      } catch (const ConfigError& e) {
        s.fail(s.child_path("axis"), e.what());
      }
    }
    if (const json* v = s.find("values")) {
      if (!v->is_array()) s.fail(s.child_path("values"), "expected an array");
      c.values.clear();
      for (const auto& x : *v) {
        if (!x.is_number()) s.fail(s.child_path("values"), "expected numbers");
        c.values.push_back(x.get<double>());
      }
    }
  });
  root.finish();
  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

json config_to_json(const RunConfig& c) {
  const auto& x = c.scenario;
  const auto& r = c.radio;
  json j;
  j["profile"] = c.profile;
  j["scenario"] = {
      {"macro_radius_m", x.macro_radius_m},
      {"small_radius_m", x.small_radius_m},
      {"n_tsc", x.n_tsc},
      {"n_lsc", x.n_lsc},
      {"n_users", x.n_users},
      {"n_satellites", x.n_satellites},
      {"min_altitude_m", x.min_altitude_m},
      {"max_altitude_m", x.max_altitude_m},
      {"projected_area_km2", x.projected_area_km2},
      {"theta_th_deg", x.theta_th_deg},
      {"min_elevation_deg", x.min_elevation_deg},
      {"n_r", x.n_r},
      {"k_subch", x.k_subch},
      {"q_subch", x.q_subch},
      {"data_bytes_per_s", x.data_bytes_per_s},
      {"macro_backhaul_bps", x.macro_backhaul_bps},
      {"tsc_backhaul_min_bps", x.tsc_backhaul_min_bps},
      {"tsc_backhaul_max_bps", x.tsc_backhaul_max_bps},
  };
  j["radio"] = {
      {"user_power_w", r.user_power_w},
      {"noise_density_dbm_hz", r.noise_density_dbm_hz},
      {"bw_c_hz", r.bw_c_hz},
      {"bw_ka_hz", r.bw_ka_hz},
      {"c_band_ghz", r.c_band_ghz},
      {"ka_band_ghz", r.ka_band_ghz},
      {"path_loss", r.path_loss == PathLossModel::kUmi ? "umi" : "exponent"},
      {"alpha", r.alpha},
      {"shadowing_db", r.shadowing_db},
      {"rician_k", r.rician_k},
      {"g_max_dbi", r.g_max_dbi},
      {"antenna_diameter_m", r.antenna_diameter_m},
      {"ka_noise_figure_db", r.ka_noise_figure_db},
      {"sat_g_over_t_dbk", r.sat_g_over_t_dbk},
      {"tst_max_power_w", r.tst_max_power_w},
      {"min_distance_m", r.min_distance_m},
  };
  j["preferences"] = {{"rho1", c.lits.prefs.rho1},
                      {"rho2", c.lits.prefs.rho2},
                      {"mu", c.lits.prefs.mu}};
  j["dual"] = {{"delta0", c.lits.dual.delta0},
               {"gamma", c.lits.dual.gamma},
               {"epsilon", c.lits.dual.epsilon},
               {"lambda0", c.lits.dual.lambda0},
               {"max_iterations", c.lits.dual.max_iterations}};
  j["smpc"] = {{"prune", c.lits.prune}};
  j["complete_access"] = c.lits.complete_access;
  j["seeds"] = {{"base", c.seed_base}, {"count", c.seed_count}};
  j["scheme"] = scheme_name(c.scheme);
  j["sweep"] = {{"axis", axis_name(c.axis)}, {"values", c.values}};
  return j;
}

std::string config_hash(const RunConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_json(c).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig with_axis(RunConfig c, Axis axis, double value) {
  auto as_int = [&](double v) {
    if (v != std::floor(v) || v < 0.0) {
      throw ConfigError("axis " + axis_name(axis) + " needs integer values");
    }
    return static_cast<int>(v);
  };
  switch (axis) {
    case Axis::kNone: break;
    case Axis::kUserDensity: c.scenario.n_users = as_int(value); break;
    case Axis::kNSatellites: c.scenario.n_satellites = as_int(value); break;
    case Axis::kProjectedArea: c.scenario.projected_area_km2 = value; break;
    case Axis::kTrafficLoad: c.scenario.data_bytes_per_s = value; break;
    case Axis::kNr: c.scenario.n_r = as_int(value); break;
  }
  return c;
}

Network build_network(const RunConfig& c, std::uint64_t seed) {
  Scenario s = generate_scenario(c.scenario, seed);
  ChannelRealization real = sample_realization(s, c.radio, seed);
  return Network(std::move(s), c.radio, std::move(real));
}

double constellation_capacity_bps(const Network& net, const SmpcOptions& opt) {
  const std::vector<double> ones(net.scenario().tst_count(), 1.0);
  const BackhaulMatching phi = smpc(net, ones, opt).phi;
  double c = 0.0;
  for (double x : backhaul_capacity(net, phi).raw_bps) c += x;
  return c;
}

// ---- sweeps --------------------------------------------------------------

ResultRow summarize(const Network& net, const RunResult& r, double axis_value,
                    std::uint64_t seed, double backhaul_bps) {
  const Scenario& s = net.scenario();
  ResultRow row;
  row.axis_value = axis_value;
  row.seed = seed;
  row.sum_rate_mbps = r.sum_rate_bps * 1e-6;
  row.accessed_users = r.accessed;
  row.total_backhaul_mbps = backhaul_bps * 1e-6;
  row.lsc_user_fraction = r.lsc_user_fraction(s);
  row.mean_tsc_delay_ms = r.mean_delay_s(s, false) * 1e3;
  row.mean_lsc_delay_ms = r.mean_delay_s(s, true) * 1e3;
  row.iterations = r.iterations;
  return row;
}

namespace {

struct Task {
  double value;
  std::uint64_t seed;
};

std::vector<Task> tasks_of(const RunConfig& c) {
  std::vector<double> values = c.values;
  if (c.axis == Axis::kNone || values.empty()) values = {0.0};
  std::vector<Task> t;
  for (double v : values) {
    for (std::uint64_t s : c.seeds()) t.push_back({v, s});
  }
  return t;
}

ResultRow run_task(const RunConfig& c, const Task& t) {
  const RunConfig cfg = with_axis(c, c.axis, t.value);
  const Network net = build_network(cfg, t.seed);
  const RunResult r = run_baseline(cfg.scheme, net, cfg.lits);
  SmpcOptions opt;
  opt.prefs = cfg.lits.prefs;
  opt.prune = cfg.lits.prune;
  return summarize(net, r, t.value, t.seed, constellation_capacity_bps(net, opt));
}

}  // namespace

std::vector<ResultRow> sweep_serial(const RunConfig& c) {
  c.validate();
  std::vector<ResultRow> rows;
  for (const Task& t : tasks_of(c)) rows.push_back(run_task(c, t));
  return rows;
}

int default_workers() {
  if (const char* env = std::getenv("LEO_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

std::vector<ResultRow> sweep_parallel(const RunConfig& c, int workers) {
  c.validate();
  const std::vector<Task> tasks = tasks_of(c);
  std::vector<ResultRow> rows(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  const int n = static_cast<int>(tasks.size());
  const int threads = workers > 0 ? workers : default_workers();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    try {
      rows[static_cast<std::size_t>(i)] = run_task(c, tasks[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

const std::vector<std::string>& metric_columns() {
  static const std::vector<std::string> cols = {
      "sum_rate_mbps",     "accessed_users",    "total_backhaul_mbps",
      "lsc_user_fraction", "mean_tsc_delay_ms", "mean_lsc_delay_ms",
      "iterations"};
  return cols;
}

std::vector<double> metric_values(const ResultRow& r) {
  return {r.sum_rate_mbps,     static_cast<double>(r.accessed_users),
          r.total_backhaul_mbps, r.lsc_user_fraction,
          r.mean_tsc_delay_ms, r.mean_lsc_delay_ms,
          static_cast<double>(r.iterations)};
}

std::vector<AggregateRow> aggregate(const std::vector<ResultRow>& rows) {
  std::vector<double> order;
  std::map<double, std::vector<std::vector<double>>> groups;
  for (const auto& r : rows) {
    auto [it, fresh] = groups.try_emplace(r.axis_value);
    if (fresh) order.push_back(r.axis_value);
    it->second.push_back(metric_values(r));
  }
  std::vector<AggregateRow> out;
  for (double v : order) {
    const auto& g = groups[v];
    AggregateRow a;
    a.axis_value = v;
    a.count = static_cast<int>(g.size());
    for (std::size_t k = 0; k < metric_columns().size(); ++k) {
      std::vector<double> col;
      for (const auto& m : g) col.push_back(m[k]);
      a.mean.push_back(mean_of(col));
      a.stddev.push_back(stddev_of(col));
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_rows_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "axis_value,seed";
  for (const auto& c : metric_columns()) os << ',' << c;
  os << '\n';
  for (const auto& r : rows) {
    os << format_number(r.axis_value) << ',' << r.seed;
    for (double v : metric_values(r)) os << ',' << format_number(v);
    os << '\n';
  }
}

void write_aggregate_csv(std::ostream& os,
                         const std::vector<AggregateRow>& rows) {
  os << "axis_value,count";
  for (const auto& c : metric_columns()) os << ',' << c << "_mean," << c << "_std";
  os << '\n';
  for (const auto& a : rows) {
    os << format_number(a.axis_value) << ',' << a.count;
    for (std::size_t k = 0; k < a.mean.size(); ++k) {
      os << ',' << format_number(a.mean[k]) << ',' << format_number(a.stddev[k]);
    }
    os << '\n';
  }
}

void write_history_csv(std::ostream& os, const std::vector<IterationRecord>& h) {
  os << "t,delta,objective,sum_rate_mbps,accessed_users,max_violation_mbps\n";
  for (const auto& r : h) {
    os << r.t << ',' << format_number(r.delta) << ',' << format_number(r.objective)
       << ',' << format_number(r.sum_rate_mbps) << ',' << r.accessed_users << ','
       << format_number(r.max_violation_mbps) << '\n';
  }
}

// ---- JSON ----------------------------------------------------------------

json scenario_to_json(const Scenario& s) {
  json j;
  j["cells"] = json::array();
  for (const auto& c : s.cells()) {
    j["cells"].push_back({{"kind", kind_name(c.kind)},
                          {"center_m", point(c.center)},
                          {"radius_m", c.radius_m},
                          {"fixed_backhaul_bps", c.fixed_backhaul_bps}});
  }
  j["users"] = json::array();
  for (const auto& u : s.users()) {
    j["users"].push_back({{"position_m", point(u.position)},
                          {"data_bytes_per_s", u.data_bytes_per_s}});
  }
  j["satellites"] = json::array();
  for (const auto& sat : s.satellites()) {
    j["satellites"].push_back(
        {{"position_m", {sat.position_m.x, sat.position_m.y, sat.position_m.z}},
         {"altitude_m", sat.altitude_m}});
  }
  json elev = json::array();
  for (std::size_t t = 0; t < s.tst_count(); ++t) {
    json row = json::array();
    for (std::size_t n = 0; n < s.satellite_count(); ++n) {
      row.push_back({{"elevation_deg", s.elevation()(t, n)},
                     {"visible", s.visible(t, n)}});
    }
    elev.push_back(row);
  }
  j["tst_view"] = elev;
  json cov = json::array();
  for (std::size_t m = 0; m < s.cell_count(); ++m) {
    json row = json::array();
    for (std::size_t u = 0; u < s.user_count(); ++u) row.push_back(s.covers(m, u) ? 1 : 0);
    cov.push_back(row);
  }
  j["coverage"] = cov;
  j["n_r"] = s.n_r();
  j["k_subch"] = s.k_subch();
  j["q_subch"] = s.q_subch();
  j["theta_th_deg"] = s.theta_th_deg();
  j["min_elevation_deg"] = s.min_elevation_deg();
  return j;
}

json backhaul_to_json(const BackhaulMatching& b, const BackhaulCapacity& cap) {
  json j;
  j["links"] = json::array();
  for (const auto& l : b.links()) {
    j["links"].push_back({{"tst", l.tst},
                          {"satellite", l.sat},
                          {"subchannel", l.subch},
                          {"power_w", l.power_w}});
  }
  j["link_capacity_bps"] = cap.link_bps;
  j["load_bits"] = cap.load_bits;
  j["equivalent_capacity_bps"] = cap.equivalent_bps;
  j["raw_capacity_bps"] = cap.raw_bps;
  j["delay_s"] = cap.delay_s;
  j["traffic_bits"] = cap.traffic_bits;
  return j;
}

json result_to_json(const Network& net, const RunResult& r) {
  const Scenario& s = net.scenario();
  json j;
  j["scheme"] = scheme_name(r.scheme);
  j["sum_rate_bps"] = r.sum_rate_bps;
  j["accessed_users"] = r.accessed;
  j["objective"] = r.objective;
  j["iterations"] = r.iterations;
  j["best_iteration"] = r.best_iteration;
  j["smpc_runs"] = r.smpc_runs;
  j["lsc_user_fraction"] = r.lsc_user_fraction(s);
  j["total_backhaul_bps"] = r.total_backhaul_bps();
  json cells = json::array();
  for (std::size_t m = 0; m < r.rate_bps.size(); ++m) {
    json c = {{"cell", m},
              {"kind", kind_name(s.cells()[m].kind)},
              {"rate_bps", r.rate_bps[m]},
              {"traffic_bits", r.traffic_bits[m]},
              {"users", r.users[m]},
              {"lambda", r.lambda[m]}};
    // Unbounded capacity and delay are written as null.
    c["capacity_bps"] = std::isfinite(r.capacity_bps[m]) ? json(r.capacity_bps[m]) : json();
    c["delay_s"] = std::isfinite(r.delay_s[m]) ? json(r.delay_s[m]) : json();
    cells.push_back(c);
  }
  j["cells"] = cells;
  json pairs = json::array();
  for (const auto& p : r.psi.pairs()) {
    pairs.push_back({{"user", p.user}, {"cell", p.cell}, {"subchannel", p.subch}});
  }
  j["association"] = pairs;
  j["backhaul"] = backhaul_to_json(r.phi, r.backhaul);
  if (!r.parts.empty()) {
    j["parts"] = json::array();
    for (const auto& p : r.parts) j["parts"].push_back(result_to_json(net, p));
  }
  return j;
}

}  // namespace leo
