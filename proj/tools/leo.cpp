// Command-line front end: run, sweep, baseline, verify, generate.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "leo/harness.hpp"
#include "leo/orchestrator.hpp"
#include "leo/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kUsage = 2;
constexpr int kConfig = 3;
constexpr int kIo = 4;
constexpr int kFailed = 1;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string profile = "desk";
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
};

void add_common(CLI::App* cmd, Common& c, bool with_seed = true) {
  cmd->add_option("--profile", c.profile, "Base profile")
      ->check(CLI::IsMember({"desk", "paper"}));
  cmd->add_option("--config", c.config, "JSON config overlaid on the profile");
  if (with_seed) cmd->add_option("--seed", c.seed, "Single seed (overrides the config)");
  cmd->add_option("--out", c.out, "Output directory");
}

leo::RunConfig resolve(const Common& c) {
  leo::RunConfig cfg = leo::profile_config(c.profile);
  if (!c.config.empty()) cfg = leo::load_config(c.config, cfg);
  if (c.seed) {
    cfg.seed_base = *c.seed;
    cfg.seed_count = 1;
  }
  cfg.validate();
  return cfg;
}

fs::path out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir + "'");
  }
  return fs::path(dir);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << text;
  if (!f.flush()) throw IoError("write failed for '" + path.string() + "'");
}

std::string to_text(const json& j) { return j.dump(2) + "\n"; }

void write_manifest(const fs::path& dir, const std::string& command,
                    const leo::RunConfig& cfg, const std::vector<std::string>& files) {
  json m;
  m["command"] = command;
  m["config_hash"] = leo::config_hash(cfg);
  m["seeds"] = cfg.seeds();
  m["config"] = leo::config_to_json(cfg);
  m["files"] = files;
  write_file(dir / "manifest.json", to_text(m));
}

int cmd_run(const Common& c) {
  const leo::RunConfig cfg = resolve(c);
  const std::uint64_t seed = cfg.seed_base;
  const leo::Network net = leo::build_network(cfg, seed);
  const leo::RunResult r = leo::run_baseline(cfg.scheme, net, cfg.lits);
  const fs::path dir = out_dir(c.out);
  json j = leo::result_to_json(net, r);
  j["config_hash"] = leo::config_hash(cfg);
  j["seed"] = seed;
  write_file(dir / "run.json", to_text(j));
  std::ostringstream hist;
  leo::write_history_csv(hist, r.history);
  write_file(dir / "history.csv", hist.str());
  write_manifest(dir, "run", cfg, {"run.json", "history.csv"});
  std::printf("%s seed %llu: sum rate %.3f Mbps, %d users, %d iterations\n",
              leo::scheme_name(r.scheme).c_str(),
              static_cast<unsigned long long>(seed), r.sum_rate_bps * 1e-6,
              r.accessed, r.iterations);
  return 0;
}

int cmd_sweep(const Common& c, const std::string& axis,
              const std::vector<double>& values) {
  leo::RunConfig cfg = resolve(c);
  if (!axis.empty()) cfg.axis = leo::parse_axis(axis);
  if (!values.empty()) cfg.values = values;
  cfg.validate();
  if (cfg.axis == leo::Axis::kNone) {
    throw leo::ConfigError("sweep needs an axis (--axis or sweep.axis)");
  }
  const auto rows = leo::sweep_parallel(cfg);
  const fs::path dir = out_dir(c.out);
  std::ostringstream raw, agg;
  leo::write_rows_csv(raw, rows);
  leo::write_aggregate_csv(agg, leo::aggregate(rows));
  write_file(dir / "sweep.csv", raw.str());
  write_file(dir / "aggregate.csv", agg.str());
  write_manifest(dir, "sweep", cfg, {"sweep.csv", "aggregate.csv"});
  std::printf("%zu rows over %zu %s values\n", rows.size(), cfg.values.size(),
              leo::axis_name(cfg.axis).c_str());
  return 0;
}

std::vector<leo::Scheme> parse_schemes(const std::string& list) {
  std::vector<leo::Scheme> out;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (!name.empty()) out.push_back(leo::parse_scheme(name));
  }
  if (out.empty()) throw leo::ConfigError("empty --baseline list");
  return out;
}

int cmd_baseline(const Common& c, const std::string& list) {
  leo::RunConfig cfg = resolve(c);
  cfg.axis = leo::Axis::kNone;
  cfg.values.clear();
  const auto schemes = parse_schemes(list);
  std::ostringstream raw, agg;
  raw << "scheme,";
  agg << "scheme,";
  bool header = true;
  for (leo::Scheme s : schemes) {
    cfg.scheme = s;
    const auto rows = leo::sweep_parallel(cfg);
    std::ostringstream r, a;
    leo::write_rows_csv(r, rows);
    leo::write_aggregate_csv(a, leo::aggregate(rows));
    auto append = [&](std::ostringstream& dst, const std::string& text) {
      std::istringstream in(text);
      std::string line;
      bool first = true;
      while (std::getline(in, line)) {
        if (first) {
          if (header) dst << line << '\n';
          first = false;
          continue;
        }
        dst << leo::scheme_name(s) << ',' << line << '\n';
      }
    };
    append(raw, r.str());
    append(agg, a.str());
    header = false;
  }
  const fs::path dir = out_dir(c.out);
  write_file(dir / "baseline.csv", raw.str());
  write_file(dir / "baseline_aggregate.csv", agg.str());
  write_manifest(dir, "baseline", cfg, {"baseline.csv", "baseline_aggregate.csv"});
  std::printf("%zu schemes x %d seeds\n", schemes.size(), cfg.seed_count);
  return 0;
}

int cmd_verify() {
  int failed = 0;
  for (const auto& r : leo::verify::oracle_checks()) {
    std::printf("%s\n", leo::verify::format_result(r).c_str());
    if (!r.passed) ++failed;
  }
  return failed == 0 ? 0 : kFailed;
}

int cmd_generate(const Common& c) {
  const leo::RunConfig cfg = resolve(c);
  const std::uint64_t seed = cfg.seed_base;
  const leo::Network net = leo::build_network(cfg, seed);
  json j = leo::scenario_to_json(net.scenario());
  j["config_hash"] = leo::config_hash(cfg);
  j["seed"] = seed;
  const fs::path dir = out_dir(c.out);
  write_file(dir / "scenario.json", to_text(j));
  write_manifest(dir, "generate", cfg, {"scenario.json"});
  std::printf("scenario seed %llu: %zu cells, %zu users, %zu satellites\n",
              static_cast<unsigned long long>(seed), net.scenario().cell_count(),
              net.scenario().user_count(), net.scenario().satellite_count());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integrated terrestrial and LEO-backhauled small-cell offloading"};
  app.require_subcommand(1);

  Common run_opt, sweep_opt, base_opt, gen_opt;
  auto* run = app.add_subcommand("run", "Single run of the configured scheme");
  add_common(run, run_opt);

  auto* sweep = app.add_subcommand("sweep", "Axis sweep averaged over seeds");
  add_common(sweep, sweep_opt);
  std::string axis;
  std::vector<double> values;
  sweep->add_option("--axis", axis, "user_density | n_satellites | projected_area | traffic_load | n_r");
  sweep->add_option("--values", values, "Comma-separated axis values")->delimiter(',');

  auto* baseline = app.add_subcommand("baseline", "Comparison schemes on shared realizations");
  add_common(baseline, base_opt);
  std::string schemes = "lits,ideal,tth,nits,random,greedy";
  baseline->add_option("--baseline", schemes, "Comma-separated schemes");

  auto* verify = app.add_subcommand("verify", "Oracle and property suites");
  auto* generate = app.add_subcommand("generate", "Dump a scenario realization");
  add_common(generate, gen_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return cmd_run(run_opt);
    if (*sweep) return cmd_sweep(sweep_opt, axis, values);
    if (*baseline) return cmd_baseline(base_opt, schemes);
    if (*verify) return cmd_verify();
    if (*generate) return cmd_generate(gen_opt);
  } catch (const leo::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailed;
  }
  return kUsage;
}
