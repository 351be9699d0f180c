// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any
// fails. Arguments select criteria by number (default: all).
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <vector>

#include "leo/harness.hpp"
#include "leo/verify.hpp"

int main(int argc, char** argv) {
  using namespace leo::verify;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  const leo::RunConfig desk = leo::desk_profile();
  const std::vector<std::function<CheckResult()>> checks = {
      [] { return access_maximality(); },
      [] { return round_bound(); },
      [] { return group_stability(); },
      [] { return smpc_monotone(); },
      [] { return swap_stability(); },
      [] { return power_control(); },
      [] { return gradients(); },
      [] { return pruning(); },
      [] { return swap_space(); },
      [] { return load_split(); },
      [&] { return constraints(desk); },
      [&] { return integration_gain(desk); },
      [&] { return satellite_returns(desk); },
      [&] { return area_optimum(desk); },
      [&] { return delay_crossover(desk); },
      [&] { return determinism(desk); },
  };
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (!only.empty() && !only.count(static_cast<int>(i + 1))) continue;
    CheckResult r;
    try {
      r = checks[i]();
    } catch (const std::exception& e) {
      r.id = static_cast<int>(i + 1);
      r.name = "criterion";
      r.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s\n", format_result(r).c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  }
  std::printf("%d failed\n", failed);
  return failed == 0 ? 0 : 1;
}
