// Acceptance runner: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mecsim/validation.hpp"

namespace v = mecsim::validation;

int main(int argc, char** argv) {
  CLI::App app{"mecsim acceptance suite"};
  int only = 0;
  double budget = 180.0;
  std::vector<int> expect_fail;
  v::Options opt;
  app.add_option("--only", only, "run a single criterion (1-10)")
      ->check(CLI::Range(1, v::kCriterionCount));
  app.add_option("--budget", budget, "wall-clock budget for the full suite in seconds");
  app.add_option("--seed", opt.seed, "base seed");
  app.add_option("--threads", opt.threads, "threads for the determinism cross-check");
  app.add_option("--expect-fail", expect_fail, "criteria known to fail; the exit code ignores them")
      ->check(CLI::Range(1, v::kCriterionCount));
  CLI11_PARSE(app, argc, argv);
  const std::set<int> known(expect_fail.begin(), expect_fail.end());

  int failed = 0;
  int unexpected = 0;
  auto print = [&](const v::CriterionResult& r) {
    std::printf("[%s] %2d %s: %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.detail.c_str());
    std::fflush(stdout);
    failed += !r.passed;
    unexpected += r.passed == known.contains(r.id);
  };

  const auto start = std::chrono::steady_clock::now();
  if (only) {
    print(v::run_criterion(only, opt));
    return unexpected ? 1 : 0;
  }
  v::run_all(opt, print);
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_budget = total <= budget;
  std::printf("[%s] total %.1f s (budget %.0f s)\n", in_budget ? "PASS" : "FAIL", total, budget);
  std::printf("%d of %d criteria passed\n", v::kCriterionCount - failed, v::kCriterionCount);
  if (!known.empty()) std::printf("%d unexpected result(s)\n", unexpected);
  return (unexpected || !in_budget) ? 1 : 0;
}
