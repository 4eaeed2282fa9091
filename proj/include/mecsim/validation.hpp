#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mecsim::validation {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Options {
  std::uint64_t seed = 20240601;
  int threads = 4;  // used by the determinism cross-check
};

inline constexpr int kCriterionCount = 10;

/// Runs acceptance criterion `id` (1-based).
CriterionResult run_criterion(int id, const Options& opt = {});

/// Runs all criteria in order, reporting each as it finishes.
std::vector<CriterionResult> run_all(const Options& opt = {},
                                     const std::function<void(const CriterionResult&)>& progress = {});

/// Spearman rank correlation with average ranks for ties. Zero when either
/// side has no spread.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace mecsim::validation
