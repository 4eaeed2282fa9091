#pragma once

#include <span>
#include <vector>

#include "mecsim/rng.hpp"

namespace mecsim {

/// Constants of the relaxed queue-stability subproblem for one server.
struct StabilityContext {
  std::vector<double> sizes;  // offloader task sizes
  double q_e = 0.0;
  double q_c = 0.0;
  double z_e = 0.0;
  double z_c = 0.0;
  double hist_e = 0.0;  // arrivals before this slot
  double hist_c = 0.0;
  int t = 1;
  double epsilon = 1.0;  // denominator floor

  double total() const noexcept;
};

/// g(y) with y the bits sent to the cloud. Throws ContractError outside [0, S].
double relaxed_objective(double y, const StabilityContext& ctx);

struct Relaxation {
  double y = 0.0;
  std::vector<double> x;  // at most one strictly fractional entry
};

/// Golden-section minimum of g to within tol * S, realized by greedy filling
/// in index order.
Relaxation solve_relaxation(const StabilityContext& ctx, double tol);

struct RoundingPair {
  double x1 = 0.0;
  double x2 = 0.0;
  double w1 = 1.0;
  double w2 = 1.0;
};

struct RoundingOutcome {
  double x1 = 0.0;
  double x2 = 0.0;
  double iota1 = 0.0;
  double iota2 = 0.0;
  double rho1 = 0.0;
  bool rule1 = true;
};

/// One pairwise rounding step. Deterministic threshold rule unless `rng` is
/// given, in which case rule 1 is taken with probability rho1.
RoundingOutcome rounding_step(const RoundingPair& pair, Stream* rng = nullptr);

struct RoundingTrace {
  std::vector<int> x;
  int steps = 0;
  double max_rel_drift = 0.0;  // weighted-sum drift over pairwise steps
  bool singleton = false;      // a lone fractional entry was snapped
  bool pair_ok = true;        // every step produced a binary output
};

/// Pairwise dependent rounding of `x` (entries in [0, 1]) weighted by `sizes`.
RoundingTrace dependent_round(std::span<const double> x, std::span<const double> sizes,
                              Stream* rng = nullptr);

}  // namespace mecsim
