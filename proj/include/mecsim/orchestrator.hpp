#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mecsim/config.hpp"
#include "mecsim/matching.hpp"
#include "mecsim/queueing.hpp"

namespace mecsim {

/// Everything one server needs to decide a slot. Task sizes are in bits;
/// queues and service rates are in queue units of `unit` bits.
struct ServerSlot {
  int server = 0;
  int t = 1;  // 1-based slot index
  std::vector<double> sizes;
  std::vector<double> local_energy;
  std::vector<double> betas;
  double bandwidth = 1.0;
  QueueState queue;
  ServerParams params;
  int capacity = 0;
  double v = 1.0;
  double unit = 1.0;

  std::size_t size() const noexcept { return sizes.size(); }
  MatchingInstance matching() const { return {local_energy, betas, bandwidth}; }
};

struct Decision {
  std::vector<int> x_m;
  std::vector<int> x_c;
  std::vector<double> a;
};

struct ObjectiveBreakdown {
  double energy = 0.0;
  double queue = 0.0;
  double j = 0.0;
};

/// Offload plus local energy with the optimal bandwidth split for `x_m`.
double energy_objective(const ServerSlot& s, std::span<const int> x_m);

/// Queue part of the per-slot objective. Without `cloud_terms` the Q_C and
/// Z_C terms are dropped.
double queue_objective(const ServerSlot& s, std::span<const int> x_m, std::span<const int> x_c,
                       bool cloud_terms = true);

ObjectiveBreakdown evaluate(const ServerSlot& s, std::span<const int> x_m,
                            std::span<const int> x_c, bool cloud_terms = true);

/// Builds x_c bits and the optimal bandwidth split around an offloading vector.
Decision make_decision(const ServerSlot& s, std::vector<int> x_m, std::vector<int> x_c);

/// Throws ConsistencyError if the decision breaks a feasibility constraint.
void check_decision(const ServerSlot& s, const Decision& d);

struct TwoStageOptions {
  bool cloud = true;  // false drops edge-cloud collaboration
  bool random_initial = false;
  bool randomized_rounding = false;
  double relaxation_tol = 1e-6;
  std::uint64_t seed = 1;
};

struct CapacityPoint {
  int n = 0;
  double energy = 0.0;
  double queue = 0.0;
  double j = 0.0;
};

struct TwoStageResult {
  Decision decision;
  ObjectiveBreakdown objective;
  int chosen_n = 0;
  std::vector<CapacityPoint> sweep;  // n = capacity down to 0
};

/// Capacity sweep alternating matching and relaxation-plus-rounding.
TwoStageResult two_stage(const ServerSlot& s, const TwoStageOptions& opt);

/// Cloud shares for a fixed offloading vector: relaxation then rounding.
std::vector<int> cloud_split(const ServerSlot& s, std::span<const int> x_m,
                             const TwoStageOptions& opt);

struct PolicyOutcome {
  Decision decision;
  ObjectiveBreakdown objective;
  int chosen_n = 0;
};

/// Decision of `policy` for one server and slot. All policies use the
/// optimal bandwidth split; GJTORA, RO and the randomized modes draw from
/// decision streams keyed by (seed, server, slot).
PolicyOutcome decide(Policy policy, const ServerSlot& s, const SimConfig& cfg);

}  // namespace mecsim
