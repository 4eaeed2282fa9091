#pragma once

#include <optional>
#include <span>
#include <vector>

namespace mecsim {

inline constexpr int kLocal = 0;  // server i0
inline constexpr int kMec = 1;    // server i1

/// Energy inputs of one server's UDs in one slot. Offload energy under the
/// optimal split is sqrt(beta_u) * sum sqrt(beta) / B.
struct MatchingInstance {
  std::vector<double> local_energy;
  std::vector<double> betas;  // kUnreachable for dead links
  double bandwidth = 1.0;

  std::size_t size() const noexcept { return local_energy.size(); }
};

/// Total energy of an offloading vector.
double matching_energy(const MatchingInstance& inst, std::span<const int> x);

struct Utilities {
  std::vector<double> ud;
  double local_server = 0.0;
  double mec_server = 0.0;
};

Utilities agent_utilities(const MatchingInstance& inst, std::span<const int> eta);

/// A swap between UD `u` and UD `v`. `v == size()` is the vacant slot, i.e. a
/// plain move of `u` to the other server.
struct BlockingPair {
  std::size_t u = 0;
  std::size_t v = 0;
};

/// First blocking pair in lexicographic order, or nothing if `eta` is stable.
std::optional<BlockingPair> find_blocking_pair(const MatchingInstance& inst,
                                               std::span<const int> eta, int capacity);

struct MatchResult {
  std::vector<int> eta;  // stable matching before refinement
  std::vector<int> x;    // offloading decision after remove actions
  int swaps = 0;
  int removals = 0;
  int max_occupancy = 0;
  bool monotone = true;  // energy fell with every accepted swap and removal
};

/// Swap matching from `initial` (all local when empty) followed by greedy
/// remove actions.
MatchResult stable_match(const MatchingInstance& inst, int capacity,
                         std::span<const int> initial = {});

/// Flips offloaders to local while that does not raise the energy.
std::vector<int> refine_removals(const MatchingInstance& inst, std::vector<int> x,
                                 int* removals = nullptr, bool* monotone = nullptr);

}  // namespace mecsim
