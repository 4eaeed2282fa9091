#include "mecsim/matching.hpp"

#include <algorithm>
#include <cmath>

#include "mecsim/channel.hpp"
#include "mecsim/error.hpp"

namespace mecsim {

namespace {

constexpr double kWeak = 1e-12;
constexpr double kGuard = 1e-12;

bool weakly_better(double now, double before) {
  return now >= before - kWeak * std::max(std::abs(now), std::abs(before));
}

struct Evaluator {
  const MatchingInstance& inst;
  std::vector<double> root;
  std::vector<int> eta;
  double sum_root = 0.0;
  double local_sum = 0.0;
  int occupancy = 0;

  Evaluator(const MatchingInstance& in, std::span<const int> start) : inst(in), eta(start.begin(), start.end()) {
    root.resize(in.size());
    for (std::size_t u = 0; u < in.size(); ++u) root[u] = std::sqrt(in.betas[u]);
    for (std::size_t u = 0; u < in.size(); ++u) {
      if (eta[u] == kMec) {
        sum_root += root[u];
        ++occupancy;
      } else {
        local_sum += in.local_energy[u];
      }
    }
  }

  double energy() const { return local_sum + sum_root * sum_root / inst.bandwidth; }

  // Energy change of moving the given UDs, or nothing when the move is not
  // an improvement under the acceptance rule.
  std::optional<double> try_swap(std::size_t u, std::size_t v) const {
    const double b = inst.bandwidth;
    const std::size_t local = eta[u] == kLocal ? u : v;
    const std::size_t mec = eta[u] == kLocal ? v : u;
    if (unreachable(inst.betas[local])) return std::nullopt;
    const double s_new = sum_root - root[mec] + root[local];
    if (!weakly_better(-root[local] * s_new / b, -inst.local_energy[local])) return std::nullopt;
    if (!weakly_better(-inst.local_energy[mec], -root[mec] * sum_root / b)) return std::nullopt;
    if (!weakly_better(-(local_sum - inst.local_energy[local] + inst.local_energy[mec]), -local_sum)) {
      return std::nullopt;
    }
    if (!weakly_better(-s_new * s_new / b, -sum_root * sum_root / b)) return std::nullopt;
    return inst.local_energy[mec] - inst.local_energy[local] +
           (s_new * s_new - sum_root * sum_root) / b;
  }

  std::optional<double> try_move(std::size_t u, int capacity) const {
    const double b = inst.bandwidth;
    if (eta[u] == kLocal) {
      if (occupancy >= capacity || unreachable(inst.betas[u])) return std::nullopt;
      const double s_new = sum_root + root[u];
      if (!weakly_better(-root[u] * s_new / b, -inst.local_energy[u])) return std::nullopt;
      return -inst.local_energy[u] + (s_new * s_new - sum_root * sum_root) / b;
    }
    const double s_new = sum_root - root[u];
    if (!weakly_better(-inst.local_energy[u], -root[u] * sum_root / b)) return std::nullopt;
    return inst.local_energy[u] - (sum_root * sum_root - s_new * s_new) / b;
  }

  std::optional<double> try_pair(std::size_t u, std::size_t v, int capacity) const {
    std::optional<double> delta;
    if (v == inst.size()) {
      delta = try_move(u, capacity);
    } else if (eta[u] != eta[v]) {
      delta = try_swap(u, v);
    }
    if (delta && *delta < -kGuard * energy()) return delta;
    return std::nullopt;
  }

  void flip(std::size_t u) {
    if (eta[u] == kLocal) {
      eta[u] = kMec;
      sum_root += root[u];
      local_sum -= inst.local_energy[u];
      ++occupancy;
    } else {
      eta[u] = kLocal;
      sum_root -= root[u];
      local_sum += inst.local_energy[u];
      --occupancy;
    }
    if (occupancy == 0) sum_root = 0.0;
  }
};

void check_instance(const MatchingInstance& inst) {
  if (inst.betas.size() != inst.local_energy.size()) {
    throw ContractError("matching instance: length mismatch");
  }
  if (!(inst.bandwidth > 0.0)) throw ContractError("matching instance: bandwidth must be > 0");
}

}  // namespace

double matching_energy(const MatchingInstance& inst, std::span<const int> x) {
  double local = 0.0;
  double root = 0.0;
  for (std::size_t u = 0; u < inst.size(); ++u) {
    if (x[u]) {
      root += std::sqrt(inst.betas[u]);
    } else {
      local += inst.local_energy[u];
    }
  }
  return local + root * root / inst.bandwidth;
}

Utilities agent_utilities(const MatchingInstance& inst, std::span<const int> eta) {
  Utilities out;
  out.ud.resize(inst.size());
  double root = 0.0;
  for (std::size_t u = 0; u < inst.size(); ++u) {
    if (eta[u] == kMec) root += std::sqrt(inst.betas[u]);
  }
  for (std::size_t u = 0; u < inst.size(); ++u) {
    if (eta[u] == kMec) {
      const double e = std::sqrt(inst.betas[u]) * root / inst.bandwidth;
      out.ud[u] = -e;
      out.mec_server -= e;
    } else {
      out.ud[u] = -inst.local_energy[u];
      out.local_server -= inst.local_energy[u];
    }
  }
  return out;
}

std::optional<BlockingPair> find_blocking_pair(const MatchingInstance& inst,
                                               std::span<const int> eta, int capacity) {
  check_instance(inst);
  const Evaluator ev(inst, eta);
  const std::size_t n = inst.size();
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v <= n; ++v) {
      if (ev.try_pair(u, v, capacity)) return BlockingPair{u, v};
    }
  }
  return std::nullopt;
}

MatchResult stable_match(const MatchingInstance& inst, int capacity, std::span<const int> initial) {
  check_instance(inst);
  if (capacity < 0) throw ContractError("stable_match: capacity must be >= 0");
  const std::size_t n = inst.size();
  std::vector<int> start(n, kLocal);
  if (!initial.empty()) {
    if (initial.size() != n) throw ContractError("stable_match: initial length mismatch");
    start.assign(initial.begin(), initial.end());
  }
  Evaluator ev(inst, start);
  if (ev.occupancy > capacity) throw ContractError("stable_match: initial matching over capacity");
  MatchResult r;
  r.max_occupancy = ev.occupancy;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t u = 0; u < n && !changed; ++u) {
      for (std::size_t v = u + 1; v <= n && !changed; ++v) {
        if (!ev.try_pair(u, v, capacity)) continue;
        const double before = ev.energy();
        ev.flip(u);
        if (v < n) ev.flip(v);
        if (!(ev.energy() < before)) r.monotone = false;
        r.max_occupancy = std::max(r.max_occupancy, ev.occupancy);
        ++r.swaps;
        changed = true;
      }
    }
  }
  r.eta = ev.eta;
  r.x = refine_removals(inst, ev.eta, &r.removals, &r.monotone);
  return r;
}

std::vector<int> refine_removals(const MatchingInstance& inst, std::vector<int> x, int* removals,
                                 bool* monotone) {
  Evaluator ev(inst, x);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t u = 0; u < x.size() && !changed; ++u) {
      if (ev.eta[u] != kMec) continue;
      const double s_new = ev.sum_root - ev.root[u];
      const double saved = (ev.sum_root * ev.sum_root - s_new * s_new) / inst.bandwidth;
      if (inst.local_energy[u] <= saved) {
        const double before = ev.energy();
        ev.flip(u);
        if (monotone && ev.energy() > before * (1.0 + 1e-12)) *monotone = false;
        if (removals) ++*removals;
        changed = true;
      }
    }
  }
  return ev.eta;
}

}  // namespace mecsim
