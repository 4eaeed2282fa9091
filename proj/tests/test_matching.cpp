#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "mecsim/channel.hpp"
#include "mecsim/matching.hpp"
#include "mecsim/rng.hpp"

using namespace mecsim;

namespace {

// Energy recomputed from scratch: local sum plus (sum sqrt beta)^2 / B.
double oracle_energy(const MatchingInstance& inst, const std::vector<int>& x) {
  double local = 0.0, root = 0.0;
  for (std::size_t u = 0; u < inst.size(); ++u) {
    if (x[u]) {
      root += std::sqrt(inst.betas[u]);
    } else {
      local += inst.local_energy[u];
    }
  }
  return local + root * root / inst.bandwidth;
}

double oracle_ud(const MatchingInstance& inst, const std::vector<int>& x, std::size_t u) {
  if (!x[u]) return -inst.local_energy[u];
  double root = 0.0;
  for (std::size_t k = 0; k < inst.size(); ++k) {
    if (x[k]) root += std::sqrt(inst.betas[k]);
  }
  return -std::sqrt(inst.betas[u]) * root / inst.bandwidth;
}

double oracle_server(const MatchingInstance& inst, const std::vector<int>& x, int side) {
  double s = 0.0;
  for (std::size_t u = 0; u < inst.size(); ++u) {
    if (x[u] == side) s += oracle_ud(inst, x, u);
  }
  return s;
}

bool weakly_better(double after, double before) {
  return after >= before - 1e-12 * (1.0 + std::abs(before));
}

// Exhaustive scan for a swap or move that the matching rule would accept.
bool oracle_blocked(const MatchingInstance& inst, const std::vector<int>& x, int capacity) {
  const double e0 = oracle_energy(inst, x);
  const std::size_t n = inst.size();
  const int occ = std::accumulate(x.begin(), x.end(), 0);
  for (std::size_t u = 0; u < n; ++u) {
    // move to the other side
    std::vector<int> y = x;
    y[u] ^= 1;
    if (!(y[u] && (unreachable(inst.betas[u]) || occ + 1 > capacity))) {
      if (weakly_better(oracle_ud(inst, y, u), oracle_ud(inst, x, u)) &&
          oracle_energy(inst, y) < e0 - 1e-9 * e0) {
        return true;
      }
    }
    for (std::size_t v = u + 1; v < n; ++v) {
      if (x[u] == x[v]) continue;
      std::vector<int> z = x;
      std::swap(z[u], z[v]);
      if ((z[u] && unreachable(inst.betas[u])) || (z[v] && unreachable(inst.betas[v]))) continue;
      const bool all = weakly_better(oracle_ud(inst, z, u), oracle_ud(inst, x, u)) &&
                       weakly_better(oracle_ud(inst, z, v), oracle_ud(inst, x, v)) &&
                       weakly_better(oracle_server(inst, z, 0), oracle_server(inst, x, 0)) &&
                       weakly_better(oracle_server(inst, z, 1), oracle_server(inst, x, 1));
      if (all && oracle_energy(inst, z) < e0 - 1e-9 * e0) return true;
    }
  }
  return false;
}

MatchingInstance random_instance(Stream& rng, std::size_t n) {
  MatchingInstance inst;
  inst.bandwidth = 1.0;
  for (std::size_t u = 0; u < n; ++u) {
    inst.local_energy.push_back(rng.uniform(0.01, 2.0));
    inst.betas.push_back(rng.bernoulli(0.05) ? kUnreachable : std::pow(rng.uniform(0.05, 1.5), 2));
  }
  return inst;
}

}  // namespace

TEST_CASE("utilities") {
  const MatchingInstance inst{{0.01, 0.02}, {1.0, 4.0}, 1.0};
  const std::vector<int> local{0, 0};
  const Utilities u = agent_utilities(inst, local);
  CHECK(u.mec_server == 0.0);
  CHECK(u.ud[0] == doctest::Approx(-0.01));
  CHECK(u.local_server == doctest::Approx(-0.03));

  const std::vector<int> both{1, 1};
  const Utilities w = agent_utilities(inst, both);
  CHECK(w.ud[0] == doctest::Approx(-3.0));
  CHECK(w.ud[1] == doctest::Approx(-6.0));
  CHECK(-w.mec_server == doctest::Approx(matching_energy(inst, both)));
}

TEST_CASE("utilities partition the energy") {
  Stream rng(41, 0, Purpose::kFuzz, 0);
  for (int i = 0; i < 500; ++i) {
    MatchingInstance inst = random_instance(rng, 1 + rng.index(12));
    for (double& b : inst.betas) {
      if (unreachable(b)) b = 1.0;
    }
    std::vector<int> x(inst.size());
    for (int& v : x) v = rng.bernoulli(0.5);
    const Utilities u = agent_utilities(inst, x);
    const double sum_ud = std::accumulate(u.ud.begin(), u.ud.end(), 0.0);
    CHECK(sum_ud == doctest::Approx(u.local_server + u.mec_server).epsilon(1e-12));
    CHECK(-sum_ud == doctest::Approx(oracle_energy(inst, x)).epsilon(1e-12));
    CHECK(matching_energy(inst, x) == doctest::Approx(oracle_energy(inst, x)).epsilon(1e-12));
  }
}

TEST_CASE("blocking pair examples") {
  const MatchingInstance one{{0.01}, {1.0}, 1.0};
  const std::vector<int> eta1{0};
  CHECK_FALSE(find_blocking_pair(one, eta1, 0).has_value());

  // UD0 offloads at 4 J but computes locally at 1 J; UD1 the reverse.
  const MatchingInstance two{{1.0, 3.0}, {4.0, 1.0}, 1.0};
  const std::vector<int> eta{1, 0};
  const auto p = find_blocking_pair(two, eta, 1);
  REQUIRE(p.has_value());
  CHECK(p->u == 0);
  CHECK(p->v == 1);
  const std::vector<int> swapped{0, 1};
  CHECK(matching_energy(two, swapped) < matching_energy(two, eta));
  CHECK_FALSE(find_blocking_pair(two, swapped, 1).has_value());
}

TEST_CASE("capacity and single-UD cases") {
  const MatchingInstance inst{{1.0, 2.0, 3.0}, {0.01, 0.01, 0.01}, 1.0};
  const MatchResult none = stable_match(inst, 0);
  for (int x : none.x) CHECK(x == 0);

  const MatchingInstance one{{0.01}, {0.001}, 1.0};
  CHECK(stable_match(one, 1).x[0] == 1);
  const MatchingInstance costly{{0.001}, {0.01}, 1.0};
  CHECK(stable_match(costly, 1).x[0] == 0);
  const MatchingInstance dead{{0.5}, {kUnreachable}, 1.0};
  CHECK(stable_match(dead, 1).x[0] == 0);
}

TEST_CASE("three UDs with capacity 2 against exhaustive scans") {
  Stream rng(42, 0, Purpose::kFuzz, 0);
  for (int i = 0; i < 2000; ++i) {
    const MatchingInstance inst = random_instance(rng, 3);
    const MatchResult r = stable_match(inst, 2);
    CHECK_FALSE(find_blocking_pair(inst, r.eta, 2).has_value());
    CHECK_FALSE(oracle_blocked(inst, r.eta, 2));
    CHECK(std::accumulate(r.x.begin(), r.x.end(), 0) <= 2);
    CHECK(oracle_energy(inst, r.x) <= oracle_energy(inst, r.eta) * (1 + 1e-12));
    CHECK(oracle_energy(inst, r.x) <= oracle_energy(inst, {0, 0, 0}) * (1 + 1e-12));
    CHECK(r.monotone);
  }
}

TEST_CASE("random instances: stability, capacity, monotone energy") {
  Stream rng(43, 0, Purpose::kFuzz, 0);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = 1 + rng.index(10);
    const MatchingInstance inst = random_instance(rng, n);
    const int cap = static_cast<int>(rng.index(n + 1));
    std::vector<int> init(n, 0);
    const MatchResult r = stable_match(inst, cap, init);
    CHECK_FALSE(oracle_blocked(inst, r.eta, cap));
    CHECK(r.monotone);
    CHECK(r.max_occupancy <= cap);
    for (std::size_t u = 0; u < n; ++u) {
      if (unreachable(inst.betas[u])) CHECK(r.x[u] == 0);
      CHECK(r.x[u] <= r.eta[u]);
    }
  }
}

TEST_CASE("removal refinement only lowers energy") {
  const MatchingInstance inst{{0.1, 5.0}, {1.0, 1.0}, 1.0};
  int removed = 0;
  bool mono = true;
  const std::vector<int> x = refine_removals(inst, {1, 1}, &removed, &mono);
  CHECK(x == std::vector<int>{0, 1});
  CHECK(removed == 1);
  CHECK(mono);
}
