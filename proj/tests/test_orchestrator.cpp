#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "mecsim/channel.hpp"
#include "mecsim/config.hpp"
#include "mecsim/error.hpp"
#include "mecsim/orchestrator.hpp"
#include "mecsim/rng.hpp"

using namespace mecsim;

namespace {

ServerSlot random_slot(Stream& rng, std::size_t n, int capacity) {
  ServerSlot s;
  s.t = 1 + static_cast<int>(rng.index(40));
  s.bandwidth = 2e7;
  s.capacity = capacity;
  s.v = rng.uniform(5.0, 40.0);
  s.unit = 1e6;
  for (std::size_t u = 0; u < n; ++u) {
    const double bits = rng.uniform(1e4, 1e6);
    s.sizes.push_back(bits);
    s.local_energy.push_back(1e-28 * 1.5e18 * bits * 1000.0 * rng.uniform(0.7, 1.3));
    s.betas.push_back(rng.bernoulli(0.05) ? kUnreachable : bits * rng.uniform(0.01, 0.1));
  }
  s.queue.q_e = rng.uniform(0.0, 5.0);
  s.queue.q_c = rng.uniform(0.0, 5.0);
  s.queue.z_e = rng.uniform(0.0, 3.0);
  s.queue.z_c = rng.uniform(0.0, 3.0);
  s.queue.slots = s.t - 1;
  s.queue.hist_e = s.t == 1 ? 0.0 : rng.uniform(0.0, 2.0 * s.t);
  s.queue.hist_c = s.t == 1 ? 0.0 : rng.uniform(0.0, 1.0 * s.t);
  s.params = {2.0, 1.28, 2.0, 2.0};
  return s;
}

}  // namespace

TEST_CASE("queue objective examples") {
  ServerSlot s;
  s.sizes = {1e5, 2e5};
  s.local_energy = {0.01, 0.02};
  s.betas = {1e3, 1e3};
  s.unit = 1.0;
  s.params = {5e6, 1e6, 2.0, 2.0};
  const std::vector<int> zero{0, 0};
  CHECK(queue_objective(s, zero, zero) == 0.0);
  s.queue.q_e = 1.0;
  CHECK(queue_objective(s, zero, zero) == doctest::Approx(-5e6));
}

TEST_CASE("moving one task to the cloud: finite difference of the formula") {
  Stream rng(61, 0, Purpose::kFuzz, 0);
  for (int i = 0; i < 200; ++i) {
    ServerSlot s = random_slot(rng, 5, 5);
    std::vector<int> xm(5, 1), edge(5, 0), cloud(5, 0);
    edge[3] = 0;
    cloud[3] = 1;
    const double diff = queue_objective(s, xm, cloud) - queue_objective(s, xm, edge);
    const QueueState& q = s.queue;
    const double total = std::accumulate(s.sizes.begin(), s.sizes.end(), 0.0) / s.unit;
    const double su = s.sizes[3] / s.unit;
    const double eps = 1.0 / s.unit;
    const double z_before = q.z_e * q.q_e * s.t / (q.hist_e + total + eps) +
                            q.z_c * q.q_c * s.t / (q.hist_c + eps);
    const double z_after = q.z_e * q.q_e * s.t / (q.hist_e + total - su + eps) +
                           q.z_c * q.q_c * s.t / (q.hist_c + su + eps);
    CHECK(diff == doctest::Approx((q.q_c - q.q_e) * su + z_after - z_before).epsilon(1e-9));
  }
}

TEST_CASE("zero capacity gives the all-local decision") {
  Stream rng(62, 0, Purpose::kFuzz, 0);
  ServerSlot s = random_slot(rng, 6, 0);
  const TwoStageResult r = two_stage(s, {});
  for (int x : r.decision.x_m) CHECK(x == 0);
  const std::vector<int> zero(6, 0);
  const double local = std::accumulate(s.local_energy.begin(), s.local_energy.end(), 0.0);
  CHECK(r.objective.j == doctest::Approx(s.v * local + queue_objective(s, zero, zero)));
  CHECK(r.chosen_n == 0);
}

TEST_CASE("two-stage never loses to all-local and picks the sweep argmin") {
  Stream rng(63, 0, Purpose::kFuzz, 0);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.index(15);
    ServerSlot s = random_slot(rng, n, static_cast<int>(rng.index(n + 1)));
    const std::vector<int> zero(n, 0);
    for (bool random_init : {false, true}) {
      TwoStageOptions o;
      o.random_initial = random_init;
      o.seed = 7;
      const TwoStageResult r = two_stage(s, o);
      CHECK(r.objective.j <= evaluate(s, zero, zero).j + 1e-12 * std::abs(evaluate(s, zero, zero).j));
      CHECK(r.sweep.size() == static_cast<std::size_t>(s.capacity + 1));
      for (const CapacityPoint& p : r.sweep) CHECK(r.objective.j <= p.j);
      CHECK(evaluate(s, r.decision.x_m, r.decision.x_c).j == doctest::Approx(r.objective.j));
      CHECK_NOTHROW(check_decision(s, r.decision));
    }
  }
}

TEST_CASE("policy invariants") {
  SimConfig cfg = default_config();
  cfg.genetic.population = 12;
  cfg.genetic.generations = 10;
  Stream rng(64, 0, Purpose::kFuzz, 0);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 1 + rng.index(12);
    ServerSlot s = random_slot(rng, n, static_cast<int>(rng.index(n + 1)));
    for (Policy p : kAllPolicies) {
      CAPTURE(policy_name(p));
      const PolicyOutcome out = decide(p, s, cfg);
      CHECK_NOTHROW(check_decision(s, out.decision));
      CHECK(out.objective.j == doctest::Approx(evaluate(s, out.decision.x_m, out.decision.x_c).j));
      const double sum_a = std::accumulate(out.decision.a.begin(), out.decision.a.end(), 0.0);
      const int offl = std::accumulate(out.decision.x_m.begin(), out.decision.x_m.end(), 0);
      if (offl > 0) CHECK(sum_a == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(offl <= s.capacity);
      if (p == Policy::kLc) CHECK(offl == 0);
      if (p == Policy::kNcc) {
        for (int x : out.decision.x_c) CHECK(x == 0);
      }
    }
  }
}

TEST_CASE("random offloading is reproducible per seed") {
  Stream rng(65, 0, Purpose::kFuzz, 0);
  ServerSlot s = random_slot(rng, 12, 4);
  SimConfig cfg = default_config();
  const PolicyOutcome a = decide(Policy::kRo, s, cfg);
  const PolicyOutcome b = decide(Policy::kRo, s, cfg);
  CHECK(a.decision.x_m == b.decision.x_m);
  CHECK(a.decision.x_c == b.decision.x_c);
  CHECK(std::accumulate(a.decision.x_m.begin(), a.decision.x_m.end(), 0) <= 4);
  cfg.rng_seed = 2;
  bool differs = false;
  for (int t = 1; t <= 20 && !differs; ++t) {
    s.t = t;
    cfg.rng_seed = 1;
    const auto x1 = decide(Policy::kRo, s, cfg).decision.x_m;
    cfg.rng_seed = 2;
    differs = x1 != decide(Policy::kRo, s, cfg).decision.x_m;
  }
  CHECK(differs);
}

TEST_CASE("check_decision rejects broken decisions") {
  Stream rng(66, 0, Purpose::kFuzz, 0);
  ServerSlot s = random_slot(rng, 3, 1);
  s.betas = {1e3, 1e3, 1e3};
  Decision d = make_decision(s, {1, 1, 0}, {0, 0, 0});
  CHECK_THROWS_AS(check_decision(s, d), ConsistencyError);
  Decision c = make_decision(s, {1, 0, 0}, {0, 1, 0});
  CHECK_THROWS_AS(check_decision(s, c), ConsistencyError);
  Decision ok = make_decision(s, {0, 1, 0}, {0, 1, 0});
  CHECK_NOTHROW(check_decision(s, ok));
  s.betas[1] = kUnreachable;
  CHECK_THROWS_AS(check_decision(s, ok), ConsistencyError);
}
