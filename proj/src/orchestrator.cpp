#include "mecsim/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "mecsim/allocation.hpp"
#include "mecsim/channel.hpp"
#include "mecsim/cloud_round.hpp"
#include "mecsim/error.hpp"
#include "mecsim/rng.hpp"

namespace mecsim {

namespace {

Arrivals unit_arrivals(const ServerSlot& s, std::span<const int> x_m, std::span<const int> x_c) {
  Arrivals a;
  for (std::size_t u = 0; u < s.size(); ++u) {
    a.edge += (x_m[u] - x_c[u]) * s.sizes[u];
    a.cloud += x_c[u] * s.sizes[u];
  }
  a.edge /= s.unit;
  a.cloud /= s.unit;
  return a;
}

int count(std::span<const int> x) { return std::accumulate(x.begin(), x.end(), 0); }

std::uint64_t server_entity(const ServerSlot& s, int sub = 0) {
  return (static_cast<std::uint64_t>(s.server) << 20) | static_cast<std::uint64_t>(sub);
}

TwoStageOptions options_from(const SimConfig& cfg) {
  TwoStageOptions o;
  o.random_initial = cfg.random_initial_matching;
  o.randomized_rounding = cfg.randomized_rounding;
  o.relaxation_tol = cfg.relaxation_tol;
  o.seed = cfg.rng_seed;
  return o;
}

std::vector<int> random_initial(const ServerSlot& s, int n, std::uint64_t seed) {
  Stream rng(seed, server_entity(s, n), Purpose::kMatchingInit, static_cast<std::uint64_t>(s.t));
  std::vector<int> x(s.size(), 0);
  std::vector<std::size_t> on;
  for (std::size_t u = 0; u < s.size(); ++u) {
    if (!unreachable(s.betas[u]) && rng.bernoulli(0.5)) on.push_back(u);
  }
  while (static_cast<int>(on.size()) > n) on.erase(on.begin() + static_cast<std::ptrdiff_t>(rng.index(on.size())));
  for (std::size_t u : on) x[u] = 1;
  return x;
}

PolicyOutcome finish(const ServerSlot& s, std::vector<int> x_m, std::vector<int> x_c) {
  PolicyOutcome out;
  out.objective = evaluate(s, x_m, x_c);
  out.chosen_n = count(x_m);
  out.decision = make_decision(s, std::move(x_m), std::move(x_c));
  return out;
}

PolicyOutcome random_offload(const ServerSlot& s, std::uint64_t seed) {
  Stream rng(seed, server_entity(s), Purpose::kDecision, static_cast<std::uint64_t>(s.t));
  const std::size_t n = s.size();
  std::vector<int> x_m(n, 0);
  std::vector<int> x_c(n, 0);
  std::vector<std::size_t> on;
  for (std::size_t u = 0; u < n; ++u) {
    const bool pick = rng.bernoulli(0.5);
    if (pick && !unreachable(s.betas[u])) on.push_back(u);
  }
  while (static_cast<int>(on.size()) > s.capacity) {
    on.erase(on.begin() + static_cast<std::ptrdiff_t>(rng.index(on.size())));
  }
  for (std::size_t u : on) x_m[u] = 1;
  for (std::size_t u = 0; u < n; ++u) {
    if (x_m[u] && rng.bernoulli(0.5)) x_c[u] = 1;
  }
  return finish(s, std::move(x_m), std::move(x_c));
}

PolicyOutcome energy_first(const ServerSlot& s) {
  const MatchResult m = stable_match(s.matching(), s.capacity);
  std::vector<int> x_c(s.size(), 0);
  double q_e = s.queue.q_e;
  double q_c = s.queue.q_c;
  const double mu_e = s.params.edge_service;
  const double mu_c = s.params.cloud_service;
  for (std::size_t u = 0; u < s.size(); ++u) {
    if (!m.x[u]) continue;
    const double bits = s.sizes[u] / s.unit;
    if (q_c / mu_c < q_e / mu_e) {
      x_c[u] = 1;
      q_c += bits;
    } else {
      q_e += bits;
    }
  }
  return finish(s, m.x, std::move(x_c));
}

PolicyOutcome strict_delay(const ServerSlot& s, const SimConfig& cfg) {
  TwoStageResult base = two_stage(s, options_from(cfg));
  std::vector<int> x_m = base.decision.x_m;
  std::vector<int> x_c = base.decision.x_c;
  const int t = s.t;
  const QueueState& q = s.queue;
  const ServerParams& p = s.params;
  auto over = [&](bool cloud) {
    const Arrivals a = unit_arrivals(s, x_m, x_c);
    const double left = cloud ? std::max(q.q_c - p.cloud_service, 0.0) + a.cloud
                              : std::max(q.q_e - p.edge_service, 0.0) + a.edge;
    const double ratio = delay_ratio(left, cloud ? q.hist_c : q.hist_e, cloud ? a.cloud : a.edge, t);
    return ratio > (cloud ? p.delay_bound_cloud : p.delay_bound_edge);
  };
  for (;;) {
    const bool edge_over = over(false);
    const bool cloud_over = over(true);
    if (!edge_over && !cloud_over) break;
    std::optional<std::size_t> drop;
    for (std::size_t u = 0; u < s.size(); ++u) {
      if (!x_m[u]) continue;
      const bool in_cloud = x_c[u] == 1;
      if (!((in_cloud && cloud_over) || (!in_cloud && edge_over))) continue;
      if (!drop || s.sizes[u] > s.sizes[*drop]) drop = u;
    }
    if (!drop) break;
    x_m[*drop] = 0;
    x_c[*drop] = 0;
  }
  return finish(s, std::move(x_m), std::move(x_c));
}

PolicyOutcome genetic(const ServerSlot& s, const SimConfig& cfg) {
  const GeneticParams& gp = cfg.genetic;
  const std::size_t n = s.size();
  Stream rng(cfg.rng_seed, server_entity(s), Purpose::kGenetic, static_cast<std::uint64_t>(s.t));
  using Genome = std::vector<int>;

  auto repair = [&](Genome& g) {
    std::vector<std::size_t> on;
    for (std::size_t u = 0; u < n; ++u) {
      if (unreachable(s.betas[u])) g[u] = 0;
      if (!g[u]) g[n + u] = 0;
      if (g[u]) on.push_back(u);
    }
    while (static_cast<int>(on.size()) > s.capacity) {
      const std::size_t k = rng.index(on.size());
      g[on[k]] = 0;
      g[n + on[k]] = 0;
      on.erase(on.begin() + static_cast<std::ptrdiff_t>(k));
    }
  };
  auto fitness = [&](const Genome& g) {
    const std::span<const int> all(g);
    return evaluate(s, all.first(n), all.subspan(n)).j;
  };

  struct Member {
    Genome g;
    double f = 0.0;
  };
  std::vector<Member> pop(static_cast<std::size_t>(gp.population));
  for (Member& m : pop) {
    m.g.assign(2 * n, 0);
    for (int& b : m.g) b = rng.bernoulli(0.5) ? 1 : 0;
    repair(m.g);
    m.f = fitness(m.g);
  }
  auto best_of = [](const std::vector<Member>& p) {
    return std::min_element(p.begin(), p.end(),
                            [](const Member& a, const Member& b) { return a.f < b.f; });
  };
  auto tournament = [&]() -> const Member& {
    const Member* pick = &pop[rng.index(pop.size())];
    for (int k = 1; k < gp.tournament; ++k) {
      const Member& c = pop[rng.index(pop.size())];
      if (c.f < pick->f) pick = &c;
    }
    return *pick;
  };

  for (int gen = 0; gen < gp.generations; ++gen) {
    std::vector<Member> next;
    next.reserve(pop.size());
    next.push_back(*best_of(pop));
    while (next.size() < pop.size()) {
      const Member& p1 = tournament();
      const Member& p2 = tournament();
      Member child{p1.g, 0.0};
      if (rng.bernoulli(gp.crossover)) {
        for (std::size_t k = 0; k < child.g.size(); ++k) {
          if (rng.bernoulli(0.5)) child.g[k] = p2.g[k];
        }
      }
      for (int& b : child.g) {
        if (rng.bernoulli(gp.mutation)) b ^= 1;
      }
      repair(child.g);
      child.f = fitness(child.g);
      next.push_back(std::move(child));
    }
    pop = std::move(next);
  }
  const Genome& g = best_of(pop)->g;
  return finish(s, Genome(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n)),
                Genome(g.begin() + static_cast<std::ptrdiff_t>(n), g.end()));
}

}  // namespace

double energy_objective(const ServerSlot& s, std::span<const int> x_m) {
  for (std::size_t u = 0; u < s.size(); ++u) {
    if (x_m[u] && unreachable(s.betas[u])) throw InfeasibleError("offloading over an unreachable link");
  }
  return matching_energy(s.matching(), x_m);
}

double queue_objective(const ServerSlot& s, std::span<const int> x_m, std::span<const int> x_c,
                       bool cloud_terms) {
  const Arrivals a = unit_arrivals(s, x_m, x_c);
  const QueueState& q = s.queue;
  const ServerParams& p = s.params;
  const double eps = 1.0 / s.unit;
  double v = q.q_e * (a.edge - p.edge_service) +
             q.z_e * (q.q_e * s.t / (q.hist_e + a.edge + eps) - p.delay_bound_edge);
  if (cloud_terms) {
    v += q.q_c * (a.cloud - p.cloud_service) +
         q.z_c * (q.q_c * s.t / (q.hist_c + a.cloud + eps) - p.delay_bound_cloud);
  }
  return v;
}

ObjectiveBreakdown evaluate(const ServerSlot& s, std::span<const int> x_m,
                            std::span<const int> x_c, bool cloud_terms) {
  ObjectiveBreakdown b;
  b.energy = energy_objective(s, x_m);
  b.queue = queue_objective(s, x_m, x_c, cloud_terms);
  b.j = s.v * b.energy + b.queue;
  return b;
}

Decision make_decision(const ServerSlot& s, std::vector<int> x_m, std::vector<int> x_c) {
  Decision d;
  d.a.assign(s.size(), 0.0);
  AllocationInstance inst;
  inst.bandwidth = s.bandwidth;
  inst.v = s.v;
  std::vector<std::size_t> who;
  for (std::size_t u = 0; u < s.size(); ++u) {
    if (x_m[u]) {
      who.push_back(u);
      inst.betas.push_back(s.betas[u]);
    }
  }
  if (!who.empty()) {
    const std::vector<double> a = optimal_allocation(inst);
    for (std::size_t k = 0; k < who.size(); ++k) d.a[who[k]] = a[k];
  }
  d.x_m = std::move(x_m);
  d.x_c = std::move(x_c);
  return d;
}

void check_decision(const ServerSlot& s, const Decision& d) {
  const std::size_t n = s.size();
  if (d.x_m.size() != n || d.x_c.size() != n || d.a.size() != n) {
    throw ConsistencyError("decision length mismatch");
  }
  double sum_a = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    if (d.x_c[u] > d.x_m[u]) throw ConsistencyError("cloud share without MEC offload");
    if ((d.a[u] > 0.0) != (d.x_m[u] == 1)) throw ConsistencyError("bandwidth given to a local UD");
    if (d.x_m[u] && unreachable(s.betas[u])) throw ConsistencyError("unreachable UD offloaded");
    sum_a += d.a[u];
  }
  if (sum_a > 1.0 + 1e-12) throw ConsistencyError("bandwidth fractions exceed 1");
  if (count(d.x_m) > s.capacity) throw ConsistencyError("connection capacity exceeded");
}

std::vector<int> cloud_split(const ServerSlot& s, std::span<const int> x_m,
                             const TwoStageOptions& opt) {
  std::vector<int> x_c(s.size(), 0);
  StabilityContext ctx;
  std::vector<std::size_t> who;
  for (std::size_t u = 0; u < s.size(); ++u) {
    if (x_m[u]) {
      who.push_back(u);
      ctx.sizes.push_back(s.sizes[u] / s.unit);
    }
  }
  if (who.empty() || !(ctx.total() > 0.0)) return x_c;
  ctx.q_e = s.queue.q_e;
  ctx.q_c = s.queue.q_c;
  ctx.z_e = s.queue.z_e;
  ctx.z_c = s.queue.z_c;
  ctx.hist_e = s.queue.hist_e;
  ctx.hist_c = s.queue.hist_c;
  ctx.t = s.t;
  ctx.epsilon = 1.0 / s.unit;
  const Relaxation rel = solve_relaxation(ctx, opt.relaxation_tol);
  // Zero-size offloaders carry no weight and stay at the edge.
  std::vector<double> frac;
  std::vector<double> w;
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < who.size(); ++k) {
    if (ctx.sizes[k] > 0.0) {
      frac.push_back(rel.x[k]);
      w.push_back(ctx.sizes[k]);
      idx.push_back(who[k]);
    }
  }
  std::optional<Stream> rng;
  if (opt.randomized_rounding) {
    rng.emplace(opt.seed, server_entity(s, count(x_m)), Purpose::kRounding,
                static_cast<std::uint64_t>(s.t));
  }
  const RoundingTrace tr = dependent_round(frac, w, rng ? &*rng : nullptr);
  for (std::size_t k = 0; k < idx.size(); ++k) x_c[idx[k]] = tr.x[k];
  return x_c;
}

TwoStageResult two_stage(const ServerSlot& s, const TwoStageOptions& opt) {
  const MatchingInstance inst = s.matching();
  TwoStageResult r;
  std::optional<MatchResult> reuse;
  bool have_best = false;
  std::vector<int> best_m;
  std::vector<int> best_c;
  for (int n = s.capacity; n >= 0; --n) {
    MatchResult m;
    if (!opt.random_initial && reuse && reuse->max_occupancy < n) {
      m = *reuse;
    } else {
      const std::vector<int> init =
          opt.random_initial ? random_initial(s, n, opt.seed) : std::vector<int>{};
      m = stable_match(inst, n, init);
      reuse = m;
    }
    std::vector<int> x_c = opt.cloud ? cloud_split(s, m.x, opt) : std::vector<int>(s.size(), 0);
    CapacityPoint pt;
    pt.n = n;
    pt.energy = matching_energy(inst, m.x);
    pt.queue = queue_objective(s, m.x, x_c, opt.cloud);
    pt.j = s.v * pt.energy + pt.queue;
    r.sweep.push_back(pt);
    if (!have_best || pt.j < r.objective.j) {
      have_best = true;
      r.objective = {pt.energy, pt.queue, pt.j};
      r.chosen_n = n;
      best_m = m.x;
      best_c = std::move(x_c);
    }
  }
  const auto arg = std::min_element(r.sweep.begin(), r.sweep.end(),
                                    [](const CapacityPoint& a, const CapacityPoint& b) { return a.j < b.j; });
  if (arg->n != r.chosen_n) throw ConsistencyError("two_stage: chosen capacity is not the argmin");
  r.decision = make_decision(s, std::move(best_m), std::move(best_c));
  return r;
}

PolicyOutcome decide(Policy policy, const ServerSlot& s, const SimConfig& cfg) {
  switch (policy) {
    case Policy::kOjcta: {
      TwoStageResult r = two_stage(s, options_from(cfg));
      return {std::move(r.decision), r.objective, r.chosen_n};
    }
    case Policy::kNcc: {
      TwoStageOptions o = options_from(cfg);
      o.cloud = false;
      TwoStageResult r = two_stage(s, o);
      PolicyOutcome out{std::move(r.decision), {}, r.chosen_n};
      out.objective = evaluate(s, out.decision.x_m, out.decision.x_c);
      return out;
    }
    case Policy::kLc:
      return finish(s, std::vector<int>(s.size(), 0), std::vector<int>(s.size(), 0));
    case Policy::kRo:
      return random_offload(s, cfg.rng_seed);
    case Policy::kEcf:
      return energy_first(s);
    case Policy::kSsc:
      return strict_delay(s, cfg);
    case Policy::kGjtora:
      return genetic(s, cfg);
  }
  throw ContractError("unknown policy");
}

}  // namespace mecsim
