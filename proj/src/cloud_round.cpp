#include "mecsim/cloud_round.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mecsim/error.hpp"
#include "mecsim/golden.hpp"

namespace mecsim {

namespace {
constexpr double kSnap = 1e-12;

double snap(double v) {
  if (std::abs(v) <= kSnap) return 0.0;
  if (std::abs(1.0 - v) <= kSnap) return 1.0;
  return v;
}

bool binary(double v) { return v == 0.0 || v == 1.0; }
}  // namespace

double StabilityContext::total() const noexcept {
  return std::accumulate(sizes.begin(), sizes.end(), 0.0);
}

double relaxed_objective(double y, const StabilityContext& c) {
  const double s = c.total();
  if (y < 0.0 || y > s) throw ContractError("relaxed_objective: y outside [0, S]");
  return c.q_e * (s - y) + c.q_c * y + c.z_e * c.q_e * c.t / (c.hist_e + s - y + c.epsilon) +
         c.z_c * c.q_c * c.t / (c.hist_c + y + c.epsilon);
}

Relaxation solve_relaxation(const StabilityContext& ctx, double tol) {
  Relaxation r;
  r.x.assign(ctx.sizes.size(), 0.0);
  const double s = ctx.total();
  if (!(s > 0.0)) return r;
  const ScalarMin m = golden_section_minimize(
      [&](double y) { return relaxed_objective(std::clamp(y, 0.0, s), ctx); }, 0.0, s, tol * s);
  r.y = std::clamp(m.x, 0.0, s);
  double left = r.y;
  for (std::size_t u = 0; u < ctx.sizes.size() && left > 0.0; ++u) {
    if (ctx.sizes[u] <= left) {
      r.x[u] = 1.0;
      left -= ctx.sizes[u];
    } else {
      r.x[u] = left / ctx.sizes[u];
      left = 0.0;
    }
  }
  return r;
}

RoundingOutcome rounding_step(const RoundingPair& p, Stream* rng) {
  RoundingOutcome o;
  const double ratio = p.w2 / p.w1;
  const double i1_a = 1.0 - p.x1;
  const double i1_b = ratio * p.x2;
  const double i2_a = p.x1;
  const double i2_b = ratio * (1.0 - p.x2);
  o.iota1 = std::min(i1_a, i1_b);
  o.iota2 = std::min(i2_a, i2_b);
  o.rho1 = o.iota1 / (o.iota1 + o.iota2);
  o.rule1 = rng ? rng->bernoulli(o.rho1) : o.rho1 >= 1.0 - o.rho1;
  const double back = p.w1 / p.w2;
  if (o.rule1) {
    o.x1 = p.x1 - o.iota2;
    o.x2 = p.x2 + back * o.iota2;
    if (i2_a <= i2_b) o.x1 = 0.0;
    if (i2_b <= i2_a) o.x2 = 1.0;
  } else {
    o.x1 = p.x1 + o.iota1;
    o.x2 = p.x2 - back * o.iota1;
    if (i1_a <= i1_b) o.x1 = 1.0;
    if (i1_b <= i1_a) o.x2 = 0.0;
  }
  o.x1 = snap(std::clamp(o.x1, 0.0, 1.0));
  o.x2 = snap(std::clamp(o.x2, 0.0, 1.0));
  return o;
}

RoundingTrace dependent_round(std::span<const double> x, std::span<const double> sizes,
                              Stream* rng) {
  if (x.size() != sizes.size()) throw ContractError("dependent_round: length mismatch");
  std::vector<double> v(x.begin(), x.end());
  std::vector<std::size_t> pool;
  for (std::size_t u = 0; u < v.size(); ++u) {
    v[u] = snap(v[u]);
    if (!binary(v[u])) pool.push_back(u);
  }
  RoundingTrace tr;
  while (pool.size() >= 2) {
    const std::size_t a = pool[0];
    const std::size_t b = pool[1];
    const double before = sizes[a] * v[a] + sizes[b] * v[b];
    const RoundingOutcome o = rounding_step({v[a], v[b], sizes[a], sizes[b]}, rng);
    v[a] = o.x1;
    v[b] = o.x2;
    const double after = sizes[a] * v[a] + sizes[b] * v[b];
    const double scale = std::max({std::abs(before), sizes[a], sizes[b]});
    tr.max_rel_drift = std::max(tr.max_rel_drift, std::abs(after - before) / scale);
    if (!binary(v[a]) && !binary(v[b])) tr.pair_ok = false;
    ++tr.steps;
    std::erase_if(pool, [&](std::size_t u) { return binary(v[u]); });
    if (!tr.pair_ok) break;
  }
  for (std::size_t u : pool) {
    if (!binary(v[u])) {
      tr.singleton = true;
      v[u] = v[u] > 0.5 ? 1.0 : 0.0;
    }
  }
  tr.x.resize(v.size());
  for (std::size_t u = 0; u < v.size(); ++u) tr.x[u] = v[u] == 1.0 ? 1 : 0;
  return tr;
}

}  // namespace mecsim
