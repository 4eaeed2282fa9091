#include "mecsim/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "mecsim/allocation.hpp"
#include "mecsim/cloud_round.hpp"
#include "mecsim/config.hpp"
#include "mecsim/error.hpp"
#include "mecsim/matching.hpp"
#include "mecsim/orchestrator.hpp"
#include "mecsim/queueing.hpp"
#include "mecsim/rng.hpp"
#include "mecsim/simkit.hpp"

namespace mecsim::validation {

namespace {

constexpr double kNoise = 1.5848931924611134e-13;
constexpr double kIntensity = 1000.0;
constexpr double kZeta = 1e-28;

std::string format(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Physical description of one UD, used to rebuild energies from rates.
struct PhysUd {
  double size = 0.0;
  double cpu = 0.0;
  double power = 0.0;
  double gain = 0.0;

  double local() const { return kZeta * cpu * cpu * size * kIntensity; }
  double efficiency() const { return std::log2(1.0 + power * gain / kNoise); }
  bool dead() const { return !(efficiency() > 0.0) || size == 0.0; }
  double beta() const { return dead() ? std::numeric_limits<double>::infinity() : power * size / efficiency(); }
};

struct PhysServer {
  std::vector<PhysUd> uds;
  double bandwidth = 8e6;
};

PhysServer random_server(Stream& r, std::size_t n) {
  PhysServer s;
  s.bandwidth = r.uniform(2e6, 20e6);
  for (std::size_t u = 0; u < n; ++u) {
    PhysUd ud;
    ud.size = r.uniform(1e4, 1e6);
    ud.cpu = r.uniform(1e9, 2e9);
    ud.power = r.uniform(0.1, 0.5);
    const double d = r.uniform(50.0, 500.0);
    const double fs = 4.0 * 3.14159265358979323846 * 2.4e9 / 3e8;
    const double loss = fs * fs * d * d * d * std::pow(10.0, 0.6 * r.normal());
    const double h = 0.70710678118654752 * std::sqrt(-2.0 * std::log(1.0 - r.uniform()));
    ud.gain = r.bernoulli(0.05) ? 0.0 : h * h / loss;
    s.uds.push_back(ud);
  }
  return s;
}

// Per-agent energies of a matching computed from explicit rates.
struct PhysUtilities {
  std::vector<double> ud;
  double local_server = 0.0;
  double mec_server = 0.0;
  bool feasible = true;
};

PhysUtilities phys_utilities(const PhysServer& s, const std::vector<int>& eta) {
  PhysUtilities out;
  out.ud.resize(s.uds.size());
  double roots = 0.0;
  for (std::size_t u = 0; u < s.uds.size(); ++u) {
    if (eta[u]) {
      if (s.uds[u].dead()) out.feasible = false;
      roots += std::sqrt(s.uds[u].beta());
    }
  }
  for (std::size_t u = 0; u < s.uds.size(); ++u) {
    const PhysUd& d = s.uds[u];
    if (eta[u]) {
      const double share = std::sqrt(d.beta()) / roots;
      const double rate = share * s.bandwidth * d.efficiency();
      const double e = d.power * d.size / rate;
      out.ud[u] = -e;
      out.mec_server -= e;
    } else {
      out.ud[u] = -d.local();
      out.local_server -= d.local();
    }
  }
  return out;
}

double phys_energy(const PhysServer& s, const std::vector<int>& x) {
  const PhysUtilities u = phys_utilities(s, x);
  return -(u.local_server + u.mec_server);
}

MatchingInstance to_instance(const PhysServer& s) {
  MatchingInstance m;
  m.bandwidth = s.bandwidth;
  for (const PhysUd& d : s.uds) {
    m.local_energy.push_back(d.local());
    m.betas.push_back(d.beta());
  }
  return m;
}

bool weak(double now, double before) {
  return now >= before - 1e-13 * std::max(std::abs(now), std::abs(before));
}
bool strict(double now, double before) {
  return now > before + 1e-9 * std::max(std::abs(now), std::abs(before));
}

// Exhaustive blocking-pair scan: UD swaps across servers, then single moves
// into or out of a vacant slot.
int count_blocking(const PhysServer& s, const std::vector<int>& eta, int capacity) {
  const PhysUtilities base = phys_utilities(s, eta);
  const int occupancy = std::accumulate(eta.begin(), eta.end(), 0);
  int found = 0;
  const std::size_t n = s.uds.size();
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (eta[u] == eta[v]) continue;
      std::vector<int> next = eta;
      std::swap(next[u], next[v]);
      const PhysUtilities sw = phys_utilities(s, next);
      if (!sw.feasible) continue;
      const double before[4] = {base.ud[u], base.ud[v], base.local_server, base.mec_server};
      const double after[4] = {sw.ud[u], sw.ud[v], sw.local_server, sw.mec_server};
      bool all_weak = true;
      bool any_strict = false;
      for (int k = 0; k < 4; ++k) {
        all_weak = all_weak && weak(after[k], before[k]);
        any_strict = any_strict || strict(after[k], before[k]);
      }
      if (all_weak && any_strict) ++found;
    }
    std::vector<int> moved = eta;
    moved[u] = 1 - eta[u];
    if (moved[u] == 1 && occupancy >= capacity) continue;
    const PhysUtilities mv = phys_utilities(s, moved);
    if (!mv.feasible) continue;
    const double e0 = -(base.local_server + base.mec_server);
    const double e1 = -(mv.local_server + mv.mec_server);
    if (weak(mv.ud[u], base.ud[u]) && strict(-e1, -e0)) ++found;
  }
  return found;
}

// Decision-dependent part of the per-slot objective, rebuilt from physics.
double phys_objective(const PhysServer& p, const ServerSlot& s, const std::vector<int>& xm,
                      const std::vector<int>& xc) {
  double ae = 0.0;
  double ac = 0.0;
  for (std::size_t u = 0; u < xm.size(); ++u) {
    ae += (xm[u] - xc[u]) * p.uds[u].size / s.unit;
    ac += xc[u] * p.uds[u].size / s.unit;
  }
  const QueueState& q = s.queue;
  const double eps = 1.0 / s.unit;
  return s.v * phys_energy(p, xm) + q.q_e * ae + q.q_c * ac +
         q.z_e * q.q_e * s.t / (q.hist_e + ae + eps) + q.z_c * q.q_c * s.t / (q.hist_c + ac + eps);
}

ServerSlot random_slot(Stream& r, const PhysServer& p) {
  ServerSlot s;
  s.unit = 1e6;
  s.v = r.uniform(5.0, 40.0);
  s.bandwidth = p.bandwidth;
  s.capacity = static_cast<int>(r.index(p.uds.size() + 1));
  s.t = 1 + static_cast<int>(r.index(100));
  s.params = {r.uniform(1.0, 5.0), r.uniform(1.0, 8.0), 2.0, 2.0};
  s.queue.q_e = r.uniform(0.0, 6.0);
  s.queue.q_c = r.uniform(0.0, 6.0);
  s.queue.z_e = r.uniform(0.0, 5.0);
  s.queue.z_c = r.uniform(0.0, 5.0);
  s.queue.hist_e = r.uniform(0.0, 3.0 * (s.t - 1));
  s.queue.hist_c = r.uniform(0.0, 3.0 * (s.t - 1));
  s.queue.slots = s.t - 1;
  const MatchingInstance m = to_instance(p);
  s.local_energy = m.local_energy;
  s.betas = m.betas;
  for (const PhysUd& d : p.uds) s.sizes.push_back(d.size);
  return s;
}

double g_oracle(double y, const StabilityContext& c, double s) {
  return c.q_e * (s - y) + c.q_c * y + c.z_e * c.q_e * c.t / (c.hist_e + (s - y) + c.epsilon) +
         c.z_c * c.q_c * c.t / (c.hist_c + y + c.epsilon);
}

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// --- criteria ---------------------------------------------------------------

CriterionResult allocation_optimality(const Options& opt) {
  CriterionResult r{1, "allocation optimality", false, {}, 0.0};
  Stream rng(opt.seed, 1, Purpose::kFuzz, 0);
  int kkt_fail = 0;
  int beaten = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> trial;
  for (int i = 0; i < 10000; ++i) {
    AllocationInstance inst;
    const std::size_t n = 1 + rng.index(20);
    for (std::size_t u = 0; u < n; ++u) inst.betas.push_back(std::pow(10.0, rng.uniform(-3.0, 3.0)));
    inst.bandwidth = rng.uniform(1e6, 2e7);
    inst.v = rng.uniform(1.0, 40.0);
    inst.phi = rng.uniform(-10.0, 10.0);
    const std::vector<double> a = optimal_allocation(inst);
    // Stationarity checked here as well as through verify_kkt.
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      const double lambda = inst.v * inst.betas[u] / (a[u] * a[u] * inst.bandwidth);
      lo = std::min(lo, lambda);
      hi = std::max(hi, lambda);
    }
    const double sum = std::accumulate(a.begin(), a.end(), 0.0);
    if (!verify_kkt(inst, a, 1e-9) || hi - lo > 1e-9 * hi || std::abs(sum - 1.0) > 1e-9) ++kkt_fail;
    auto objective = [&](const std::vector<double>& x) {
      double j = inst.phi;
      for (std::size_t u = 0; u < n; ++u) j += inst.v * inst.betas[u] / (x[u] * inst.bandwidth);
      return j;
    };
    const double best = objective(a);
    trial.resize(n);
    for (int k = 0; k < 1000; ++k) {
      double total = 0.0;
      for (double& x : trial) {
        x = -std::log(1.0 - rng.uniform()) + 1e-300;
        total += x;
      }
      const double budget = rng.bernoulli(0.5) ? 1.0 : rng.uniform(0.5, 1.0);
      for (double& x : trial) x = x / total * budget;
      const double margin = (objective(trial) - best) / std::abs(best);
      worst = std::min(worst, margin);
      if (margin < -1e-12) ++beaten;
    }
  }
  r.passed = kkt_fail == 0 && beaten == 0;
  r.detail = format("10000 instances, KKT failures %d, beaten by random %d, worst relative margin %.3e",
                    kkt_fail, beaten, worst);
  return r;
}

CriterionResult rounding_properties(const Options& opt) {
  CriterionResult r{2, "rounding properties", false, {}, 0.0};
  Stream rng(opt.seed, 2, Purpose::kFuzz, 0);
  Stream coin(opt.seed, 2, Purpose::kRounding, 0);
  int no_binary = 0;
  int drift = 0;
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    RoundingPair p;
    p.x1 = rng.uniform(1e-9, 1.0 - 1e-9);
    p.x2 = rng.uniform(1e-9, 1.0 - 1e-9);
    p.w1 = std::pow(10.0, rng.uniform(4.0, 6.0));
    p.w2 = std::pow(10.0, rng.uniform(4.0, 6.0));
    const RoundingOutcome o = rounding_step(p, i % 2 ? &coin : nullptr);
    auto bin = [](double v) { return v == 0.0 || v == 1.0; };
    if (!bin(o.x1) && !bin(o.x2)) ++no_binary;
    const double before = p.w1 * p.x1 + p.w2 * p.x2;
    const double rel = std::abs(p.w1 * o.x1 + p.w2 * o.x2 - before) / before;
    worst = std::max(worst, rel);
    if (rel > 1e-12) ++drift;
  }
  int full_fail = 0;
  int too_many = 0;
  double worst_full = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const std::size_t n = 1 + rng.index(30);
    std::vector<double> x(n);
    std::vector<double> s(n);
    for (std::size_t u = 0; u < n; ++u) {
      s[u] = rng.uniform(1e4, 1e6);
      const double k = rng.uniform();
      x[u] = k < 0.1 ? 0.0 : (k < 0.2 ? 1.0 : rng.uniform());
    }
    const RoundingTrace tr = dependent_round(x, s, i % 2 ? &coin : nullptr);
    std::size_t fractional = 0;
    double target = 0.0;
    double got = 0.0;
    double smax = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      if (x[u] != 0.0 && x[u] != 1.0) ++fractional;
      target += s[u] * x[u];
      got += s[u] * tr.x[u];
      smax = std::max(smax, s[u]);
      if (tr.x[u] != 0 && tr.x[u] != 1) ++full_fail;
    }
    if (fractional > 0 && static_cast<std::size_t>(tr.steps) > fractional - 1) ++too_many;
    worst_full = std::max(worst_full, tr.max_rel_drift);
    if (!tr.pair_ok || tr.max_rel_drift > 1e-12 || std::abs(got - target) > smax) ++full_fail;
  }
  r.passed = no_binary == 0 && drift == 0 && full_fail == 0 && too_many == 0;
  r.detail = format(
      "100000 steps: non-binary %d, drift>1e-12 %d (worst %.2e); 100000 full roundings: failures "
      "%d, step overruns %d (worst drift %.2e)",
      no_binary, drift, worst, full_fail, too_many, worst_full);
  return r;
}

CriterionResult relaxation_oracle(const Options& opt) {
  CriterionResult r{3, "relaxation vs grid search", false, {}, 0.0};
  Stream rng(opt.seed, 3, Purpose::kFuzz, 0);
  const double tol = 1e-6;
  int bad = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < 1000; ++i) {
    StabilityContext c;
    const std::size_t n = 1 + rng.index(20);
    for (std::size_t u = 0; u < n; ++u) c.sizes.push_back(rng.uniform(0.01, 1.0));
    c.q_e = rng.bernoulli(0.1) ? 0.0 : rng.uniform(0.0, 10.0);
    c.q_c = rng.bernoulli(0.1) ? 0.0 : rng.uniform(0.0, 10.0);
    c.z_e = rng.bernoulli(0.2) ? 0.0 : rng.uniform(0.0, 20.0);
    c.z_c = rng.bernoulli(0.2) ? 0.0 : rng.uniform(0.0, 20.0);
    c.t = 1 + static_cast<int>(rng.index(200));
    c.hist_e = rng.uniform(0.0, 2.0 * (c.t - 1));
    c.hist_c = rng.uniform(0.0, 2.0 * (c.t - 1));
    c.epsilon = 1e-6;
    const double s = std::accumulate(c.sizes.begin(), c.sizes.end(), 0.0);
    const Relaxation rel = solve_relaxation(c, tol);
    double best_y = 0.0;
    double best_g = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 10000; ++k) {
      const double y = s * k / 9999.0;
      const double g = g_oracle(y, c, s);
      if (g < best_g) {
        best_g = g;
        best_y = y;
      }
    }
    const double g_star = g_oracle(rel.y, c, s);
    const double gap = (g_star - best_g) / (1.0 + std::abs(best_g));
    worst_gap = std::max(worst_gap, gap);
    double realized = 0.0;
    int fractional = 0;
    for (std::size_t u = 0; u < n; ++u) {
      realized += rel.x[u] * c.sizes[u];
      if (rel.x[u] > 0.0 && rel.x[u] < 1.0) ++fractional;
    }
    const bool close = std::abs(rel.y - best_y) <= tol * s || gap <= 1e-9;
    if (!close || fractional > 1 || std::abs(realized - rel.y) > 1e-9 * s) ++bad;
  }
  r.passed = bad == 0;
  r.detail = format("1000 contexts, mismatches %d, worst objective excess over grid %.3e", bad, worst_gap);
  return r;
}

CriterionResult drift_inequality(const Options& opt) {
  CriterionResult r{4, "drift inequality", false, {}, 0.0};
  SimConfig cfg = desk_config();
  cfg.rng_seed = opt.seed;
  cfg.validation_mode = true;
  cfg.policy = Policy::kOjcta;
  int run_violations = -1;
  std::string run_error;
  try {
    run_violations = run_simulation(cfg).summary.drift_violations;
  } catch (const Error& e) {
    run_error = e.what();
  }
  Stream rng(opt.seed, 4, Purpose::kFuzz, 0);
  int fuzz_fail = 0;
  int oracle_fail = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t m = 1 + rng.index(3);
    std::vector<QueueState> before(m);
    std::vector<Arrivals> arr(m);
    std::vector<ServerParams> par(m);
    for (std::size_t k = 0; k < m; ++k) {
      QueueState& q = before[k];
      q.slots = static_cast<int>(rng.index(100));
      q.hist_e = q.slots ? rng.uniform(0.0, 5.0 * q.slots) : 0.0;
      q.hist_c = q.slots ? rng.uniform(0.0, 5.0 * q.slots) : 0.0;
      q.q_e = q.hist_e > 0.0 ? rng.uniform(0.0, q.hist_e) : 0.0;
      q.q_c = q.hist_c > 0.0 ? rng.uniform(0.0, q.hist_c) : 0.0;
      q.z_e = rng.bernoulli(0.3) ? 0.0 : rng.uniform(0.0, 50.0);
      q.z_c = rng.bernoulli(0.3) ? 0.0 : rng.uniform(0.0, 50.0);
      arr[k] = {rng.bernoulli(0.2) ? 0.0 : rng.uniform(0.0, 10.0),
                rng.bernoulli(0.2) ? 0.0 : rng.uniform(0.0, 10.0)};
      par[k] = {rng.uniform(0.0, 8.0), rng.uniform(0.0, 8.0), rng.uniform(0.0, 5.0),
                rng.uniform(0.0, 5.0)};
    }
    std::vector<QueueState> after(m);
    double drift = 0.0;
    double rhs = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      after[k] = advance_queues(before[k], arr[k], par[k]);
      const QueueState& b = before[k];
      const QueueState& a = after[k];
      const int t = b.slots + 1;
      const double re = b.hist_e + arr[k].edge > 0.0 ? b.q_e * t / (b.hist_e + arr[k].edge) : 0.0;
      const double rc = b.hist_c + arr[k].cloud > 0.0 ? b.q_c * t / (b.hist_c + arr[k].cloud) : 0.0;
      drift += 0.5 * (a.q_e * a.q_e - b.q_e * b.q_e + a.q_c * a.q_c - b.q_c * b.q_c +
                      a.z_e * a.z_e - b.z_e * b.z_e + a.z_c * a.z_c - b.z_c * b.z_c);
      rhs += 0.5 * (arr[k].edge * arr[k].edge + par[k].edge_service * par[k].edge_service +
                    arr[k].cloud * arr[k].cloud + par[k].cloud_service * par[k].cloud_service +
                    re * re + par[k].delay_bound_edge * par[k].delay_bound_edge + rc * rc +
                    par[k].delay_bound_cloud * par[k].delay_bound_cloud) +
             b.q_e * (arr[k].edge - par[k].edge_service) + b.q_c * (arr[k].cloud - par[k].cloud_service) +
             b.z_e * (re - par[k].delay_bound_edge) + b.z_c * (rc - par[k].delay_bound_cloud);
    }
    const LyapunovSnapshot snap = lyapunov_accounting(before, after, arr, par, 0.0, 1.0);
    if (!snap.holds) ++fuzz_fail;
    if (drift > rhs + 1e-9 * (1.0 + std::abs(rhs))) ++oracle_fail;
  }
  r.passed = run_error.empty() && run_violations == 0 && fuzz_fail == 0 && oracle_fail == 0;
  r.detail = run_error.empty()
                 ? format("desk OJCTA run violations %d; 10000 fuzzed states: library %d, oracle %d",
                          run_violations, fuzz_fail, oracle_fail)
                 : "desk run aborted: " + run_error;
  return r;
}

CriterionResult matching_stability(const Options& opt) {
  CriterionResult r{5, "matching stability", false, {}, 0.0};
  Stream rng(opt.seed, 5, Purpose::kFuzz, 0);
  int unstable = 0;
  int over = 0;
  int lib_disagree = 0;
  int not_monotone = 0;
  long swaps = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng.index(15);
    const PhysServer p = random_server(rng, n);
    const int cap = static_cast<int>(rng.index(n + 1));
    const MatchingInstance inst = to_instance(p);
    const MatchResult m = stable_match(inst, cap);
    swaps += m.swaps;
    if (count_blocking(p, m.eta, cap) > 0) ++unstable;
    if (find_blocking_pair(inst, m.eta, cap)) ++lib_disagree;
    if (std::accumulate(m.x.begin(), m.x.end(), 0) > cap ||
        std::accumulate(m.eta.begin(), m.eta.end(), 0) > cap) {
      ++over;
    }
    if (!m.monotone || phys_energy(p, m.x) > phys_energy(p, m.eta) * (1.0 + 1e-12)) ++not_monotone;
  }
  r.passed = unstable == 0 && over == 0 && lib_disagree == 0 && not_monotone == 0;
  r.detail = format(
      "200 instances, %ld accepted swaps; unstable %d, over capacity %d, library scan hits %d, "
      "non-monotone %d",
      swaps, unstable, over, lib_disagree, not_monotone);
  return r;
}

CriterionResult two_stage_gap(const Options& opt) {
  CriterionResult r{6, "two-stage vs brute force", false, {}, 0.0};
  Stream rng(opt.seed, 6, Purpose::kFuzz, 0);
  std::vector<double> gaps;
  int worse_than_local = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + rng.index(10);
    const PhysServer p = random_server(rng, n);
    const ServerSlot s = random_slot(rng, p);
    const TwoStageResult ts = two_stage(s, TwoStageOptions{});
    const double j = phys_objective(p, s, ts.decision.x_m, ts.decision.x_c);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> xm(n);
    std::vector<int> xc(n);
    int total = 1;
    for (std::size_t u = 0; u < n; ++u) total *= 3;
    for (int code = 0; code < total; ++code) {
      int c = code;
      int k = 0;
      bool ok = true;
      for (std::size_t u = 0; u < n; ++u) {
        const int d = c % 3;
        c /= 3;
        xm[u] = d > 0;
        xc[u] = d == 2;
        k += xm[u];
        if (xm[u] && p.uds[u].dead()) ok = false;
      }
      if (!ok || k > s.capacity) continue;
      best = std::min(best, phys_objective(p, s, xm, xc));
    }
    const std::vector<int> zero(n, 0);
    if (j > phys_objective(p, s, zero, zero) * (1.0 + 1e-12)) ++worse_than_local;
    gaps.push_back((j - best) / std::abs(best));
  }
  std::vector<double> sorted = gaps;
  std::sort(sorted.begin(), sorted.end());
  const double median = 0.5 * (sorted[49] + sorted[50]);
  r.passed = median <= 0.10 && worse_than_local == 0;
  r.detail = format("100 instances, median gap %.4f%%, p90 %.4f%%, max %.4f%%, worse than all-local %d",
                    100.0 * median, 100.0 * sorted[90], 100.0 * sorted.back(), worse_than_local);
  return r;
}

CriterionResult policy_ordering(const Options& opt) {
  CriterionResult r{7, "policy ordering", false, {}, 0.0};
  SimConfig cfg = desk_config();
  const std::vector<Policy> all(kAllPolicies.begin(), kAllPolicies.end());
  std::vector<double> energy(all.size(), 0.0);
  const int reps = 5;
  for (int rep = 0; rep < reps; ++rep) {
    cfg.rng_seed = derive_seed(opt.seed, static_cast<std::uint64_t>(rep));
    const std::vector<RunResult> res = run_policies(cfg, all, rep);
    for (std::size_t k = 0; k < all.size(); ++k) energy[k] += res[k].summary.avg_energy / reps;
  }
  auto e = [&](Policy p) { return energy[static_cast<std::size_t>(p)]; };
  const double oj = e(Policy::kOjcta);
  std::string failed;
  for (Policy p : {Policy::kLc, Policy::kRo, Policy::kSsc, Policy::kNcc, Policy::kGjtora}) {
    if (oj > e(p)) failed += std::string(" OJCTA>") + std::string(policy_name(p));
  }
  if (e(Policy::kEcf) > oj) failed += " ECF>OJCTA";
  const double vs_lc = 100.0 * (e(Policy::kLc) - oj) / e(Policy::kLc);
  if (!(vs_lc > 15.0)) failed += " reduction-vs-LC<=15%";
  std::string detail = "mean energy per slot (J):";
  for (Policy p : all) detail += format(" %s=%.4f", std::string(policy_name(p)).c_str(), e(p));
  detail += "; OJCTA reduction:";
  for (Policy p : all) {
    if (p == Policy::kOjcta) continue;
    detail += format(" vs %s %.2f%%", std::string(policy_name(p)).c_str(), 100.0 * (e(p) - oj) / e(p));
  }
  if (!failed.empty()) detail += "; failed:" + failed;
  r.passed = failed.empty();
  r.detail = detail;
  return r;
}

CriterionResult delay_stability(const Options& opt) {
  CriterionResult r{8, "delay stability", false, {}, 0.0};
  SimConfig cfg = desk_config();
  cfg.horizon = 200;
  const int reps = 5;
  int within = 0;
  int exceeded = 0;
  double worst_e = 0.0;
  double worst_c = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    cfg.rng_seed = derive_seed(opt.seed, static_cast<std::uint64_t>(rep));
    const std::vector<RunResult> res =
        run_policies(cfg, {Policy::kOjcta, Policy::kEcf, Policy::kRo}, rep);
    std::vector<double> de;
    std::vector<double> dc;
    for (const SlotMetrics& row : res[0].table.rows) {
      if (row.t <= cfg.horizon / 2) continue;
      de.push_back(mean(row.delay_e));
      dc.push_back(mean(row.delay_c));
    }
    const double me = mean(de);
    const double mc = mean(dc);
    worst_e = std::max(worst_e, me);
    worst_c = std::max(worst_c, mc);
    if (me <= 1.10 * cfg.delay_bound_edge && mc <= 1.10 * cfg.delay_bound_cloud) ++within;
    const double oj = res[0].summary.avg_delay_e;
    if (res[1].summary.avg_delay_e > oj || res[2].summary.avg_delay_e > oj) ++exceeded;
  }
  r.passed = within == reps && exceeded >= 4;
  r.detail = format(
      "OJCTA final-half delay within 1.10 bound in %d/%d reps (worst edge %.3f, cloud %.3f, bound "
      "%.3f); ECF or RO above OJCTA edge delay in %d/%d",
      within, reps, worst_e, worst_c, 1.10 * cfg.delay_bound_edge, exceeded, reps);
  return r;
}

CriterionResult v_trend(const Options& opt) {
  CriterionResult r{9, "V trend", false, {}, 0.0};
  SimConfig cfg = desk_config();
  cfg.rng_seed = opt.seed;
  const std::vector<double> vs = {5.0, 10.0, 20.0, 40.0};
  const std::vector<SweepRow> rows = sweep(cfg, SweepAxis::kV, vs, 5, {Policy::kOjcta});
  std::vector<double> energy(vs.size(), 0.0);
  std::vector<double> backlog(vs.size(), 0.0);
  std::vector<int> n(vs.size(), 0);
  for (const SweepRow& row : rows) {
    const auto k = static_cast<std::size_t>(std::find(vs.begin(), vs.end(), row.value) - vs.begin());
    energy[k] += row.summary.avg_energy;
    backlog[k] += row.summary.mean_z_backlog;
    ++n[k];
  }
  for (std::size_t k = 0; k < vs.size(); ++k) {
    energy[k] /= n[k];
    backlog[k] /= n[k];
  }
  const double rho_e = spearman(vs, energy);
  const double rho_z = spearman(vs, backlog);
  r.passed = rho_e <= 0.0 && rho_z >= 0.0;
  r.detail = format(
      "energy %.4f/%.4f/%.4f/%.4f (rho %.2f); Z backlog %.3f/%.3f/%.3f/%.3f (rho %.2f)", energy[0],
      energy[1], energy[2], energy[3], rho_e, backlog[0], backlog[1], backlog[2], backlog[3], rho_z);
  return r;
}

std::string file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CriterionResult determinism(const Options& opt) {
  CriterionResult r{10, "determinism", false, {}, 0.0};
  SimConfig cfg = desk_config();
  cfg.rng_seed = opt.seed;
  const std::vector<Policy> all(kAllPolicies.begin(), kAllPolicies.end());
  const auto base = std::filesystem::temp_directory_path() /
                    ("mecsim_det_" + std::to_string(opt.seed) + "_" +
                     std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  std::string outputs[3];
  const int threads[3] = {1, 1, std::max(2, opt.threads)};
  for (int k = 0; k < 3; ++k) {
    SimConfig c = cfg;
    c.threads = threads[k];
    const auto dir = base / std::to_string(k);
    write_run(dir.string(), run_policies(c, all), c);
    outputs[k] = file_bytes(dir / "slots.csv");
  }
  std::error_code ec;
  std::filesystem::remove_all(base, ec);
  const bool repeat = outputs[0] == outputs[1];
  const bool threaded = outputs[0] == outputs[2];
  r.passed = repeat && threaded && !outputs[0].empty();
  r.detail = format("slots.csv %zu bytes; repeat run identical: %s; %d-thread run identical: %s",
                    outputs[0].size(), repeat ? "yes" : "no", threads[2], threaded ? "yes" : "no");
  return r;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  if (a.size() != b.size() || a.size() < 2) return 0.0;
  const std::vector<double> ra = ranks(a);
  const std::vector<double> rb = ranks(b);
  const double ma = mean(ra);
  const double mb = mean(rb);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

CriterionResult run_criterion(int id, const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    switch (id) {
      case 1: r = allocation_optimality(opt); break;
      case 2: r = rounding_properties(opt); break;
      case 3: r = relaxation_oracle(opt); break;
      case 4: r = drift_inequality(opt); break;
      case 5: r = matching_stability(opt); break;
      case 6: r = two_stage_gap(opt); break;
      case 7: r = policy_ordering(opt); break;
      case 8: r = delay_stability(opt); break;
      case 9: r = v_trend(opt); break;
      case 10: r = determinism(opt); break;
      default: throw ContractError("no criterion " + std::to_string(id));
    }
  } catch (const ContractError&) {
    throw;
  } catch (const std::exception& e) {
    r.id = id;
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double budget[kCriterionCount] = {5.0, 10.0, 10.0, 0.0, 0.0, 60.0, 0.0, 0.0, 0.0, 0.0};
  const double limit = budget[id - 1];
  if (limit > 0.0) {
    r.detail += format("; %.2fs (budget %.0fs)", r.seconds, limit);
    if (r.seconds >= limit) r.passed = false;
  }
  return r;
}

std::vector<CriterionResult> run_all(const Options& opt,
                                     const std::function<void(const CriterionResult&)>& progress) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) {
    out.push_back(run_criterion(id, opt));
    if (progress) progress(out.back());
  }
  return out;
}

}  // namespace mecsim::validation
