#include "mecsim/queueing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mecsim/error.hpp"

namespace mecsim {

Arrivals split_arrivals(std::span<const int> x_m, std::span<const int> x_c,
                        std::span<const double> sizes) {
  if (x_m.size() != sizes.size() || x_c.size() != sizes.size()) {
    throw ContractError("split_arrivals: length mismatch");
  }
  Arrivals a;
  for (std::size_t u = 0; u < sizes.size(); ++u) {
    if (x_c[u] > x_m[u]) throw ContractError("cloud offload without MEC offload");
    a.edge += (x_m[u] - x_c[u]) * sizes[u];
    a.cloud += x_c[u] * sizes[u];
  }
  return a;
}

double delay_ratio(double q, double hist, double arrival, int t) {
  const double rate_sum = hist + arrival;
  if (rate_sum <= 0.0) return 0.0;
  return q * t / rate_sum;
}

Arrivals current_delays(const QueueState& s, const Arrivals& a) {
  const int t = s.slots + 1;
  return {delay_ratio(s.q_e, s.hist_e, a.edge, t), delay_ratio(s.q_c, s.hist_c, a.cloud, t)};
}

QueueState advance_queues(const QueueState& s, const Arrivals& a, const ServerParams& p) {
  QueueState n = s;
  const Arrivals d = current_delays(s, a);
  n.q_e = std::max(s.q_e - p.edge_service, 0.0) + a.edge;
  n.q_c = std::max(s.q_c - p.cloud_service, 0.0) + a.cloud;
  n.z_e = std::max(s.z_e + d.edge - p.delay_bound_edge, 0.0);
  n.z_c = std::max(s.z_c + d.cloud - p.delay_bound_cloud, 0.0);
  n.hist_e += a.edge;
  n.hist_c += a.cloud;
  n.slots += 1;
  n.delay_e.push_back(d.edge);
  n.delay_c.push_back(d.cloud);
  return n;
}

DelayMetrics delay_metrics(const QueueState& s, std::size_t from) {
  auto mean = [from](const std::vector<double>& v) {
    if (from >= v.size()) return 0.0;
    const double sum = std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(from), v.end(), 0.0);
    return sum / static_cast<double>(v.size() - from);
  };
  return {mean(s.delay_e), mean(s.delay_c)};
}

double lyapunov_value(std::span<const QueueState> servers) {
  double l = 0.0;
  for (const QueueState& s : servers) {
    l += s.q_e * s.q_e + s.q_c * s.q_c + s.z_e * s.z_e + s.z_c * s.z_c;
  }
  return 0.5 * l;
}

LyapunovSnapshot lyapunov_accounting(std::span<const QueueState> before,
                                     std::span<const QueueState> after,
                                     std::span<const Arrivals> arrivals,
                                     std::span<const ServerParams> params, double slot_energy,
                                     double v) {
  if (before.size() != after.size() || before.size() != arrivals.size() ||
      before.size() != params.size()) {
    throw ContractError("lyapunov_accounting: server count mismatch");
  }
  LyapunovSnapshot snap;
  const double l0 = lyapunov_value(before);
  snap.value = lyapunov_value(after);
  snap.drift = snap.value - l0;
  snap.penalty = v * slot_energy;
  double weighted = 0.0;
  double scale = 0.0;
  for (std::size_t m = 0; m < before.size(); ++m) {
    const QueueState& s = before[m];
    const Arrivals& a = arrivals[m];
    const ServerParams& p = params[m];
    const Arrivals r = current_delays(s, a);
    snap.bound_b += 0.5 * (a.edge * a.edge + p.edge_service * p.edge_service + a.cloud * a.cloud +
                           p.cloud_service * p.cloud_service + r.edge * r.edge +
                           p.delay_bound_edge * p.delay_bound_edge + r.cloud * r.cloud +
                           p.delay_bound_cloud * p.delay_bound_cloud);
    weighted += s.q_e * (a.edge - p.edge_service) + s.q_c * (a.cloud - p.cloud_service) +
                s.z_e * (r.edge - p.delay_bound_edge) + s.z_c * (r.cloud - p.delay_bound_cloud);
    scale += s.q_e * s.q_e + s.q_c * s.q_c + s.z_e * s.z_e + s.z_c * s.z_c;
  }
  snap.rhs = snap.bound_b + weighted;
  scale += snap.bound_b + std::abs(weighted) + snap.value;
  snap.holds = snap.drift <= snap.rhs + 1e-12 * scale;
  return snap;
}

}  // namespace mecsim
