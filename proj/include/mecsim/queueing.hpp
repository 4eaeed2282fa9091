#pragma once

#include <span>
#include <vector>

namespace mecsim {

/// Per-slot service and delay bounds of one server, in the same data unit as
/// the queues it drives.
struct ServerParams {
  double edge_service = 0.0;   // f_m delta / rho
  double cloud_service = 0.0;  // r_m^c delta
  double delay_bound_edge = 0.0;
  double delay_bound_cloud = 0.0;
};

/// Task queues, virtual queues and arrival histories of one server.
/// Functions here are unit-agnostic: callers choose bits or a scaled unit.
struct QueueState {
  double q_e = 0.0;
  double q_c = 0.0;
  double z_e = 0.0;
  double z_c = 0.0;
  double hist_e = 0.0;  // sum of past edge arrivals
  double hist_c = 0.0;
  int slots = 0;  // completed slots
  std::vector<double> delay_e;  // realized Q / A-tilde per slot
  std::vector<double> delay_c;
};

struct Arrivals {
  double edge = 0.0;
  double cloud = 0.0;
};

/// Splits offloaded bits into edge and cloud arrivals. Throws ContractError
/// when a task is sent to the cloud without being offloaded.
Arrivals split_arrivals(std::span<const int> x_m, std::span<const int> x_c,
                        std::span<const double> sizes);

/// Q / ((hist + arrival) / t) with 0/0 := 0.
double delay_ratio(double q, double hist, double arrival, int t);

/// Delay ratios of the current slot (pre-update backlog over A-tilde including
/// this slot's arrivals).
Arrivals current_delays(const QueueState& s, const Arrivals& a);

/// One slot of queue dynamics. Appends the realized delay samples.
QueueState advance_queues(const QueueState& s, const Arrivals& a, const ServerParams& p);

struct DelayMetrics {
  double edge = 0.0;
  double cloud = 0.0;
};

/// Means of the recorded samples (from slot `from`, 0-based). Zero when empty.
DelayMetrics delay_metrics(const QueueState& s, std::size_t from = 0);

struct LyapunovSnapshot {
  double value = 0.0;        // L after the update
  double drift = 0.0;        // L(t+1) - L(t)
  double penalty = 0.0;      // V * energy
  double bound_b = 0.0;      // realized B_t
  double rhs = 0.0;          // B_t + sum of weighted deltas
  bool holds = true;
};

double lyapunov_value(std::span<const QueueState> servers);

/// Checks the realized per-slot drift bound over all servers. `before` and
/// `after` are consecutive states, `arrivals` the arrivals in between.
LyapunovSnapshot lyapunov_accounting(std::span<const QueueState> before,
                                     std::span<const QueueState> after,
                                     std::span<const Arrivals> arrivals,
                                     std::span<const ServerParams> params, double slot_energy,
                                     double v);

}  // namespace mecsim
