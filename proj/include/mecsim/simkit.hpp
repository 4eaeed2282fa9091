#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mecsim/config.hpp"

namespace mecsim {

/// One row per (slot, policy, run). Queue lengths in bits, virtual queues and
/// delays in slots.
struct SlotMetrics {
  int t = 0;
  std::string policy;
  int run = 0;
  double total_energy = 0.0;
  double objective = 0.0;
  int violations = 0;       // queues whose realized delay exceeded the bound
  int deadline_misses = 0;  // local tasks needing more than one slot of CPU
  double bound_b = 0.0;
  std::vector<double> q_e, q_c, z_e, z_c, delay_e, delay_c;
  std::vector<int> capacity;  // chosen connection count per server
};

struct SlotTable {
  int num_servers = 0;
  std::vector<SlotMetrics> rows;
};

struct RunSummary {
  std::string policy;
  int run = 0;
  std::uint64_t seed = 0;
  int slots = 0;
  double avg_energy = 0.0;  // J per slot, all UDs
  double avg_delay_e = 0.0;
  double avg_delay_c = 0.0;
  double avg_objective = 0.0;
  double mean_bound_b = 0.0;
  double mean_z_backlog = 0.0;  // sum over servers of Z_E + Z_C
  int drift_violations = 0;
  int distance_clamps = 0;
  double wall_time = 0.0;  // seconds
};

struct RunResult {
  SlotTable table;
  RunSummary summary;
};

/// Runs `cfg.policy` over the horizon. `run` labels the rows.
RunResult run_simulation(const SimConfig& cfg, int run = 0);

/// Runs each policy on the same seed (paired draws).
std::vector<RunResult> run_policies(const SimConfig& cfg, const std::vector<Policy>& policies,
                                    int run = 0);

/// Column means of a table (wall_time left at 0).
RunSummary summarize(const SlotTable& table, const std::string& policy, int run);

std::string slots_to_csv(const SlotTable& table);
SlotTable slots_from_csv(const std::string& text);
void write_slots_csv(const SlotTable& table, const std::string& path);

std::string summaries_to_json(const std::vector<RunSummary>& runs, const SimConfig& cfg);
std::vector<RunSummary> summaries_from_json(const std::string& text);

/// Markdown comparison: per-policy means and OJCTA's energy reduction against
/// every other policy present.
std::string render_report(const std::vector<RunSummary>& runs);

/// Writes slots.csv, summary.json and report.md into `dir` (created if needed).
void write_run(const std::string& dir, const std::vector<RunResult>& results, const SimConfig& cfg);

/// Reads summary.json from `dir` and renders the report.
std::string report_from_dir(const std::string& dir);

enum class SweepAxis { kV, kBandwidth, kCapacity, kUdCount };

SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis axis);
void apply_axis(SimConfig& cfg, SweepAxis axis, double value);

struct SweepRow {
  std::string axis;
  double value = 0.0;
  int replication = 0;
  std::uint64_t seed = 0;
  RunSummary summary;
};

/// One row per (value, policy, replication). Replication r uses
/// derive_seed(cfg.rng_seed, r) for every policy. Points run on up to
/// `cfg.threads` workers; rows come back sorted.
std::vector<SweepRow> sweep(const SimConfig& cfg, SweepAxis axis, const std::vector<double>& values,
                            int replications, const std::vector<Policy>& policies);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace mecsim
