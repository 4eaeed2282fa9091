#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mecsim {

/// Offloading policy run by the orchestrator.
enum class Policy { kOjcta, kLc, kRo, kEcf, kSsc, kNcc, kGjtora };

inline constexpr std::array<Policy, 7> kAllPolicies = {
    Policy::kOjcta, Policy::kLc, Policy::kRo, Policy::kEcf,
    Policy::kSsc,   Policy::kNcc, Policy::kGjtora};

std::string_view policy_name(Policy p) noexcept;
std::optional<Policy> parse_policy(std::string_view name) noexcept;

/// Closed interval [min, max].
struct Range {
  double min = 0.0;
  double max = 0.0;
  bool contains(double v) const noexcept { return v >= min && v <= max; }
};

struct GeneticParams {
  int population = 50;
  int generations = 100;
  int tournament = 3;
  double crossover = 0.8;
  double mutation = 0.05;
};

/// Full simulation configuration. Units: bits, Hz, W, m, s, cycles.
///
/// Defaults are the four-server profile (50 UDs per server, capacity 30,
/// 20 MHz, 5 GHz servers, 8 Mbit/s cloud link, -98 dBm noise). Delay bounds,
/// propagation and mobility defaults are listed in README.md.
struct SimConfig {
  int num_servers = 4;
  int uds_per_server = 50;
  double area_side = 500.0;
  int horizon = 200;
  double slot_duration = 1.0;
  double lyapunov_v = 10.0;
  int connection_capacity = 30;
  double bandwidth = 20e6;
  double server_cpu = 5e9;
  double cloud_rate = 8e6;
  double delay_bound_edge = 2.0;
  double delay_bound_cloud = 2.0;
  double computation_intensity = 1000.0;
  Range task_size_range{1e4, 1e6};
  Range ud_cpu_range{1e9, 2e9};
  Range transmit_power_range{0.1, 0.5};
  Range distance_range{50.0, 500.0};
  double capacitance = 1e-28;
  double noise_power = 1.5848931924611134e-13;  // -98 dBm
  double carrier_freq = 2.4e9;
  double ref_distance = 1.0;
  double path_loss_exp = 3.0;
  double shadow_sigma = 6.0;
  double rayleigh_alpha = 0.70710678118654752;
  double mobility_memory = 0.8;
  double mobility_sigma = 1.0;
  double mobility_mean_speed = 1.0;
  std::uint64_t rng_seed = 1;
  Policy policy = Policy::kOjcta;

  // Solver and run knobs.
  double queue_unit_bits = 1e6;
  int threads = 1;
  bool random_initial_matching = false;
  bool randomized_rounding = false;
  double relaxation_tol = 1e-6;
  bool validation_mode = false;
  GeneticParams genetic;

  double edge_service_bits() const noexcept {
    return server_cpu * slot_duration / computation_intensity;
  }
  double cloud_service_bits() const noexcept { return cloud_rate * slot_duration; }
};

/// Four servers, 50 UDs each, 200 slots.
SimConfig default_config();

/// Two servers with 20 UDs each over 50 slots. Per-server capacity, CPU and
/// cloud rate are scaled by 20/50 so the offered load matches the full profile.
SimConfig desk_config();

/// Throws ConfigError naming the first invalid field.
void validate(const SimConfig& cfg);

/// Parses a JSON object whose keys mirror SimConfig field names, overlaying
/// it on `base`. Unknown keys are rejected. The result is validated.
SimConfig config_from_json(std::string_view text, const SimConfig& base = default_config());
SimConfig load_config(const std::string& path, const SimConfig& base = default_config());
std::string config_to_json(const SimConfig& cfg, int indent = 2);

/// Sets one field from a JSON-encoded value (e.g. "12", "[1,2]", "\"RO\"").
void set_config_field(SimConfig& cfg, std::string_view key, std::string_view json_value);

}  // namespace mecsim
