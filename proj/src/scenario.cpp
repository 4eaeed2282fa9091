#include "mecsim/scenario.hpp"

#include <cmath>
#include <numbers>

namespace mecsim {


World build_world(const SimConfig& config) {
  validate(config);
  World w;
  w.config = config;
  const int m = config.num_servers;
  const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m))));
  const double cell = config.area_side / side;
  for (int i = 0; i < m; ++i) {
    w.server_positions.push_back({(i % side + 0.5) * cell, (i / side + 0.5) * cell});
  }
  w.coverage.resize(m);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < config.uds_per_server; ++k) {
      UdState ud;
      ud.id = static_cast<int>(w.uds.size());
      ud.home = i;
      Stream rng(config.rng_seed, static_cast<std::uint64_t>(ud.id), Purpose::kPlacement, 0);
      const double angle = rng.uniform(0.0, two_pi);
      const double dist = rng.uniform(config.distance_range.min, config.distance_range.max);
      const double heading = rng.uniform(0.0, two_pi);
      ud.motion.position = w.server_positions[i] + Vec2{dist * std::cos(angle), dist * std::sin(angle)};
      ud.motion.mean_velocity = {config.mobility_mean_speed * std::cos(heading),
                                 config.mobility_mean_speed * std::sin(heading)};
      ud.motion.velocity = ud.motion.mean_velocity;
      ud.motion.memory = config.mobility_memory;
      ud.motion.noise_sigma = config.mobility_sigma;

      Stream prof(config.rng_seed, static_cast<std::uint64_t>(ud.id), Purpose::kProfile, 0);
      ud.profile.cpu = prof.uniform(config.ud_cpu_range.min, config.ud_cpu_range.max);
      ud.profile.transmit_power =
          prof.uniform(config.transmit_power_range.min, config.transmit_power_range.max);
      ud.profile.capacitance = config.capacitance;
      w.coverage[i].push_back(ud.id);
      w.uds.push_back(ud);
    }
  }
  return w;
}

Task sample_task(const SimConfig& config, int ud_id, int t) {
  Stream rng(config.rng_seed, static_cast<std::uint64_t>(ud_id), Purpose::kTask,
             static_cast<std::uint64_t>(t));
  return Task{rng.uniform(config.task_size_range.min, config.task_size_range.max),
              config.computation_intensity};
}

ChannelRealization sample_channel(const SimConfig& config, const World& world, int ud_id, int t) {
  const UdState& ud = world.uds[ud_id];
  const auto slot = static_cast<std::uint64_t>(t);
  const auto entity = static_cast<std::uint64_t>(ud_id);
  Stream shadow(config.rng_seed, entity, Purpose::kShadow, slot);
  Stream fading(config.rng_seed, entity, Purpose::kSmallScale, slot);
  ChannelRealization ch;
  ch.distance = norm(ud.motion.position - world.server_positions[ud.home]);
  const PathLossParams pl{config.carrier_freq, config.ref_distance, config.path_loss_exp};
  ch.large_scale = large_scale_loss(ch.distance, pl, config.shadow_sigma * shadow.normal());
  ch.small_scale = sample_small_scale(config.rayleigh_alpha, fading);
  ch.gain = ch.small_scale * ch.small_scale / ch.large_scale;
  return ch;
}

void step_world_mobility(World& world, int t) {
  for (UdState& ud : world.uds) {
    Stream rng(world.config.rng_seed, static_cast<std::uint64_t>(ud.id), Purpose::kMobility,
               static_cast<std::uint64_t>(t));
    ud.motion = step_mobility(ud.motion, world.config.slot_duration, rng);
  }
}

}  // namespace mecsim
