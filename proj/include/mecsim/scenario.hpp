#pragma once

#include <cstdint>
#include <vector>

#include "mecsim/channel.hpp"
#include "mecsim/config.hpp"
#include "mecsim/energy.hpp"
#include "mecsim/mobility.hpp"

namespace mecsim {

struct UdState {
  int id = 0;
  int home = 0;  // server index
  MobilityState motion;
  UdProfile profile;
};

/// Static layout and device state. Queue state lives with the simulation.
struct World {
  SimConfig config;
  int clock = 1;
  std::vector<Vec2> server_positions;
  std::vector<UdState> uds;
  std::vector<std::vector<int>> coverage;  // UD ids per server
};

/// Validates `config` and places servers on a grid and UDs around their
/// home server.
World build_world(const SimConfig& config);

/// Task of UD `ud_id` in slot `t`, drawn from its own stream.
Task sample_task(const SimConfig& config, int ud_id, int t);

/// Draws the Rayleigh/shadowing realization between a UD and its home server.
ChannelRealization sample_channel(const SimConfig& config, const World& world, int ud_id, int t);

/// Advances every UD one slot.
void step_world_mobility(World& world, int t);

}  // namespace mecsim
