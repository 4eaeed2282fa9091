#include "mecsim/mobility.hpp"

#include <cmath>

namespace mecsim {

double norm(Vec2 v) noexcept { return std::hypot(v.x, v.y); }

MobilityState step_mobility(const MobilityState& s, double delta, Stream& rng) {
  MobilityState next = s;
  const double w = s.memory;
  const double k = std::sqrt(std::max(0.0, 1.0 - w * w));
  Vec2 noise{s.noise_sigma * rng.normal(), s.noise_sigma * rng.normal()};
  if (w == 1.0) {
    next.velocity = s.velocity;
  } else {
    next.velocity = w * s.velocity + (1.0 - w) * s.mean_velocity + k * noise;
  }
  next.position = s.position + delta * s.velocity;
  return next;
}

}  // namespace mecsim
