#pragma once

#include "mecsim/rng.hpp"

namespace mecsim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double k, Vec2 a) noexcept { return {k * a.x, k * a.y}; }
double norm(Vec2 v) noexcept;

/// Gauss-Markov mobility state of one UD.
struct MobilityState {
  Vec2 velocity;
  Vec2 position;
  Vec2 mean_velocity;
  double memory = 0.0;  // omega
  double noise_sigma = 0.0;
};

/// One slot of Gauss-Markov motion. The position advances with the
/// pre-update velocity.
MobilityState step_mobility(const MobilityState& s, double delta, Stream& rng);

}  // namespace mecsim
