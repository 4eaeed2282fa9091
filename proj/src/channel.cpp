#include "mecsim/channel.hpp"

#include <cmath>
#include <numbers>

namespace mecsim {

double large_scale_loss(double d, const PathLossParams& p, double shadow_db) {
  const double dist = std::max(d, p.ref_distance);
  const double fs = 4.0 * std::numbers::pi * p.ref_distance * p.carrier_freq / kSpeedOfLight;
  return fs * fs * std::pow(dist / p.ref_distance, p.path_loss_exp) *
         std::pow(10.0, shadow_db / 10.0);
}

double sample_small_scale(double alpha, Stream& rng) {
  return alpha * std::sqrt(-2.0 * std::log1p(-rng.uniform()));
}

double spectral_efficiency(double p, double g, double n0) {
  return std::log2(1.0 + p * g / n0);
}

double transmission_rate(double a, double bandwidth, double p, double g, double n0) {
  if (a == 0.0) return 0.0;
  return a * bandwidth * spectral_efficiency(p, g, n0);
}

double beta_coefficient(double p, double s, double g, double n0) {
  const double se = spectral_efficiency(p, g, n0);
  if (!(se > 0.0)) return kUnreachable;
  return p * s / se;
}

}  // namespace mecsim
