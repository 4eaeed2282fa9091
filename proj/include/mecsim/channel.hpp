#pragma once

#include <limits>

#include "mecsim/rng.hpp"

namespace mecsim {

inline constexpr double kSpeedOfLight = 3e8;

/// beta value marking a link that cannot carry any data (g == 0).
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct PathLossParams {
  double carrier_freq = 2.4e9;
  double ref_distance = 1.0;
  double path_loss_exp = 3.0;
};

struct ChannelRealization {
  double small_scale = 0.0;  // h
  double large_scale = 1.0;  // L
  double gain = 0.0;         // h^2 / L
  double distance = 0.0;
};

/// (4 pi d0 fc / c)^2 (d/d0)^beta 10^(chi/10). `d` below d0 is clamped.
double large_scale_loss(double d, const PathLossParams& p, double shadow_db = 0.0);

/// Rayleigh amplitude with scale alpha, by inverse CDF.
double sample_small_scale(double alpha, Stream& rng);

/// log2(1 + p g / N0).
double spectral_efficiency(double p, double g, double n0);

/// a B log2(1 + p g / N0).
double transmission_rate(double a, double bandwidth, double p, double g, double n0);

/// p s / log2(1 + p g / N0); kUnreachable when the SNR is zero.
double beta_coefficient(double p, double s, double g, double n0);

inline bool unreachable(double beta) noexcept { return beta == kUnreachable; }

}  // namespace mecsim
