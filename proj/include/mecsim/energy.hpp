#pragma once

namespace mecsim {

struct UdProfile {
  double cpu = 1e9;  // f_u
  double capacitance = 1e-28;
  double transmit_power = 0.1;
};

struct Task {
  double size = 0.0;  // bits
  double intensity = 1000.0;
};

/// (1 - x) zeta f^2 s rho.
double local_energy(const UdProfile& ud, const Task& task, bool offload);

/// x p s / r. Throws InfeasibleError when offloading over a zero rate.
double offload_energy(double power, double size, double rate, bool offload);

}  // namespace mecsim
