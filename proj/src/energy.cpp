#include "mecsim/energy.hpp"

#include "mecsim/error.hpp"

namespace mecsim {

double local_energy(const UdProfile& ud, const Task& task, bool offload) {
  if (offload) return 0.0;
  return ud.capacitance * ud.cpu * ud.cpu * task.size * task.intensity;
}

double offload_energy(double power, double size, double rate, bool offload) {
  if (!offload) return 0.0;
  if (!(rate > 0.0)) throw InfeasibleError("offloading over a zero-rate link");
  return power * size / rate;
}

}  // namespace mecsim
