#include "mecsim/allocation.hpp"

#include <algorithm>
#include <cmath>

#include "mecsim/error.hpp"

namespace mecsim {

std::vector<double> optimal_allocation(const AllocationInstance& inst) {
  double total = 0.0;
  std::vector<double> a(inst.betas.size());
  for (std::size_t u = 0; u < a.size(); ++u) {
    if (!(inst.betas[u] > 0.0) || !std::isfinite(inst.betas[u])) {
      throw ContractError("allocation needs finite beta > 0");
    }
    a[u] = std::sqrt(inst.betas[u]);
    total += a[u];
  }
  for (double& x : a) x /= total;
  return a;
}

bool verify_kkt(const AllocationInstance& inst, std::span<const double> a, double tol) {
  if (a.size() != inst.betas.size()) return false;
  if (a.empty()) return true;
  double lo = 0.0;
  double hi = 0.0;
  double sum = 0.0;
  for (std::size_t u = 0; u < a.size(); ++u) {
    if (!(a[u] > 0.0)) return false;
    const double lambda = inst.v * inst.betas[u] / (a[u] * a[u] * inst.bandwidth);
    lo = u == 0 ? lambda : std::min(lo, lambda);
    hi = u == 0 ? lambda : std::max(hi, lambda);
    sum += a[u];
  }
  if (lo < 0.0) return false;
  if (hi - lo > tol * hi) return false;
  return std::abs(sum - 1.0) <= tol || hi == 0.0;
}

double allocation_objective(const AllocationInstance& inst, std::span<const double> a) {
  double j = inst.phi;
  for (std::size_t u = 0; u < inst.betas.size(); ++u) {
    if (!(a[u] > 0.0)) throw InfeasibleError("offloader with zero bandwidth");
    j += inst.v * inst.betas[u] / (a[u] * inst.bandwidth);
  }
  return j;
}

double optimal_offload_energy(std::span<const double> betas, double bandwidth) {
  double s = 0.0;
  for (double b : betas) s += std::sqrt(b);
  return s * s / bandwidth;
}

}  // namespace mecsim
