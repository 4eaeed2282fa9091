#pragma once

#include <span>
#include <vector>

namespace mecsim {

/// Bandwidth split among one server's offloaders.
struct AllocationInstance {
  std::vector<double> betas;  // one per offloader, > 0
  double bandwidth = 1.0;
  double v = 1.0;
  double phi = 0.0;
};

/// a_u = sqrt(beta_u) / sum sqrt(beta). Throws ContractError on beta <= 0.
std::vector<double> optimal_allocation(const AllocationInstance& inst);

/// Stationarity of the Lagrangian (lambda_u = V beta_u / (a_u^2 B) all equal
/// within `tol` relative to their scale) plus complementary slackness.
bool verify_kkt(const AllocationInstance& inst, std::span<const double> a, double tol);

/// sum V beta_u / (a_u B) + phi. Throws InfeasibleError if some a_u is 0.
double allocation_objective(const AllocationInstance& inst, std::span<const double> a);

/// (sum sqrt(beta))^2 / B, the offload energy under the optimal split.
double optimal_offload_energy(std::span<const double> betas, double bandwidth);

}  // namespace mecsim
