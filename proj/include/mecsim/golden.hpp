#pragma once

#include <functional>

namespace mecsim {

struct ScalarMin {
  double x = 0.0;
  double fx = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a unimodal f on [lo, hi]. Stops once the bracket
/// is narrower than `tol`; the endpoints are compared against the interior
/// minimum so a monotone f returns the boundary exactly.
ScalarMin golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                  double tol);

}  // namespace mecsim
