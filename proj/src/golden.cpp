#include "mecsim/golden.hpp"

#include <cmath>

namespace mecsim {

ScalarMin golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                  double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  ScalarMin best{lo, f(lo), 1};
  const double f_hi = f(hi);
  ++best.evaluations;
  if (f_hi < best.fx) best = {hi, f_hi, best.evaluations};
  if (hi - lo <= 0.0) return best;

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  best.evaluations += 2;
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++best.evaluations;
  }
  const double mid = 0.5 * (a + b);
  const double f_mid = f(mid);
  ++best.evaluations;
  if (f_mid <= best.fx) {
    best.x = mid;
    best.fx = f_mid;
  }
  return best;
}

}  // namespace mecsim
