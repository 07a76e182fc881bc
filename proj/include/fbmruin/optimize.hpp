#pragma once

#include <cmath>
#include <functional>

namespace fbmruin {

struct LineMinimum {
  double x;
  double value;
  int iterations;
};

/// Golden-section search for a minimum of f on [lo, hi]. Stops when the
/// bracket is narrower than rel_tol * max(1, |x|). Accepts +inf values, which
/// simply lose every comparison.
inline LineMinimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                           double rel_tol = 1e-8, int max_iterations = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  for (; it < max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= rel_tol * std::max(1.0, std::abs(mid))) break;
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return fc <= fd ? LineMinimum{c, fc, it} : LineMinimum{d, fd, it};
}

}  // namespace fbmruin
