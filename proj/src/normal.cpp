#include "fbmruin/normal.hpp"

#include <cmath>
#include <numbers>

namespace fbmruin {
namespace {

constexpr double kContinuedFractionCutoff = 8.0;

// Laplace continued fraction for Psi(x) / phi(x), evaluated bottom-up.
// At x > 8 sixty terms exceed double precision.
double mills_ratio(double x) {
  double tail = x;
  for (int k = 60; k >= 1; --k) tail = x + k / tail;
  return 1.0 / tail;
}

}  // namespace

double normal_tail(double x) {
  if (x > kContinuedFractionCutoff) return std::exp(log_normal_tail(x));
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double normal_cdf(double x) { return normal_tail(-x); }

double log_normal_tail(double x) {
  if (x <= kContinuedFractionCutoff) return std::log(0.5 * std::erfc(x / std::numbers::sqrt2));
  const double log_phi = -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi);
  return log_phi + std::log(mills_ratio(x));
}

}  // namespace fbmruin
