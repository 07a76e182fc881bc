#pragma once

namespace fbmruin {

/// Standard normal upper tail P(N > x).
double normal_tail(double x);

/// log P(N > x), finite for every finite x (no underflow in the far tail).
double log_normal_tail(double x);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace fbmruin
