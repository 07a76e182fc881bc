#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fbmruin/normal.hpp"
#include "oracles.hpp"

using namespace fbmruin;

TEST_CASE("normal tail at reference points") {
  CHECK(normal_tail(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_tail(2.0) == doctest::Approx(0.022750131948179).epsilon(1e-12));
  CHECK(normal_tail(-1.0) == doctest::Approx(0.841344746068543).epsilon(1e-12));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.841344746068543).epsilon(1e-12));
}

TEST_CASE("normal tail matches quadrature on both sides of the series switch") {
  for (double x : {0.3, 1.7, 5.0, 7.99, 8.01, 9.5, 12.0}) {
    CAPTURE(x);
    const double ref = oracle::normal_tail_quadrature(x);
    CHECK(normal_tail(x) == doctest::Approx(ref).epsilon(1e-10));
    CHECK(log_normal_tail(x) == doctest::Approx(std::log(ref)).epsilon(1e-12));
  }
}

TEST_CASE("log tail stays finite where the tail underflows") {
  const double x = 60.0;
  CHECK(normal_tail(x) == 0.0);
  const double lead = -0.5 * x * x - std::log(x * std::sqrt(2.0 * std::numbers::pi));
  // Psi(x) = phi(x)/x (1 - 1/x^2 + 3/x^4 - ...)
  const double corr = std::log1p(-1.0 / (x * x) + 3.0 / std::pow(x, 4));
  CHECK(log_normal_tail(x) == doctest::Approx(lead + corr).epsilon(1e-12));
}

TEST_CASE("log tail for negative arguments") {
  CHECK(log_normal_tail(-3.0) == doctest::Approx(std::log1p(-0.0013498980316301)).epsilon(1e-12));
  CHECK(log_normal_tail(-50.0) == doctest::Approx(0.0));
}
