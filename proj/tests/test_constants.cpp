#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fbmruin/constants.hpp"
#include "fbmruin/errors.hpp"

using namespace fbmruin;

TEST_CASE("pickands exact values") {
  const auto half = pickands(HurstIndex(0.5));
  CHECK(half.value == 1.0);
  CHECK(half.method == ConstantMethod::exact);
  CHECK(half.std_error == 0.0);
  const auto one = pickands(HurstIndex(1.0));
  CHECK(one.value == 1.0 / std::sqrt(std::numbers::pi));
  CHECK(one.value == doctest::Approx(0.564190).epsilon(1e-6));
  CHECK(one.method == ConstantMethod::exact);
  CHECK(to_string(one.method) == "exact");
}

TEST_CASE("simulated pickands at H = 1 is exact path by path") {
  PickandsOptions o;
  o.force_simulation = true;
  o.replications = 2000;
  const auto e = pickands(HurstIndex(1.0), o);
  CHECK(e.method == ConstantMethod::simulated);
  CHECK(e.value == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-4));
}

TEST_CASE("simulated pickands at H = 1/2 on a coarse ladder") {
  PickandsOptions o;
  o.force_simulation = true;
  o.replications = 4000;
  o.truncation_T = 6.0;
  o.grid_delta = 0.01;
  const auto e = pickands(HurstIndex(0.5), o);
  CHECK(e.value > 0.85);
  CHECK(e.value < 1.05);
  CHECK(e.std_error > 0.0);
  CHECK(e.std_error < 0.02);
  CHECK(e.estimator == PickandsEstimator::sup_integral);
}

TEST_CASE("pickands decreases in H between the exact endpoints") {
  PickandsOptions o;
  o.replications = 2000;
  o.truncation_T = 6.0;
  o.grid_delta = 0.01;
  const double v = pickands(HurstIndex(0.75), o).value;
  CHECK(v < 1.0);
  CHECK(v > 1.0 / std::sqrt(std::numbers::pi));
}

TEST_CASE("truncated-mean estimator aggregates in log space") {
  PickandsOptions o;
  o.force_simulation = true;
  o.estimator = PickandsEstimator::truncated_mean;
  o.replications = 3000;
  o.truncation_T = 4.0;
  o.grid_delta = 0.01;
  const auto e = pickands(HurstIndex(0.5), o);
  CHECK(std::isfinite(e.value));
  CHECK(e.value > 0.0);
  CHECK(std::isfinite(e.std_error));
  CHECK(e.estimator == PickandsEstimator::truncated_mean);
}

TEST_CASE("pickands simulation options are validated") {
  PickandsOptions o;
  o.force_simulation = true;
  o.replications = 1;
  CHECK_THROWS_AS(pickands(HurstIndex(0.5), o), ValidationError);
  o.replications = 10;
  o.grid_delta = 20.0;
  CHECK_THROWS_AS(pickands(HurstIndex(0.5), o), ValidationError);
}

TEST_CASE("pickands simulation does not depend on threads") {
  PickandsOptions o;
  o.replications = 1500;
  o.truncation_T = 3.0;
  o.grid_delta = 0.02;
  const auto a = pickands(HurstIndex(0.3), o);
  o.threads = 3;
  const auto b = pickands(HurstIndex(0.3), o);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("piterbarg analytic values") {
  CHECK(piterbarg_h_half_analytic(2, 2) == doctest::Approx(8.0 / 3.0));
  CHECK(piterbarg_h_half_analytic(4.0 / 3.0, 4.0 / 3.0) == doctest::Approx(6.4));
  const auto e = piterbarg_h_half(2, 2);
  CHECK(e.value == e.analytic_value);
  CHECK(e.method == ConstantMethod::analytic);
  CHECK(to_string(e.method) == "analytic-h-half");
}

TEST_CASE("piterbarg analytic form: symmetry, monotonicity, divergence") {
  const double betas[] = {1.01, 1.2, 1.5, 2.0, 3.0, 7.0};
  for (double x : betas)
    for (double y : betas) {
      CHECK(piterbarg_h_half_analytic(x, y) == piterbarg_h_half_analytic(y, x));
      CHECK(piterbarg_h_half_analytic(x, y) > 1.0);
      CHECK(piterbarg_h_half_analytic(x * 1.1, y) < piterbarg_h_half_analytic(x, y));
    }
  CHECK(piterbarg_h_half_analytic(1.0 + 2e-6, 2.0) > 4e5);
  CHECK_THROWS_AS(piterbarg_h_half_analytic(1.0 + 5e-7, 2.0), NonIntegrableError);
  CHECK_THROWS_AS(piterbarg_h_half_analytic(2.0, 0.9), NonIntegrableError);
  CHECK_THROWS_AS(piterbarg_h_half(1.0, 2.0), ValidationError);
}

TEST_CASE("piterbarg analytic form equals the exponential-maximum integral") {
  // E e^{max(X,Y)} for independent X ~ Exp(b1), Y ~ Exp(b2) by quadrature of
  // the density of the maximum.
  for (auto [b1, b2] : {std::pair{2.0, 2.0}, std::pair{1.5, 3.5}, std::pair{4.0 / 3.0, 2.5}}) {
    const int n = 400000;
    const double hi = 80.0;
    const double h = hi / n;
    auto f = [&](double m) {
      const double F1 = 1 - std::exp(-b1 * m), F2 = 1 - std::exp(-b2 * m);
      const double dens = b1 * std::exp(-b1 * m) * F2 + b2 * std::exp(-b2 * m) * F1;
      return std::exp(m) * dens;
    };
    double s = f(0) + f(hi);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(k * h);
    CHECK(piterbarg_h_half_analytic(b1, b2) == doctest::Approx(s * h / 3.0).epsilon(1e-6));
  }
}

TEST_CASE("piterbarg simulation at small scale") {
  PiterbargOptions o;
  o.simulate = true;
  o.replications = 4000;
  o.truncation_T = 10.0;
  o.grid_delta = 0.01;
  const auto e = piterbarg_h_half(3, 3, o);
  CHECK(e.method == ConstantMethod::simulated);
  CHECK(e.analytic_value == doctest::Approx(piterbarg_h_half_analytic(3, 3)));
  CHECK(std::abs(e.value - e.analytic_value) < 4.0 * e.std_error);
  o.threads = 2;
  CHECK(piterbarg_h_half(3, 3, o).value == e.value);
}

TEST_CASE("betas for the interior H = 1/2 instance") {
  NormalizedParams p;
  p.a1 = 1;
  p.a2 = 2;
  p.c1 = 2;
  p.c2 = 1;
  p.h = HurstIndex(0.5);
  p.horizon = 3;
  const auto [bn, bp] = piterbarg_betas(p);
  CHECK(bn == doctest::Approx(4.0 / 3.0));
  CHECK(bp == doctest::Approx(4.0 / 3.0));
  CHECK(piterbarg_h_half_analytic(bn, bp) == doctest::Approx(6.4));
}
