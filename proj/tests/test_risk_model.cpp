#include <doctest.h>

#include <cmath>
#include <limits>

#include "fbmruin/errors.hpp"
#include "fbmruin/risk_model.hpp"

using namespace fbmruin;

namespace {

NormalizedParams np(double a1, double a2, double c1, double c2, double h, double horizon = 3.0) {
  NormalizedParams p;
  p.a1 = a1;
  p.a2 = a2;
  p.c1 = c1;
  p.c2 = c2;
  p.h = HurstIndex(h);
  p.horizon = horizon;
  return p;
}

ModelParams mp(double a1, double a2, double c1, double c2, double h = 0.5, double horizon = 3.0) {
  ModelParams p;
  p.a1 = a1;
  p.a2 = a2;
  p.c1 = c1;
  p.c2 = c2;
  p.h = HurstIndex(h);
  p.horizon = horizon;
  return p;
}

}  // namespace

TEST_CASE("model parameter validation") {
  CHECK_NOTHROW(mp(1, 2, 2, 1).validate());
  CHECK_THROWS_AS(mp(0, 2, 2, 1).validate(), ValidationError);
  CHECK_THROWS_AS(mp(1, 2, -2, 1).validate(), ValidationError);
  auto p = mp(1, 2, 2, 1);
  p.sigma1 = 0.6;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.sigma2 = 0.4;
  CHECK_NOTHROW(p.validate());
  p.n_businesses = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p = mp(1, 2, 2, 1);
  p.horizon = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("normalize scales by claim shares") {
  const auto n = normalize(mp(1, 2, 2, 1));
  CHECK(n.a1 == 2.0);
  CHECK(n.a2 == 4.0);
  CHECK(n.c1 == 4.0);
  CHECK(n.c2 == 2.0);
  CHECK_FALSE(n.swapped);

  auto uneven = mp(1, 2, 2, 1);
  uneven.sigma1 = 0.25;
  uneven.sigma2 = 0.75;
  const auto u = normalize(uneven);
  CHECK(u.a1 == doctest::Approx(4.0));
  CHECK(u.c1 == doctest::Approx(8.0));
  CHECK(u.a2 == doctest::Approx(8.0 / 3.0));
  CHECK(u.c2 == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("normalize relabels so that c1 > c2") {
  const auto n = normalize(mp(1, 2, 1, 2));
  CHECK(n.swapped);
  CHECK(n.c1 == 4.0);
  CHECK(n.c2 == 2.0);
  CHECK(n.a1 == 4.0);
  CHECK(n.a2 == 2.0);
}

TEST_CASE("equal normalized premiums are parallel lines") {
  CHECK_THROWS_AS(normalize(mp(1, 2, 1, 1)), ParallelLinesError);
  auto p = mp(1, 2, 1, 3);
  p.sigma1 = 0.25;
  p.sigma2 = 0.75;
  CHECK_THROWS_AS(normalize(p), ParallelLinesError);
}

TEST_CASE("normalize is idempotent") {
  for (const auto& raw : {mp(1, 2, 2, 1), mp(1, 2, 1, 2), mp(3, 1, 0.5, 4)}) {
    const auto once = normalize(raw);
    const auto twice = normalize(once);
    CHECK(twice.a1 == once.a1);
    CHECK(twice.a2 == once.a2);
    CHECK(twice.c1 == once.c1);
    CHECK(twice.c2 == once.c2);
    CHECK(twice.swapped == once.swapped);
    CHECK(classify(twice).tag == classify(once).tag);
  }
}

TEST_CASE("critical points examples") {
  auto cp = critical_points(np(1, 2, 2, 1, 0.5));
  CHECK(cp.t_star == doctest::Approx(1.0));
  CHECK(cp.t1 == doctest::Approx(0.5));
  CHECK(cp.t2 == doctest::Approx(2.0));
  cp = critical_points(np(1, 3, 2, 1, 0.75));
  CHECK(cp.t_star == doctest::Approx(2.0));
  CHECK(cp.t1 == doctest::Approx(1.5));
  CHECK(cp.t2 == doctest::Approx(9.0));
  cp = critical_points(np(1, 2, 1.25, 1, 0.5));
  CHECK(cp.t_star == doctest::Approx(4.0));
  CHECK(cp.t1 == doctest::Approx(0.8));
  CHECK(cp.t2 == doctest::Approx(2.0));
  cp = critical_points(np(1, 2, 2, 1, 1.0));
  CHECK(std::isinf(cp.t1));
  CHECK(std::isinf(cp.t2));
  CHECK_THROWS_AS(critical_points(np(1, 2, 1, 2, 0.5)), ValidationError);
}

TEST_CASE("peak constants examples") {
  CHECK(peak_m(1, 1, HurstIndex(0.5)) == doctest::Approx(2.0));
  CHECK(peak_m(2, 1, HurstIndex(0.5)) == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(peak_m(3, 1.7, HurstIndex(1.0)) == doctest::Approx(1.7));
  const auto p = np(1, 2, 2, 1, 0.5);
  const auto pc = peak_constants(p, critical_points(p));
  CHECK(pc.A1 == doctest::Approx(1.0 / 6.0));
  CHECK(pc.A2 == doctest::Approx(1.0 / 6.0));
  CHECK(pc.m1 == doctest::Approx(peak_m(1, 2, HurstIndex(0.5))));
  const auto flat = np(1, 1, 2, 1, 0.5);
  CHECK_THROWS_AS(peak_constants(flat, critical_points(flat)), ValidationError);
}

TEST_CASE("m is increasing in a and in c") {
  for (double h : {0.1, 0.3, 0.5, 0.7, 0.9})
    for (double a : {0.2, 1.0, 5.0})
      for (double c : {0.3, 1.0, 4.0}) {
        const double d = 1e-6;
        const double m = peak_m(a, c, HurstIndex(h));
        CHECK(peak_m(a + d, c, HurstIndex(h)) > m);
        CHECK(peak_m(a, c + d, HurstIndex(h)) > m);
      }
}

TEST_CASE("regime examples") {
  CHECK(classify(np(2, 1, 3, 1, 0.5)).tag == RegimeTag::Degenerate);
  CHECK(classify(np(1, 1, 3, 1, 0.5)).tag == RegimeTag::Degenerate);
  CHECK(classify(np(1, 2, 2, 1, 0.5, 3)).tag == RegimeTag::InteriorHalf);
  CHECK(classify(np(1, 2, 1.25, 1, 0.5, 5)).tag == RegimeTag::SimCaseV);
  CHECK(classify(np(1, 2, 2, 1, 0.9, 3)).tag == RegimeTag::SimCaseI);
  CHECK(classify(np(1, 2, 2, 1, 0.4, 3)).tag == RegimeTag::InteriorLowH);
  CHECK(classify(np(1, 3, 2, 1, 0.75, 3)).tag == RegimeTag::InteriorHighH);
  CHECK(classify(np(1, 2, 2, 1, 0.5, 0.5)).tag == RegimeTag::BeyondHorizon);
  CHECK(classify(np(1, 2, 2, 1, 0.5, 1.0)).tag == RegimeTag::BeyondHorizon);
  CHECK(classify(np(1, 2, 2, 1, 1.0, 3)).tag == RegimeTag::SimCaseI);
}

TEST_CASE("boundary regimes within tolerance") {
  CHECK(classify(np(1, 1.5, 2, 1, 0.5)).tag == RegimeTag::SimCaseII);
  CHECK(classify(np(1, 1.5 * (1 + 1e-11), 2, 1, 0.5)).tag == RegimeTag::SimCaseII);
  CHECK(classify(np(1, 1.5 * (1 + 1e-6), 2, 1, 0.5)).tag == RegimeTag::InteriorHalf);
  CHECK(classify(np(1, 4.0 / 3.0, 1.25, 1, 0.5, 5)).tag == RegimeTag::SimCaseIV);
  CHECK(classify(np(1, 4.0 / 3.0 * (1 + 1e-6), 1.25, 1, 0.5, 5)).tag == RegimeTag::SimCaseV);
  CHECK(nearly_equal(1.0, 1.0 + 5e-10));
  CHECK_FALSE(nearly_equal(1.0, 1.0 + 5e-9));
}

TEST_CASE("joint rescaling leaves critical points and regime unchanged") {
  const NormalizedParams cases[] = {np(1, 2, 2, 1, 0.5), np(1, 2, 1.25, 1, 0.5, 5), np(1, 3, 2, 1, 0.75),
                                    np(1, 2, 2, 1, 0.9), np(1, 2, 2, 1, 0.4)};
  for (const auto& base : cases) {
    const auto cp = critical_points(base);
    for (double lambda : {0.5, 2.0}) {
      auto scaled = base;
      scaled.a1 *= lambda;
      scaled.a2 *= lambda;
      scaled.c1 *= lambda;
      scaled.c2 *= lambda;
      const auto sp = critical_points(scaled);
      CHECK(sp.t_star == doctest::Approx(cp.t_star));
      CHECK(sp.t1 == doctest::Approx(cp.t1));
      CHECK(sp.t2 == doctest::Approx(cp.t2));
      CHECK(classify(scaled).tag == classify(base).tag);
    }
  }
}

TEST_CASE("t1 < t2 in every non-degenerate instance") {
  for (double h : {0.1, 0.35, 0.5, 0.8, 0.95})
    for (double a1 : {0.1, 1.0, 3.0})
      for (double da : {0.01, 1.0, 10.0})
        for (double c2 : {0.2, 1.0})
          for (double dc : {0.05, 2.0}) {
            const auto cp = critical_points(np(a1, a1 + da, c2 + dc, c2, h));
            CHECK(cp.t1 < cp.t2);
          }
}

TEST_CASE("regime detail and names") {
  const auto r = classify(np(1, 2, 2, 1, 0.5));
  CHECK(to_string(r.tag) == "InteriorHalf");
  CHECK_FALSE(r.detail.empty());
  CHECK(is_interior(RegimeTag::InteriorLowH));
  CHECK_FALSE(is_interior(RegimeTag::SimCaseV));
}
