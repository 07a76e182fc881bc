#include <doctest.h>

#include <cmath>
#include <vector>

#include "fbmruin/errors.hpp"
#include "fbmruin/montecarlo.hpp"
#include "fbmruin/normal.hpp"
#include "oracles.hpp"

using namespace fbmruin;

namespace {

NormalizedParams np(double a1, double a2, double c1, double c2, double h, double horizon, double n = 1.0) {
  NormalizedParams p;
  p.a1 = a1;
  p.a2 = a2;
  p.c1 = c1;
  p.c2 = c2;
  p.h = HurstIndex(h);
  p.horizon = horizon;
  p.n_businesses = n;
  return p;
}

RuinQuery query(const NormalizedParams& p, RuinType r, std::size_t n_points, std::uint64_t reps,
                EstimatorKind e = EstimatorKind::plain, std::uint64_t seed = kDefaultSeed) {
  return RuinQuery{p, r, Grid(p.horizon, n_points), reps, seed, e, 1};
}

double pooled(const EstimateCI& x, const EstimateCI& y) { return std::hypot(x.std_error, y.std_error); }

}  // namespace

TEST_CASE("ruin type and estimator names") {
  for (auto r : {RuinType::simultaneous, RuinType::joint, RuinType::at_least_one}) CHECK(parse_ruin_type(to_string(r)) == r);
  for (auto e : {EstimatorKind::plain, EstimatorKind::shifted}) CHECK(parse_estimator(to_string(e)) == e);
  CHECK_THROWS_AS(parse_ruin_type("both"), ValidationError);
  CHECK_THROWS_AS(parse_estimator("smart"), ValidationError);
}

TEST_CASE("query validation") {
  const auto p = np(1, 2, 2, 1, 0.5, 3);
  CHECK_THROWS_AS(estimate_ruin(query(p, RuinType::joint, 65, 99)), ValidationError);
  auto q = query(p, RuinType::joint, 65, 1000);
  q.grid = Grid(2.0, 65);
  CHECK_THROWS_AS(estimate_ruin(q), ValidationError);
}

TEST_CASE("plain estimate is a hit fraction and reproducible") {
  const auto p = np(1, 2, 2, 1, 0.5, 3);
  const auto q = query(p, RuinType::joint, 129, 3000);
  const auto a = estimate_ruin(q);
  const auto b = estimate_ruin(q);
  CHECK(a.p_hat == static_cast<double>(a.hits) / 3000.0);
  CHECK(a.p_hat == b.p_hat);
  CHECK(a.std_error == b.std_error);
  CHECK(a.std_error == doctest::Approx(std::sqrt(a.p_hat * (1 - a.p_hat) / 2999.0)));
  CHECK(a.seed == kDefaultSeed);
  auto other = q;
  other.seed = 1;
  CHECK(estimate_ruin(other).p_hat != a.p_hat);
}

TEST_CASE("estimates do not depend on the thread count") {
  const auto p = np(1, 2, 2, 1, 0.5, 3, 2.0);
  for (auto e : {EstimatorKind::plain, EstimatorKind::shifted}) {
    auto q = query(p, RuinType::simultaneous, 129, 5000, e);
    const auto one = estimate_ruin(q);
    q.threads = 4;
    const auto four = estimate_ruin(q);
    CHECK(one.p_hat == four.p_hat);
    CHECK(one.std_error == four.std_error);
    CHECK(one.hits == four.hits);
  }
}

TEST_CASE("default shift examples") {
  const auto half = np(1, 2, 2, 1, 0.5, 3, 4.0);
  const auto s = default_shift(query(half, RuinType::joint, 301, 100));
  CHECK(s.center_time == doctest::Approx(1.0));
  CHECK(s.barrier == doctest::Approx(3.0 * 2.0));
  CHECK(s.magnitude == doctest::Approx(6.0));
  CHECK(s.shift[s.center_index] == doctest::Approx(s.barrier));
  CHECK(s.shift[0] == 0.0);

  const auto v = np(1, 2, 1.25, 1, 0.5, 5, 9.0);
  const auto t = default_shift(query(v, RuinType::joint, 501, 100));
  CHECK(t.center_time == doctest::Approx(2.0));
  CHECK(t.barrier == doctest::Approx(4.0 * 3.0));
  CHECK(t.magnitude == doctest::Approx(4.0 * 3.0 / 2.0));

  const auto deg = np(2, 1, 3, 1, 0.5, 3);
  const Grid g(3.0, 301);
  const auto d = default_shift(query(deg, RuinType::joint, 301, 100));
  CHECK(std::abs(d.center_time - 2.0 / 3.0) <= g.spacing());

  const auto beyond = np(1, 2, 2, 1, 0.5, 0.5);
  const auto b = default_shift(query(beyond, RuinType::simultaneous, 101, 100));
  CHECK(b.center_time == doctest::Approx(0.5));
  CHECK(b.magnitude > 0.0);
}

TEST_CASE("single-company probe against the reflection formula") {
  // Company 1 lies above company 2 everywhere, so joint ruin is company 1's ruin.
  const auto p = np(1, 0.5, 1, 0.5, 0.5, 1);
  const std::size_t n_points = 2048;
  const auto e = estimate_ruin(query(p, RuinType::joint, n_points, 100000));
  const double target = oracle::brownian_first_passage(1, 1, 1);
  CHECK(target == doctest::Approx(0.090418).epsilon(1e-5));
  // Discrete monitoring behaves like a barrier raised by 0.5826 sqrt(dt).
  const double raised = 1.0 + 0.5826 * std::sqrt(1.0 / (n_points - 1));
  const double discrete = oracle::brownian_first_passage(raised, 1, 1);
  CHECK(e.p_hat <= target + 3.0 * e.std_error);
  CHECK(e.p_hat >= discrete - 3.0 * e.std_error);
}

TEST_CASE("plain and shifted estimators agree on a common event") {
  const auto p = np(1, 2, 2, 1, 0.5, 3, 0.25);
  for (auto r : {RuinType::simultaneous, RuinType::joint}) {
    const auto plain = estimate_ruin(query(p, r, 257, 40000));
    const auto shifted = estimate_ruin(query(p, r, 257, 40000, EstimatorKind::shifted, 99));
    REQUIRE(plain.p_hat >= 1e-2);
    CHECK(std::abs(plain.p_hat - shifted.p_hat) < 4.0 * pooled(plain, shifted));
    CHECK(shifted.effective_sample_size > 100.0);
    CHECK(shifted.warning.empty());
  }
}

TEST_CASE("degenerate regime: simultaneous equals joint") {
  const auto p = np(2, 1, 3, 1, 0.5, 3, 0.3);
  const auto sim = estimate_ruin(query(p, RuinType::simultaneous, 257, 20000));
  const auto joint = estimate_ruin(query(p, RuinType::joint, 257, 20000, EstimatorKind::plain, 5));
  CHECK(std::abs(sim.p_hat - joint.p_hat) < 3.0 * pooled(sim, joint));
}

TEST_CASE("at least one ruin dominates each company") {
  const auto p = np(1, 2, 2, 1, 0.6, 3, 0.5);
  const auto either = estimate_ruin(query(p, RuinType::at_least_one, 257, 20000));
  // A company on its own: push the other barrier out of reach.
  const auto only1 = estimate_ruin(query(np(1, 1e6, 2, 1, 0.6, 3, 0.5), RuinType::at_least_one, 257, 20000, EstimatorKind::plain, 3));
  const auto only2 = estimate_ruin(query(np(1e6, 2, 2, 1, 0.6, 3, 0.5), RuinType::at_least_one, 257, 20000, EstimatorKind::plain, 4));
  CHECK(either.p_hat >= only1.p_hat - 3.0 * pooled(either, only1));
  CHECK(either.p_hat >= only2.p_hat - 3.0 * pooled(either, only2));
}

TEST_CASE("finer grids do not lower the estimate") {
  const auto p = np(1, 2, 2, 1, 0.5, 3);
  const auto coarse = estimate_ruin(query(p, RuinType::joint, 65, 20000));
  const auto fine = estimate_ruin(query(p, RuinType::joint, 129, 20000, EstimatorKind::plain, 8));
  CHECK(fine.p_hat >= coarse.p_hat - 3.0 * pooled(coarse, fine));
}

TEST_CASE("inclusion chain per replication") {
  for (double h : {0.3, 0.5, 0.8, 1.0}) {
    const auto p = np(1, 2, 2, 1, h, 3, 0.25);
    const auto r = check_inclusion_chain(p, Grid(3, 129), 20000, 17);
    CHECK(r.replications == 20000);
    CHECK(r.violations == 0);
    CHECK(r.simultaneous <= r.joint);
    CHECK(r.joint <= r.at_least_one);
    CHECK(r.simultaneous > 0);
  }
}

TEST_CASE("no hits produce a warning, not an error") {
  const auto p = np(1, 2, 2, 1, 0.5, 3, 400.0);
  const auto e = estimate_ruin(query(p, RuinType::joint, 65, 200));
  CHECK(e.p_hat == 0.0);
  CHECK_FALSE(e.warning.empty());
}

TEST_CASE("H = 1 joint ruin against the exact tail") {
  const auto p = np(1, 2, 2, 1, 1.0, 3);
  ConvergenceOptions o;
  o.grid_points = 257;
  o.replications = 20000;
  const std::vector<double> ns{1, 4, 16};
  const auto rows = convergence_study(p, RuinType::joint, ns, o);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) {
    CAPTURE(row.n);
    CHECK(row.asym_value == doctest::Approx(normal_tail(7.0 / 3.0 * std::sqrt(row.n))));
    CHECK(std::abs(row.mc_estimate - row.asym_value) < 3.0 * row.mc_stderr);
    CHECK(row.asym_form == "and-h1:exact");
  }
  CHECK(rows[2].estimator == EstimatorKind::shifted);
}

TEST_CASE("convergence study columns") {
  const auto p = np(1, 2, 1.25, 1, 0.5, 5);
  ConvergenceOptions o;
  o.grid_points = 257;
  o.replications = 4000;
  const std::vector<double> ns{1, 2, 4, 8};
  const auto rows = convergence_study(p, RuinType::joint, ns, o);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].estimator == EstimatorKind::plain);
  CHECK(rows[3].estimator == EstimatorKind::shifted);
  for (const auto& row : rows) {
    CHECK(row.reference_rate == doctest::Approx(4.0));
    CHECK(row.ratio == doctest::Approx(row.mc_estimate / row.asym_value));
    CHECK(row.log_mc_over_n == doctest::Approx(-std::log(row.mc_estimate) / row.n));
  }

  const auto interior = np(1, 2, 2, 1, 0.5, 3);
  const auto irows = convergence_study(interior, RuinType::joint, std::vector<double>{1, 2}, o);
  CHECK(std::isnan(irows[0].ratio));
  CHECK(irows[0].reference_rate == doctest::Approx(log_rate_and(interior).rate));

  const auto srows = convergence_study(interior, RuinType::simultaneous, std::vector<double>{1, 2}, o);
  CHECK(srows[0].asym_form == "sim:crossing-half");
  CHECK(std::isfinite(srows[0].ratio));

  const auto orows = convergence_study(interior, RuinType::at_least_one, std::vector<double>{1}, o);
  CHECK(std::isnan(orows[0].asym_value));
  CHECK(std::isnan(orows[0].reference_rate));
}

TEST_CASE("convergence study validation") {
  const auto p = np(1, 2, 1.25, 1, 0.5, 5);
  CHECK_THROWS_AS(convergence_study(p, RuinType::joint, std::vector<double>{}), ValidationError);
  CHECK_THROWS_AS(convergence_study(p, RuinType::joint, std::vector<double>{2, 1}), ValidationError);
  CHECK_THROWS_AS(convergence_study(p, RuinType::joint, std::vector<double>{0, 1}), ValidationError);
  ConvergenceOptions o;
  o.replications = 10;
  CHECK_THROWS_AS(convergence_study(p, RuinType::joint, std::vector<double>{1}, o), ValidationError);
}
