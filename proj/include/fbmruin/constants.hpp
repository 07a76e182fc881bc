#pragma once

// Pickands constant H_{2H} and the Piterbarg-type constant H~_1^d: exact
// where known, simulated otherwise.

#include <cstdint>
#include <string_view>
#include <utility>

#include "fbmruin/gaussian_paths.hpp"
#include "fbmruin/parallel.hpp"
#include "fbmruin/risk_model.hpp"

namespace fbmruin {

enum class ConstantMethod { exact, analytic, simulated };
std::string_view to_string(ConstantMethod m);

/// How a simulated Pickands constant is estimated.
///
/// sup_integral: E[ max_t e^{W(t)} / int e^{W(t)} dt ] over a two-sided
///   grid on [-T, T], W(t) = sqrt(2) B_H(t) - |t|^{2H}. Bounded, low variance;
///   exact path-by-path at H = 1.
/// truncated_mean: (1/T) E exp(sup_{[0,T]} W), the defining limit at finite T.
///   Heavy-tailed; aggregated with a streaming log-sum-exp.
enum class PickandsEstimator { sup_integral, truncated_mean };
std::string_view to_string(PickandsEstimator e);

struct PickandsOptions {
  double truncation_T = 10.0;
  double grid_delta = 0.005;
  std::uint64_t replications = 100000;
  std::uint64_t seed = kDefaultSeed;
  bool force_simulation = false;
  PickandsEstimator estimator = PickandsEstimator::sup_integral;
  unsigned threads = 1;
};

struct PickandsEstimate {
  double h;
  double value;
  double truncation_T;
  double grid_delta;
  std::uint64_t replications;
  double std_error;
  ConstantMethod method;
  PickandsEstimator estimator;
  std::uint64_t seed;
};

PickandsEstimate pickands(HurstIndex h, const PickandsOptions& options = {});

/// Betas below 1 + this are rejected: the defining expectation diverges at 1.
inline constexpr double kPiterbargDivergenceGuard = 1e-6;

struct PiterbargOptions {
  bool simulate = false;
  double truncation_T = 15.0;
  double grid_delta = 0.005;
  std::uint64_t replications = 100000;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
};

struct PiterbargEstimate {
  double beta_neg;
  double beta_pos;
  double value;
  double analytic_value;
  ConstantMethod method;
  double truncation_T;
  double grid_delta;
  std::uint64_t replications;
  double std_error;
  std::uint64_t seed;
};

/// E exp(sup_t (sqrt(2) B(t) - beta_neg |t| 1{t<0} - beta_pos t 1{t>=0})) for
/// two-sided Brownian motion. The half-line suprema are independent
/// exponentials with rates beta_neg and beta_pos, which gives the closed form.
double piterbarg_h_half_analytic(double beta_neg, double beta_pos);

/// Analytic value; with options.simulate also a direct simulation whose
/// estimate is reported as `value` (analytic_value is always filled).
PiterbargEstimate piterbarg_h_half(double beta_neg, double beta_pos, const PiterbargOptions& options = {});

/// (beta_neg, beta_pos) = (1 + 2 t* A2, 1 + 2 t* A1) for an interior instance.
std::pair<double, double> piterbarg_betas(const NormalizedParams& p);

}  // namespace fbmruin
