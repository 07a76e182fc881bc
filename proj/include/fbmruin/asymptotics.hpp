#pragma once

// Closed-form ruin asymptotics carried in log-space, plus the variational
// problem behind the logarithmic joint-ruin rate.

#include <optional>
#include <string>

#include "fbmruin/risk_model.hpp"

namespace fbmruin {

/// Factor C * u^power * Psi(u) with u = coefficient * sqrt(N), evaluated exactly.
struct GaussianTailFactor {
  double log_constant = 0.0;
  double coefficient = 0.0;
  double power = 0.0;
};

/// sign * exp(log_prefactor + n_power * log N - rate * N).
///
/// When `exact_tail` is set the triple stores the leading-order expansion of
/// Psi(u) ~ phi(u)/u, but evaluate() uses the exact Gaussian tail instead.
struct AsymptoticValue {
  double log_prefactor = 0.0;
  double n_power = 0.0;
  double rate = 0.0;
  std::string form;
  double sign = 1.0;
  std::optional<GaussianTailFactor> exact_tail;

  double log_evaluate(double n) const;
  double evaluate(double n) const;
};

/// Alternatives to the formulas as printed.
struct FormulaOptions {
  /// Keep the printed (negative) denominator cT - H(a+cT) in the short-horizon
  /// H < 1/2 case. evaluate() then returns a negative number.
  bool strict_sign = false;
  /// Short-horizon H > 1/2 case: use the pure tail prefactor T^H/(a+cT)
  /// instead of the printed T^{2H}/(a+cT).
  bool psi_form = false;
  /// One-dim peak cases and the short-horizon H < 1/2 case: use sqrt(pi)
  /// instead of 1/pi, N^{(1/H-1)/2} instead of N^{(H-1)/2}, and
  /// N^{(1/H-2)/2} 2^{-1/(2H)} instead of N^{(H-2)/2} 2^{-H/2}. The corrected
  /// peak form reduces to e^{-2acN} at H = 1/2.
  bool corrected_one_dim = false;
  /// H = 1 exact joint ruin: use the printed case labels (company 2 when
  /// t* <= T) instead of the event identity Psi(max_i (a_i + c_i T)/T sqrt N).
  bool printed_h1_cases = false;
};

/// Constants consumed by the formulas. Missing entries raise ConstantRequiredError
/// only when the dispatched case actually needs them.
struct AsymptoticConstants {
  std::optional<double> pickands;   // H_{2H}
  std::optional<double> piterbarg;  // H~_1^d, only at H = 1/2 interior

  /// Fills what is known exactly: H_1 = 1 at H = 1/2, H_2 = 1/sqrt(pi) at H = 1.
  static AsymptoticConstants known_for(HurstIndex h);
};

/// P(sup_{t<=T} (B_H(t) - c sqrt(N) t) > a sqrt(N)) as N -> infinity.
AsymptoticValue psi_one_dim(double a, double c, HurstIndex h, double horizon, double pickands,
                            const FormulaOptions& options = {});

/// Simultaneous ruin. Throws for Degenerate / BeyondHorizon and H = 1.
AsymptoticValue pi_sim_asym(const NormalizedParams& p, const Regime& regime, const AsymptoticConstants& constants,
                            const FormulaOptions& options = {});

/// Joint ruin, exact asymptotics. Only SimCaseI and SimCaseV are covered;
/// other non-degenerate regimes throw OnlyLogRateError.
AsymptoticValue pi_and_asym(const NormalizedParams& p, const Regime& regime, const AsymptoticConstants& constants,
                            const FormulaOptions& options = {});

/// H = 1 joint ruin, exact for every N (not only asymptotically).
AsymptoticValue pi_and_exact_h1(const NormalizedParams& p, const FormulaOptions& options = {});

/// The Gaussian-tail expansion of pi_and_exact_h1 as N -> infinity.
double pi_and_h1_expansion(const NormalizedParams& p, double n, const FormulaOptions& options = {});

/// Objective whose infimum over (0,T]^2 is twice the joint-ruin log rate.
double log_rate_objective(double s, double t, const NormalizedParams& p);

struct LogRateOptions {
  std::size_t grid_points = 200;
  double margin_fraction = 1e-4;  // excluded margin at zero, as a fraction of T
  double rel_tol = 1e-8;
  unsigned threads = 1;
};

struct LogRateResult {
  double rate;  // -lim log(pi_and)/N = objective_at_argmin / 2
  double argmin_s;
  double argmin_t;
  double objective_at_argmin;
};

LogRateResult log_rate_and(const NormalizedParams& p, const LogRateOptions& options = {});

}  // namespace fbmruin
