#include "fbmruin/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "fbmruin/errors.hpp"
#include "fbmruin/normal.hpp"
#include "fbmruin/optimize.hpp"
#include "fbmruin/parallel.hpp"

namespace fbmruin {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

void require_below_one(HurstIndex h, const char* what) {
  if (h.is_one())
    throw ValidationError(std::string(what) + " is not defined at H = 1; use the exact H = 1 joint-ruin evaluator");
}

double require_pickands(double pickands) {
  if (!(pickands > 0.0) || !std::isfinite(pickands))
    throw ConstantRequiredError("Pickands constant H_{2H} (run the `pickands` estimator)");
  return pickands;
}

// C * u^power * Psi(u), u = k sqrt(N): exact tail plus its leading-order triple.
AsymptoticValue gaussian_tail_value(double log_constant, double k, double power, std::string form) {
  AsymptoticValue v;
  v.exact_tail = GaussianTailFactor{log_constant, k, power};
  v.log_prefactor = log_constant + (power - 1.0) * std::log(k) - kLogSqrt2Pi;
  v.n_power = 0.5 * (power - 1.0);
  v.rate = 0.5 * k * k;
  v.form = std::move(form);
  return v;
}

AsymptoticValue scaled(AsymptoticValue v, double factor, const std::string& prefix) {
  v.log_prefactor += std::log(factor);
  if (v.exact_tail) v.exact_tail->log_constant += std::log(factor);
  v.form = prefix + "/" + v.form;
  return v;
}

double pickands_or_nan(const AsymptoticConstants& constants) {
  return constants.pickands.value_or(std::numeric_limits<double>::quiet_NaN());
}

}  // namespace

double AsymptoticValue::log_evaluate(double n) const {
  if (!(n > 0.0)) throw ValidationError("N must be positive");
  if (exact_tail) {
    const double u = exact_tail->coefficient * std::sqrt(n);
    return exact_tail->log_constant + exact_tail->power * std::log(u) + log_normal_tail(u);
  }
  return log_prefactor + n_power * std::log(n) - rate * n;
}

double AsymptoticValue::evaluate(double n) const { return sign * std::exp(log_evaluate(n)); }

AsymptoticConstants AsymptoticConstants::known_for(HurstIndex h) {
  AsymptoticConstants c;
  if (h.is_half()) c.pickands = 1.0;
  if (h.is_one()) c.pickands = 1.0 / std::sqrt(std::numbers::pi);
  return c;
}

AsymptoticValue psi_one_dim(double a, double c, HurstIndex h, double horizon, double pickands,
                            const FormulaOptions& options) {
  if (!(a > 0.0) || !(c > 0.0) || !(horizon > 0.0)) throw ValidationError("psi_one_dim needs a, c, T > 0");
  require_below_one(h, "psi_one_dim");
  const double hv = h.value();
  const double peak_time = hv / (1.0 - hv) * a / c;
  AsymptoticValue v;

  const bool at_peak = nearly_equal(horizon, peak_time);
  if (at_peak || horizon > peak_time) {
    const double m = peak_m(a, c, h);
    const double log_pi_factor = options.corrected_one_dim ? 0.5 * std::log(std::numbers::pi) : -std::log(std::numbers::pi);
    v.log_prefactor = std::log(require_pickands(pickands)) + log_pi_factor - 0.5 * std::log(hv * (1.0 - hv)) +
                      (1.0 / hv - 1.0) * std::log(m / std::numbers::sqrt2) - kLogSqrt2Pi - std::log(m);
    v.n_power = 0.5 * ((options.corrected_one_dim ? 1.0 / hv : hv) - 1.0) - 0.5;
    v.rate = 0.5 * m * m;
    v.form = "one-dim:interior-peak";
    if (at_peak) {
      v.log_prefactor -= std::log(2.0);
      v.form = "one-dim:peak-at-horizon";
    }
    if (options.corrected_one_dim) v.form += "-corrected";
    return v;
  }

  const double level = a + c * horizon;
  v.rate = level * level / (2.0 * std::pow(horizon, 2.0 * hv));
  if (h.is_half()) {
    if (!(a - c * horizon > 0.0)) throw NumericalError("psi_one_dim: a - cT must be positive in this case");
    v.log_prefactor = -kLogSqrt2Pi + std::log(2.0 * a * std::sqrt(horizon)) - std::log((a - c * horizon) * level);
    v.n_power = -0.5;
    v.form = "one-dim:horizon-half";
  } else if (hv < 0.5) {
    const double denom = c * horizon - hv * level;
    const double exponent = options.corrected_one_dim ? 1.0 / hv : hv;
    v.log_prefactor = std::log(require_pickands(pickands)) + (2.0 * hv - 1.0) * std::log(horizon) +
                      (1.0 / hv - 1.0) * std::log(level) - std::log(std::abs(denom)) - 0.5 * exponent * std::log(2.0) -
                      kLogSqrt2Pi + hv * std::log(horizon) - std::log(level);
    v.n_power = 0.5 * (exponent - 2.0) - 0.5;
    if (options.strict_sign && denom < 0.0) v.sign = -1.0;
    v.form = options.corrected_one_dim ? "one-dim:horizon-low-h-corrected" : "one-dim:horizon-low-h";
  } else {
    const double t_power = options.psi_form ? hv : 2.0 * hv;
    v.log_prefactor = -kLogSqrt2Pi + t_power * std::log(horizon) - std::log(level);
    v.n_power = -0.5;
    v.form = options.psi_form ? "one-dim:horizon-high-h-psi" : "one-dim:horizon-high-h";
  }
  return v;
}

AsymptoticValue pi_sim_asym(const NormalizedParams& p, const Regime& regime, const AsymptoticConstants& constants,
                            const FormulaOptions& options) {
  require_below_one(p.h, "pi_sim_asym");
  const double pk = pickands_or_nan(constants);
  switch (regime.tag) {
    case RegimeTag::Degenerate:
      throw ValidationError("degenerate regime: simultaneous ruin reduces to one-dimensional ruin of company 1");
    case RegimeTag::BeyondHorizon:
      throw ValidationError("t* >= T: the simultaneous-ruin formulas need t* < T");
    case RegimeTag::SimCaseI:
      return scaled(psi_one_dim(p.a1, p.c1, p.h, p.horizon, pk, options), 1.0, "sim:company1");
    case RegimeTag::SimCaseII:
      return scaled(psi_one_dim(p.a1, p.c1, p.h, p.horizon, pk, options), 0.5, "sim:company1-half");
    case RegimeTag::SimCaseIV:
      return scaled(psi_one_dim(p.a2, p.c2, p.h, p.horizon, pk, options), 0.5, "sim:company2-half");
    case RegimeTag::SimCaseV:
      return scaled(psi_one_dim(p.a2, p.c2, p.h, p.horizon, pk, options), 1.0, "sim:company2");
    default:
      break;
  }

  const CriticalPoints cp = critical_points(p);
  const double hv = p.h.value();
  const double k = (p.a1 + p.c1 * cp.t_star) / std::pow(cp.t_star, hv);
  if (regime.tag == RegimeTag::InteriorLowH) {
    const PeakConstants pc = peak_constants(p, cp);
    const double log_c = std::log(pc.A1 + pc.A2) - std::log(2.0) / (2.0 * hv) - std::log(cp.t_star) -
                         std::log(pc.A1 * pc.A2) + std::log(require_pickands(pk));
    return gaussian_tail_value(log_c, k, 1.0 / hv - 2.0, "sim:crossing-low-h");
  }
  if (regime.tag == RegimeTag::InteriorHalf) {
    if (!constants.piterbarg || !(*constants.piterbarg > 0.0))
      throw ConstantRequiredError("Piterbarg-type constant H~_1^d (run the `piterbarg` evaluator)");
    return gaussian_tail_value(std::log(*constants.piterbarg), k, 0.0, "sim:crossing-half");
  }
  return gaussian_tail_value(0.0, k, 0.0, "sim:crossing-high-h");
}

AsymptoticValue pi_and_asym(const NormalizedParams& p, const Regime& regime, const AsymptoticConstants& constants,
                            const FormulaOptions& options) {
  require_below_one(p.h, "pi_and_asym");
  const double pk = pickands_or_nan(constants);
  switch (regime.tag) {
    case RegimeTag::SimCaseI:
      return scaled(psi_one_dim(p.a1, p.c1, p.h, p.horizon, pk, options), 1.0, "and:company1");
    case RegimeTag::SimCaseV:
      return scaled(psi_one_dim(p.a2, p.c2, p.h, p.horizon, pk, options), 1.0, "and:company2");
    case RegimeTag::Degenerate:
      throw ValidationError("degenerate regime: joint ruin reduces to one-dimensional ruin of company 1");
    case RegimeTag::BeyondHorizon:
      throw ValidationError("t* >= T: the exact joint-ruin formulas need t* < T");
    default:
      throw OnlyLogRateError();
  }
}

namespace {

double h1_coefficient(const NormalizedParams& p, const FormulaOptions& options) {
  if (!p.h.is_one()) throw ValidationError("exact joint ruin evaluator needs H = 1");
  const double k1 = (p.a1 + p.c1 * p.horizon) / p.horizon;
  const double k2 = (p.a2 + p.c2 * p.horizon) / p.horizon;
  if (options.printed_h1_cases) {
    const double t_star = (p.a2 - p.a1) / (p.c1 - p.c2);
    return t_star <= p.horizon ? k2 : k1;
  }
  // {sup_t (Z t - c_i t) > a_i} = {Z > (a_i + c_i T)/T}; both events hold iff Z exceeds the larger level.
  return std::max(k1, k2);
}

}  // namespace

AsymptoticValue pi_and_exact_h1(const NormalizedParams& p, const FormulaOptions& options) {
  return gaussian_tail_value(0.0, h1_coefficient(p, options), 0.0, "and-h1:exact");
}

double pi_and_h1_expansion(const NormalizedParams& p, double n, const FormulaOptions& options) {
  const double k = h1_coefficient(p, options);
  return std::exp(-kLogSqrt2Pi - 0.5 * std::log(n) - std::log(k) - 0.5 * k * k * n);
}

double log_rate_objective(double s, double t, const NormalizedParams& p) {
  if (!(s > 0.0) || !(t > 0.0)) return kInf;
  const double hv = p.h.value();
  const double s_h = std::pow(s, hv);
  const double t_h = std::pow(t, hv);
  const double sigma1 = s_h / (p.a1 + p.c1 * s);
  const double sigma2 = t_h / (p.a2 + p.c2 * t);
  const double c = std::max(sigma2 / sigma1, sigma1 / sigma2);
  const double sigma_max = std::max(sigma1, sigma2);
  const double base = 1.0 / (sigma_max * sigma_max);

  double r = 1.0;
  if (s != t && !p.h.is_one())
    r = (t_h * t_h + s_h * s_h - std::pow(std::abs(t - s), 2.0 * hv)) / (2.0 * s_h * t_h);
  if (r >= 1.0) return c <= 1.0 + 1e-12 ? base : kInf;
  if (r < c) return base * (1.0 + (c - r) * (c - r) / (1.0 - r * r));
  return base;
}

LogRateResult log_rate_and(const NormalizedParams& p, const LogRateOptions& options) {
  p.validate();
  const double horizon = p.horizon;

  if (p.h.is_one()) {
    // Correlation is identically one, so only points with sigma1(s) = sigma2(t)
    // are finite; sigma_i(t) = t/(a_i + c_i t) increases to sigma_i(T).
    const double s1 = horizon / (p.a1 + p.c1 * horizon);
    const double s2 = horizon / (p.a2 + p.c2 * horizon);
    const double sigma = std::min(s1, s2);
    double s = horizon;
    double t = horizon;
    if (s1 <= s2)
      t = p.a2 * sigma / (1.0 - p.c2 * sigma);
    else
      s = p.a1 * sigma / (1.0 - p.c1 * sigma);
    const double objective = 1.0 / (sigma * sigma);
    return {0.5 * objective, s, t, objective};
  }

  const std::size_t n = std::max<std::size_t>(options.grid_points, 3);
  const double lo = horizon * options.margin_fraction;
  const double step = (horizon - lo) / static_cast<double>(n - 1);
  auto node = [&](std::size_t k) { return k + 1 == n ? horizon : lo + static_cast<double>(k) * step; };

  struct RowMin {
    double value = kInf;
    std::size_t col = 0;
  };
  const auto rows = run_blocks<RowMin>(n, options.threads, [&](std::size_t i) {
    RowMin best;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = log_rate_objective(node(i), node(j), p);
      if (v < best.value) best = {v, j};
    }
    return best;
  });
  double best = kInf;
  std::size_t bi = 0;
  std::size_t bj = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (rows[i].value < best) {
      best = rows[i].value;
      bi = i;
      bj = rows[i].col;
    }
  double s = node(bi);
  double t = node(bj);

  // The crossing time on the diagonal is an isolated finite point (r = c = 1).
  if (p.a1 < p.a2) {
    const double t_star = (p.a2 - p.a1) / (p.c1 - p.c2);
    if (t_star >= lo && t_star <= horizon) {
      const double v = log_rate_objective(t_star, t_star, p);
      if (v < best) return {0.5 * v, t_star, t_star, v};
    }
  }

  for (int sweep = 0; sweep < 500; ++sweep) {
    const double before = best;
    const auto along_s = golden_section_minimize([&](double x) { return log_rate_objective(x, t, p); },
                                                 std::max(lo, s - step), std::min(horizon, s + step), options.rel_tol);
    if (along_s.value < best) {
      best = along_s.value;
      s = along_s.x;
    }
    const auto along_t = golden_section_minimize([&](double x) { return log_rate_objective(s, x, p); },
                                                 std::max(lo, t - step), std::min(horizon, t + step), options.rel_tol);
    if (along_t.value < best) {
      best = along_t.value;
      t = along_t.x;
    }
    if (before - best <= options.rel_tol * best) break;
  }
  return {0.5 * best, s, t, best};
}

}  // namespace fbmruin
