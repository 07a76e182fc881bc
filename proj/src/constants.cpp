#include "fbmruin/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "fbmruin/errors.hpp"

namespace fbmruin {
namespace {

constexpr std::uint64_t kBlockSize = 512;

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;
};

struct MeanSe {
  double mean;
  double std_error;
};

MeanSe reduce(const std::vector<Moments>& blocks) {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;
  for (const auto& b : blocks) {
    sum += b.sum;
    sum_sq += b.sum_sq;
    count += b.count;
  }
  const double n = static_cast<double>(count);
  const double mean = sum / n;
  const double var = count > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
  return {mean, std::sqrt(var / n)};
}

std::size_t steps_for(double length, double delta) {
  if (!(length > 0.0) || !(delta > 0.0) || delta > length)
    throw ValidationError("truncation horizon and grid spacing must satisfy 0 < delta <= T");
  return static_cast<std::size_t>(std::max(1.0, std::round(length / delta)));
}

double log_sum_exp(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity()) return y;
  if (y == -std::numeric_limits<double>::infinity()) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

std::size_t block_count(std::uint64_t replications) { return (replications + kBlockSize - 1) / kBlockSize; }

std::uint64_t block_reps(std::size_t b, std::uint64_t replications) {
  return std::min<std::uint64_t>(kBlockSize, replications - b * kBlockSize);
}

PickandsEstimate simulate_sup_integral(HurstIndex h, const PickandsOptions& o) {
  const std::size_t half = steps_for(o.truncation_T, o.grid_delta);
  const Grid grid(2.0 * o.truncation_T, 2 * half + 1);
  const double spacing = grid.spacing();
  const auto sampler = make_sampler(grid, h);
  const double two_h = 2.0 * h.value();

  std::vector<double> drift(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j)
    drift[j] = std::pow(std::abs(static_cast<double>(j) - static_cast<double>(half)) * spacing, two_h);

  auto ratio = [&](const std::vector<double>& path) {
    const double center = path[half];
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < path.size(); ++j)
      top = std::max(top, std::numbers::sqrt2 * (path[j] - center) - drift[j]);
    double mass = 0.0;
    for (std::size_t j = 0; j < path.size(); ++j)
      mass += std::exp(std::numbers::sqrt2 * (path[j] - center) - drift[j] - top);
    return 1.0 / (mass * spacing);
  };

  const auto blocks = run_blocks<Moments>(block_count(o.replications), o.threads, [&](std::size_t b) {
    Rng rng(derive_seed(o.seed, b));
    std::vector<double> first(grid.size());
    std::vector<double> second(grid.size());
    Moments m;
    const std::uint64_t reps = block_reps(b, o.replications);
    while (m.count < reps) {
      sampler->sample_pair(rng, first, second);
      for (const auto* path : {&first, &second}) {
        if (m.count == reps) break;
        const double v = ratio(*path);
        m.sum += v;
        m.sum_sq += v * v;
        ++m.count;
      }
    }
    return m;
  });
  const MeanSe r = reduce(blocks);
  return {h.value(), r.mean, o.truncation_T, spacing, o.replications, r.std_error, ConstantMethod::simulated,
          PickandsEstimator::sup_integral, o.seed};
}

PickandsEstimate simulate_truncated_mean(HurstIndex h, const PickandsOptions& o) {
  const Grid grid(o.truncation_T, steps_for(o.truncation_T, o.grid_delta) + 1);
  const auto sampler = make_sampler(grid, h);
  const double two_h = 2.0 * h.value();
  std::vector<double> drift(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) drift[j] = j == 0 ? 0.0 : std::pow(grid.time(j), two_h);

  struct LogMoments {
    double lse = -std::numeric_limits<double>::infinity();     // log sum e^{S}
    double lse_sq = -std::numeric_limits<double>::infinity();  // log sum e^{2S}
    std::uint64_t count = 0;
  };
  const auto blocks = run_blocks<LogMoments>(block_count(o.replications), o.threads, [&](std::size_t b) {
    Rng rng(derive_seed(o.seed, b));
    std::vector<double> first(grid.size());
    std::vector<double> second(grid.size());
    LogMoments m;
    const std::uint64_t reps = block_reps(b, o.replications);
    while (m.count < reps) {
      sampler->sample_pair(rng, first, second);
      for (const auto* path : {&first, &second}) {
        if (m.count == reps) break;
        double sup = 0.0;  // t = 0 contributes 0
        for (std::size_t j = 1; j < path->size(); ++j) sup = std::max(sup, std::numbers::sqrt2 * (*path)[j] - drift[j]);
        m.lse = log_sum_exp(m.lse, sup);
        m.lse_sq = log_sum_exp(m.lse_sq, 2.0 * sup);
        ++m.count;
      }
    }
    return m;
  });

  LogMoments total;
  for (const auto& b : blocks) {
    total.lse = log_sum_exp(total.lse, b.lse);
    total.lse_sq = log_sum_exp(total.lse_sq, b.lse_sq);
    total.count += b.count;
  }
  const double log_n = std::log(static_cast<double>(total.count));
  const double log_mean = total.lse - log_n;
  const double log_second = total.lse_sq - log_n;
  const double log_t = std::log(o.truncation_T);
  double std_error = 0.0;
  if (total.count > 1) {
    const double gap = 2.0 * log_mean - log_second;  // <= 0 by Jensen
    if (gap < 0.0) {
      const double log_var = log_second + std::log1p(-std::exp(gap)) + log_n - std::log(static_cast<double>(total.count - 1));
      std_error = std::exp(0.5 * (log_var - log_n) - log_t);
    }
  }
  return {h.value(), std::exp(log_mean - log_t), o.truncation_T, grid.spacing(), o.replications, std_error,
          ConstantMethod::simulated, PickandsEstimator::truncated_mean, o.seed};
}

}  // namespace

std::string_view to_string(ConstantMethod m) {
  switch (m) {
    case ConstantMethod::exact: return "exact";
    case ConstantMethod::analytic: return "analytic-h-half";
    case ConstantMethod::simulated: return "simulated";
  }
  return "unknown";
}

std::string_view to_string(PickandsEstimator e) {
  return e == PickandsEstimator::sup_integral ? "sup-integral" : "truncated-mean";
}

PickandsEstimate pickands(HurstIndex h, const PickandsOptions& options) {
  if (!options.force_simulation && (h.is_half() || h.is_one())) {
    const double value = h.is_half() ? 1.0 : 1.0 / std::sqrt(std::numbers::pi);
    return {h.value(), value, 0.0, 0.0, 0, 0.0, ConstantMethod::exact, options.estimator, options.seed};
  }
  if (options.replications < 2) throw ValidationError("pickands simulation needs at least 2 replications");
  return options.estimator == PickandsEstimator::sup_integral ? simulate_sup_integral(h, options)
                                                              : simulate_truncated_mean(h, options);
}

double piterbarg_h_half_analytic(double beta_neg, double beta_pos) {
  if (!(beta_neg >= 1.0 + kPiterbargDivergenceGuard) || !(beta_pos >= 1.0 + kPiterbargDivergenceGuard))
    throw NonIntegrableError("non-integrable: both drift slopes must exceed 1 (got beta_neg=" +
                             std::to_string(beta_neg) + ", beta_pos=" + std::to_string(beta_pos) + ")");
  const double sum = beta_neg + beta_pos;
  return beta_pos / (beta_pos - 1.0) + beta_neg / (beta_neg - 1.0) - sum / (sum - 1.0);
}

PiterbargEstimate piterbarg_h_half(double beta_neg, double beta_pos, const PiterbargOptions& options) {
  const double analytic = piterbarg_h_half_analytic(beta_neg, beta_pos);
  if (!options.simulate)
    return {beta_neg, beta_pos, analytic, analytic, ConstantMethod::analytic, 0.0, 0.0, 0, 0.0, options.seed};
  if (options.replications < 2) throw ValidationError("piterbarg simulation needs at least 2 replications");

  const std::size_t steps = steps_for(options.truncation_T, options.grid_delta);
  const double dt = options.truncation_T / static_cast<double>(steps);
  const double step_var = 2.0 * dt;  // variance of a sqrt(2) B increment
  const double step_sd = std::sqrt(step_var);

  // Supremum over one half-line of sqrt(2) B(t) - beta t. Between grid nodes
  // the path is a Brownian bridge, whose maximum has the closed-form law
  // P(max > m) = exp(-2 (m - x0)(m - x1) / v); it is sampled only on steps
  // where exceeding the skeleton maximum has probability above e^{-40}.
  auto half_line_sup = [&](Rng& rng, std::vector<double>& x, double beta) {
    boost::random::normal_distribution<double> normal;
    x[0] = 0.0;
    double top = 0.0;
    for (std::size_t k = 1; k <= steps; ++k) {
      x[k] = x[k - 1] + step_sd * normal(rng) - beta * dt;
      top = std::max(top, x[k]);
    }
    const double skeleton_top = top;
    std::uniform_real_distribution<double> uniform;
    for (std::size_t k = 1; k <= steps; ++k) {
      const double q = 2.0 * (skeleton_top - x[k - 1]) * (skeleton_top - x[k]) / step_var;
      if (q > 40.0) continue;
      const double u = 1.0 - uniform(rng);  // (0, 1]
      const double gap = x[k] - x[k - 1];
      const double m = 0.5 * (x[k - 1] + x[k] + std::sqrt(gap * gap - 2.0 * step_var * std::log(u)));
      top = std::max(top, m);
    }
    return top;
  };

  const auto blocks = run_blocks<Moments>(block_count(options.replications), options.threads, [&](std::size_t b) {
    Rng rng(derive_seed(options.seed, b));
    std::vector<double> x(steps + 1);
    Moments m;
    const std::uint64_t reps = block_reps(b, options.replications);
    for (; m.count < reps; ++m.count) {
      const double left = half_line_sup(rng, x, beta_neg);
      const double right = half_line_sup(rng, x, beta_pos);
      const double v = std::exp(std::max(left, right));
      m.sum += v;
      m.sum_sq += v * v;
    }
    return m;
  });
  const MeanSe r = reduce(blocks);
  return {beta_neg, beta_pos, r.mean, analytic, ConstantMethod::simulated, options.truncation_T, dt,
          options.replications, r.std_error, options.seed};
}

std::pair<double, double> piterbarg_betas(const NormalizedParams& p) {
  const CriticalPoints cp = critical_points(p);
  const PeakConstants pc = peak_constants(p, cp);
  return {1.0 + 2.0 * cp.t_star * pc.A2, 1.0 + 2.0 * cp.t_star * pc.A1};
}

}  // namespace fbmruin
