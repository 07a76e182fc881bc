#include "fbmruin/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "fbmruin/constants.hpp"
#include "fbmruin/errors.hpp"

namespace fbmruin {
namespace {

constexpr std::uint64_t kBlockSize = 512;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct WeightSums {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t hits = 0;

  void add(double w) {
    sum += w;
    sum_sq += w * w;
    ++hits;
  }
  void merge(const WeightSums& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    hits += o.hits;
  }
};

EstimateCI finish(const WeightSums& s, std::uint64_t replications, std::uint64_t seed, EstimatorKind kind) {
  EstimateCI ci;
  const double n = static_cast<double>(replications);
  ci.p_hat = s.sum / n;
  const double var = replications > 1 ? std::max(0.0, (s.sum_sq - n * ci.p_hat * ci.p_hat) / (n - 1.0)) : 0.0;
  ci.std_error = std::sqrt(var / n);
  ci.replications = replications;
  ci.hits = s.hits;
  ci.seed = seed;
  ci.estimator = kind;
  ci.effective_sample_size = s.sum_sq > 0.0 ? s.sum * s.sum / s.sum_sq : 0.0;
  if (kind == EstimatorKind::shifted && (s.hits == 0 || ci.effective_sample_size < 1.0))
    ci.warning = "shifted estimator has zero effective sample size";
  else if (s.hits == 0)
    ci.warning = "no ruin events observed";
  return ci;
}

std::size_t block_count(std::uint64_t replications) { return (replications + kBlockSize - 1) / kBlockSize; }

std::uint64_t block_reps(std::size_t b, std::uint64_t replications) {
  return std::min<std::uint64_t>(kBlockSize, replications - b * kBlockSize);
}

// Runs `visit(path)` over the replications of block b, two paths per draw.
template <class Visit>
void for_each_path(const PathSampler& sampler, std::uint64_t seed, std::size_t b, std::uint64_t replications,
                   Visit&& visit) {
  Rng rng(derive_seed(seed, b));
  const std::size_t n = sampler.grid().size();
  std::vector<double> first(n);
  std::vector<double> second(n);
  const std::uint64_t reps = block_reps(b, replications);
  for (std::uint64_t done = 0; done < reps;) {
    sampler.sample_pair(rng, first, second);
    visit(std::span<const double>(first));
    if (++done == reps) break;
    visit(std::span<const double>(second));
    ++done;
  }
}

// Time and company whose barrier the mean path should touch.
struct ShiftCenter {
  double time;
  int company;  // 0 = larger of the two barriers at `time`
};

ShiftCenter shift_center(const NormalizedParams& p, RuinType ruin_type) {
  const CriticalPoints cp = p.a1 < p.a2 ? critical_points(p) : CriticalPoints{0.0, 0.0, 0.0};
  const double horizon = p.horizon;
  const double hv = p.h.value();
  auto peak = [&](double a, double c) { return p.h.is_one() ? horizon : std::min(a * hv / (c * (1.0 - hv)), horizon); };

  if (ruin_type == RuinType::at_least_one) {
    auto exponent = [&](double a, double c) {
      const double t = peak(a, c);
      return (a + c * t) * (a + c * t) / std::pow(t, 2.0 * hv);
    };
    return exponent(p.a1, p.c1) <= exponent(p.a2, p.c2) ? ShiftCenter{peak(p.a1, p.c1), 1}
                                                        : ShiftCenter{peak(p.a2, p.c2), 2};
  }
  switch (classify(p).tag) {
    case RegimeTag::Degenerate:
    case RegimeTag::SimCaseI:
      return {peak(p.a1, p.c1), 0};
    case RegimeTag::SimCaseV:
    case RegimeTag::BeyondHorizon:
      return {peak(p.a2, p.c2), 0};
    default:
      return {cp.t_star, 0};
  }
}

}  // namespace

std::string_view to_string(RuinType r) {
  switch (r) {
    case RuinType::simultaneous: return "simultaneous";
    case RuinType::joint: return "joint";
    case RuinType::at_least_one: return "at_least_one";
  }
  return "unknown";
}

std::string_view to_string(EstimatorKind e) { return e == EstimatorKind::plain ? "plain" : "shifted"; }

RuinType parse_ruin_type(std::string_view s) {
  if (s == "simultaneous" || s == "sim") return RuinType::simultaneous;
  if (s == "joint" || s == "and") return RuinType::joint;
  if (s == "at_least_one" || s == "or") return RuinType::at_least_one;
  throw ValidationError("unknown ruin type '" + std::string(s) + "'");
}

EstimatorKind parse_estimator(std::string_view s) {
  if (s == "plain") return EstimatorKind::plain;
  if (s == "shifted") return EstimatorKind::shifted;
  throw ValidationError("unknown estimator '" + std::string(s) + "'");
}

bool HitFlags::get(RuinType r) const {
  switch (r) {
    case RuinType::simultaneous: return simultaneous;
    case RuinType::joint: return joint;
    case RuinType::at_least_one: return at_least_one;
  }
  return false;
}

void RuinQuery::validate() const {
  params.validate();
  if (replications < kMinReplications)
    throw ValidationError("at least " + std::to_string(kMinReplications) + " replications are required");
  if (std::abs(grid.horizon() - params.horizon) > 1e-12 * params.horizon)
    throw ValidationError("grid horizon must equal the model horizon");
}

Barriers::Barriers(const NormalizedParams& p, const Grid& grid, double n_businesses)
    : first_(grid.size()), second_(grid.size()) {
  const double root_n = std::sqrt(n_businesses);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double t = j == 0 ? 0.0 : grid.time(j);
    first_[j] = (p.a1 + p.c1 * t) * root_n;
    second_[j] = (p.a2 + p.c2 * t) * root_n;
  }
}

HitFlags Barriers::evaluate(std::span<const double> path) const {
  HitFlags f;
  bool first = false;
  bool second = false;
  for (std::size_t j = 0; j < path.size(); ++j) {
    const bool h1 = path[j] > first_[j];
    const bool h2 = path[j] > second_[j];
    first = first || h1;
    second = second || h2;
    f.simultaneous = f.simultaneous || (h1 && h2);
  }
  f.joint = first && second;
  f.at_least_one = first || second;
  return f;
}

ShiftSpec default_shift(const RuinQuery& q) {
  const NormalizedParams& p = q.params;
  const ShiftCenter center = shift_center(p, q.ruin_type);
  const std::size_t index = std::max<std::size_t>(1, q.grid.nearest_index(center.time));
  const double t0 = q.grid.time(index);
  const double root_n = std::sqrt(p.n_businesses);
  const double level1 = (p.a1 + p.c1 * t0) * root_n;
  const double level2 = (p.a2 + p.c2 * t0) * root_n;
  const double barrier = center.company == 1 ? level1 : center.company == 2 ? level2 : std::max(level1, level2);

  ShiftSpec s;
  s.center_time = t0;
  s.center_index = index;
  s.center_variance = fbm_covariance(t0, t0, p.h);
  s.barrier = barrier;
  s.magnitude = barrier / s.center_variance;
  s.shift.resize(q.grid.size());
  s.shift[0] = 0.0;
  for (std::size_t j = 1; j < q.grid.size(); ++j) s.shift[j] = s.magnitude * fbm_covariance(q.grid.time(j), t0, p.h);
  return s;
}

EstimateCI estimate_ruin(const RuinQuery& q) {
  q.validate();
  const auto sampler = make_sampler(q.grid, q.params.h);
  const Barriers barriers(q.params, q.grid, q.params.n_businesses);
  const bool shifted = q.estimator == EstimatorKind::shifted;
  const ShiftSpec shift = shifted ? default_shift(q) : ShiftSpec{};

  const auto blocks = run_blocks<WeightSums>(block_count(q.replications), q.threads, [&](std::size_t b) {
    WeightSums sums;
    std::vector<double> moved(q.grid.size());
    for_each_path(*sampler, q.seed, b, q.replications, [&](std::span<const double> path) {
      if (!shifted) {
        if (barriers.evaluate(path).get(q.ruin_type)) sums.add(1.0);
        return;
      }
      for (std::size_t j = 0; j < path.size(); ++j) moved[j] = path[j] + shift.shift[j];
      if (!barriers.evaluate(moved).get(q.ruin_type)) return;
      const double x0 = moved[shift.center_index];
      sums.add(std::exp(-shift.magnitude * x0 + 0.5 * shift.magnitude * shift.magnitude * shift.center_variance));
    });
    return sums;
  });

  WeightSums total;
  for (const auto& b : blocks) total.merge(b);
  return finish(total, q.replications, q.seed, q.estimator);
}

InclusionReport check_inclusion_chain(const NormalizedParams& p, const Grid& grid, std::uint64_t replications,
                                      std::uint64_t seed, unsigned threads) {
  const auto sampler = make_sampler(grid, p.h);
  const Barriers barriers(p, grid, p.n_businesses);
  const auto blocks = run_blocks<InclusionReport>(block_count(replications), threads, [&](std::size_t b) {
    InclusionReport r;
    for_each_path(*sampler, seed, b, replications, [&](std::span<const double> path) {
      const HitFlags f = barriers.evaluate(path);
      ++r.replications;
      r.simultaneous += f.simultaneous;
      r.joint += f.joint;
      r.at_least_one += f.at_least_one;
      if ((f.simultaneous && !f.joint) || (f.joint && !f.at_least_one)) ++r.violations;
    });
    return r;
  });
  InclusionReport total;
  for (const auto& b : blocks) {
    total.replications += b.replications;
    total.simultaneous += b.simultaneous;
    total.joint += b.joint;
    total.at_least_one += b.at_least_one;
    total.violations += b.violations;
  }
  return total;
}

std::vector<ConvergenceRow> convergence_study(const NormalizedParams& p, RuinType ruin_type,
                                              std::span<const double> n_list, const ConvergenceOptions& options) {
  p.validate();
  if (n_list.empty()) throw ValidationError("convergence study needs at least one N");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (!(n_list[i] > 0.0)) throw ValidationError("every N must be positive");
    if (i > 0 && !(n_list[i] > n_list[i - 1])) throw ValidationError("N list must be strictly ascending");
  }
  if (options.replications < kMinReplications)
    throw ValidationError("at least " + std::to_string(kMinReplications) + " replications are required");

  const Grid grid(p.horizon, options.grid_points);
  const auto sampler = make_sampler(grid, p.h);

  // The shift direction does not depend on N; its magnitude scales with sqrt(N).
  NormalizedParams unit = p;
  unit.n_businesses = 1.0;
  RuinQuery base{unit, ruin_type, grid, options.replications, options.seed, EstimatorKind::shifted, options.threads};
  const ShiftSpec unit_shift = default_shift(base);

  std::vector<Barriers> barriers;
  barriers.reserve(n_list.size());
  for (double n : n_list) barriers.emplace_back(p, grid, n);

  struct PerN {
    WeightSums plain;
    WeightSums shifted;
  };
  const auto blocks = run_blocks<std::vector<PerN>>(block_count(options.replications), options.threads,
                                                    [&](std::size_t b) {
    std::vector<PerN> acc(n_list.size());
    std::vector<double> moved(grid.size());
    for_each_path(*sampler, options.seed, b, options.replications, [&](std::span<const double> path) {
      for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (barriers[i].evaluate(path).get(ruin_type)) acc[i].plain.add(1.0);
        const double root_n = std::sqrt(n_list[i]);
        const double gamma = unit_shift.magnitude * root_n;
        for (std::size_t j = 0; j < path.size(); ++j) moved[j] = path[j] + root_n * unit_shift.shift[j];
        if (!barriers[i].evaluate(moved).get(ruin_type)) continue;
        const double x0 = moved[unit_shift.center_index];
        acc[i].shifted.add(std::exp(-gamma * x0 + 0.5 * gamma * gamma * unit_shift.center_variance));
      }
    });
    return acc;
  });

  std::vector<PerN> totals(n_list.size());
  for (const auto& block : blocks)
    for (std::size_t i = 0; i < n_list.size(); ++i) {
      totals[i].plain.merge(block[i].plain);
      totals[i].shifted.merge(block[i].shifted);
    }

  // Reference asymptotics for the ratio and slope columns.
  const Regime regime = classify(p);
  AsymptoticConstants constants = options.constants;
  if (!constants.pickands) constants.pickands = AsymptoticConstants::known_for(p.h).pickands;
  if (!constants.piterbarg && regime.tag == RegimeTag::InteriorHalf) {
    const auto [beta_neg, beta_pos] = piterbarg_betas(p);
    constants.piterbarg = piterbarg_h_half_analytic(beta_neg, beta_pos);
  }
  std::optional<AsymptoticValue> asym;
  double reference_rate = kNaN;
  try {
    if (ruin_type == RuinType::simultaneous) {
      asym = pi_sim_asym(p, regime, constants, options.formula);
    } else if (ruin_type == RuinType::joint) {
      asym = p.h.is_one() ? pi_and_exact_h1(p, options.formula) : pi_and_asym(p, regime, constants, options.formula);
    }
  } catch (const ValidationError&) {
    asym.reset();
  }
  if (asym)
    reference_rate = asym->rate;
  else if (ruin_type == RuinType::joint)
    reference_rate = log_rate_and(p).rate;

  std::vector<ConvergenceRow> rows;
  rows.reserve(n_list.size());
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const EstimateCI plain = finish(totals[i].plain, options.replications, options.seed, EstimatorKind::plain);
    const EstimateCI shifted = finish(totals[i].shifted, options.replications, options.seed, EstimatorKind::shifted);
    bool use_shifted = options.estimator == EstimatorChoice::shifted;
    if (options.estimator == EstimatorChoice::automatic) use_shifted = plain.p_hat < options.plain_threshold;
    const EstimateCI& chosen = use_shifted ? shifted : plain;

    ConvergenceRow row;
    row.n = n_list[i];
    row.mc_estimate = chosen.p_hat;
    row.mc_stderr = chosen.std_error;
    row.estimator = chosen.estimator;
    row.asym_value = asym ? asym->evaluate(n_list[i]) : kNaN;
    row.ratio = asym ? chosen.p_hat / row.asym_value : kNaN;
    row.log_mc_over_n = chosen.p_hat > 0.0 ? -std::log(chosen.p_hat) / n_list[i] : kNaN;
    row.reference_rate = reference_rate;
    row.asym_form = asym ? asym->form : "";
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fbmruin
