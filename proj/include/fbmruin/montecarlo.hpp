#pragma once

// Finite-N ruin probabilities by simulation. N enters only through the
// barriers (a_i + c_i t) sqrt(N), so one fBm path serves every N.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fbmruin/asymptotics.hpp"
#include "fbmruin/gaussian_paths.hpp"
#include "fbmruin/parallel.hpp"
#include "fbmruin/risk_model.hpp"

namespace fbmruin {

enum class RuinType { simultaneous, joint, at_least_one };
enum class EstimatorKind { plain, shifted };

std::string_view to_string(RuinType r);
std::string_view to_string(EstimatorKind e);
RuinType parse_ruin_type(std::string_view s);
EstimatorKind parse_estimator(std::string_view s);

inline constexpr std::size_t kDefaultGridPoints = 2049;  // 2^11 + 1
inline constexpr std::uint64_t kMinReplications = 100;

struct RuinQuery {
  NormalizedParams params;
  RuinType ruin_type = RuinType::joint;
  Grid grid{1.0, kDefaultGridPoints};
  std::uint64_t replications = 10000;
  std::uint64_t seed = kDefaultSeed;
  EstimatorKind estimator = EstimatorKind::plain;
  unsigned threads = 1;

  void validate() const;
};

struct EstimateCI {
  double p_hat = 0.0;
  double std_error = 0.0;
  std::uint64_t replications = 0;
  std::uint64_t hits = 0;
  std::uint64_t seed = 0;
  EstimatorKind estimator = EstimatorKind::plain;
  double effective_sample_size = 0.0;
  std::string warning;  // empty unless the shifted weights degenerated
};

/// Mean shift gamma * Cov(B_H(t_j), B_H(t0)) on the grid. With gamma =
/// barrier(t0) / Var(B_H(t0)) the shifted mean touches the barrier at t0.
struct ShiftSpec {
  double center_time;
  std::size_t center_index;
  double center_variance;
  double barrier;
  double magnitude;
  std::vector<double> shift;
};

ShiftSpec default_shift(const RuinQuery& q);

struct HitFlags {
  bool simultaneous = false;
  bool joint = false;
  bool at_least_one = false;

  bool get(RuinType r) const;
};

/// Precomputed barriers (a_i + c_i t_j) sqrt(N) for one N.
class Barriers {
 public:
  Barriers(const NormalizedParams& p, const Grid& grid, double n_businesses);
  HitFlags evaluate(std::span<const double> path) const;

 private:
  std::vector<double> first_;
  std::vector<double> second_;
};

EstimateCI estimate_ruin(const RuinQuery& q);

/// Per-replication event counts on plain paths, with the number of
/// replications that break simultaneous => joint => at_least_one.
struct InclusionReport {
  std::uint64_t replications = 0;
  std::uint64_t simultaneous = 0;
  std::uint64_t joint = 0;
  std::uint64_t at_least_one = 0;
  std::uint64_t violations = 0;
};

InclusionReport check_inclusion_chain(const NormalizedParams& p, const Grid& grid, std::uint64_t replications,
                                      std::uint64_t seed, unsigned threads = 1);

enum class EstimatorChoice { automatic, plain, shifted };

struct ConvergenceOptions {
  std::size_t grid_points = kDefaultGridPoints;
  std::uint64_t replications = 20000;
  std::uint64_t seed = kDefaultSeed;
  EstimatorChoice estimator = EstimatorChoice::automatic;
  /// Automatic choice switches to the shifted estimator below this plain estimate.
  double plain_threshold = 1e-3;
  unsigned threads = 1;
  /// Missing entries fall back to the exact Pickands values and the analytic
  /// Piterbarg-type constant where those exist.
  AsymptoticConstants constants;
  FormulaOptions formula;
};

struct ConvergenceRow {
  double n;
  double mc_estimate;
  double mc_stderr;
  EstimatorKind estimator;
  double asym_value;      // NaN when no exact asymptotic exists
  double ratio;           // mc / asym
  double log_mc_over_n;   // -log(mc) / N
  double reference_rate;  // exponential rate the slope should approach
  std::string asym_form;
};

std::vector<ConvergenceRow> convergence_study(const NormalizedParams& p, RuinType ruin_type,
                                              std::span<const double> n_list, const ConvergenceOptions& options = {});

}  // namespace fbmruin
