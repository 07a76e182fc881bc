#pragma once

// Two-company model with proportional reinsurance: parameters, the
// reduction to unit claim shares, the crossing and peak times, and the
// regime classification every asymptotic formula dispatches on.

#include <string>
#include <string_view>

#include "fbmruin/gaussian_paths.hpp"

namespace fbmruin {

/// R_i(t) = a_i + c_i t - sigma_i X(t), i = 1, 2, with N aggregated businesses.
struct ModelParams {
  double a1 = 0.0;
  double a2 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double sigma1 = 0.5;
  double sigma2 = 0.5;
  HurstIndex h{0.5};
  double horizon = 1.0;
  double n_businesses = 1.0;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Unit claim shares, companies relabelled so that c1 > c2.
struct NormalizedParams {
  double a1 = 0.0;
  double a2 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  HurstIndex h{0.5};
  double horizon = 1.0;
  double n_businesses = 1.0;
  bool swapped = false;

  void validate() const;
};

NormalizedParams normalize(const ModelParams& params);
/// Re-applies the relabelling rule; the identity on normalize()'s output.
NormalizedParams normalize(const NormalizedParams& params);

struct CriticalPoints {
  double t_star;  // (a2 - a1) / (c1 - c2)
  double t1;      // a1 H / (c1 (1 - H)); +inf at H = 1
  double t2;
};

CriticalPoints critical_points(const NormalizedParams& p);

/// m(a, c, H) = (a / (1 - H))^{1-H} (c / H)^H; equals c at H = 1.
double peak_m(double a, double c, HurstIndex h);

struct PeakConstants {
  double m1;
  double m2;
  double A1;
  double A2;
};

/// A_i = |(a_i + c_i t*) H - c_i t*| / ((a_i + c_i t*) t*). Throws when t* <= 0.
PeakConstants peak_constants(const NormalizedParams& p, const CriticalPoints& cp);

enum class RegimeTag {
  Degenerate,
  SimCaseI,
  SimCaseII,
  InteriorLowH,
  InteriorHalf,
  InteriorHighH,
  SimCaseIV,
  SimCaseV,
  BeyondHorizon,
};

std::string_view to_string(RegimeTag tag);

struct Regime {
  RegimeTag tag;
  std::string detail;
};

/// Relative tolerance for t* == t1 and t* == t2.
inline constexpr double kBoundaryTolerance = 1e-9;

bool nearly_equal(double x, double y, double rel_tol = kBoundaryTolerance);

Regime classify(const NormalizedParams& p);

bool is_interior(RegimeTag tag);

}  // namespace fbmruin
