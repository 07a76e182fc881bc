#include "fbmruin/risk_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "fbmruin/errors.hpp"

namespace fbmruin {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(name) + " must be positive and finite");
}

}  // namespace

void ModelParams::validate() const {
  require_positive(a1, "a1");
  require_positive(a2, "a2");
  require_positive(c1, "c1");
  require_positive(c2, "c2");
  require_positive(sigma1, "sigma1");
  require_positive(sigma2, "sigma2");
  require_positive(horizon, "horizon");
  require_positive(n_businesses, "n_businesses");
  if (std::abs(sigma1 + sigma2 - 1.0) > 1e-12) throw ValidationError("sigma1 + sigma2 must equal 1");
}

void NormalizedParams::validate() const {
  require_positive(a1, "a1");
  require_positive(a2, "a2");
  require_positive(c1, "c1");
  require_positive(c2, "c2");
  require_positive(horizon, "horizon");
  require_positive(n_businesses, "n_businesses");
  if (!(c1 > c2)) throw ValidationError("normalized parameters need c1 > c2");
}

NormalizedParams normalize(const ModelParams& params) {
  params.validate();
  NormalizedParams out;
  out.a1 = params.a1 / params.sigma1;
  out.a2 = params.a2 / params.sigma2;
  out.c1 = params.c1 / params.sigma1;
  out.c2 = params.c2 / params.sigma2;
  out.h = params.h;
  out.horizon = params.horizon;
  out.n_businesses = params.n_businesses;
  return normalize(out);
}

NormalizedParams normalize(const NormalizedParams& params) {
  NormalizedParams out = params;
  if (out.c1 == out.c2) throw ParallelLinesError();
  if (out.c1 < out.c2) {
    std::swap(out.a1, out.a2);
    std::swap(out.c1, out.c2);
    out.swapped = !out.swapped;
  }
  out.validate();
  return out;
}

CriticalPoints critical_points(const NormalizedParams& p) {
  if (!(p.c1 > p.c2)) throw ValidationError("critical_points needs c1 > c2");
  CriticalPoints cp{};
  cp.t_star = (p.a2 - p.a1) / (p.c1 - p.c2);
  if (p.h.is_one()) {
    cp.t1 = std::numeric_limits<double>::infinity();
    cp.t2 = std::numeric_limits<double>::infinity();
  } else {
    const double h = p.h.value();
    cp.t1 = p.a1 * h / (p.c1 * (1.0 - h));
    cp.t2 = p.a2 * h / (p.c2 * (1.0 - h));
  }
  return cp;
}

double peak_m(double a, double c, HurstIndex h) {
  if (h.is_one()) return c;
  const double hv = h.value();
  return std::pow(a / (1.0 - hv), 1.0 - hv) * std::pow(c / hv, hv);
}

PeakConstants peak_constants(const NormalizedParams& p, const CriticalPoints& cp) {
  if (!(cp.t_star > 0.0)) throw ValidationError("A_i undefined: crossing time t* must be positive");
  const double h = p.h.value();
  const double t = cp.t_star;
  auto a_const = [&](double a, double c) {
    const double level = a + c * t;
    return std::abs(level * h - c * t) / (level * t);
  };
  return {peak_m(p.a1, p.c1, p.h), peak_m(p.a2, p.c2, p.h), a_const(p.a1, p.c1), a_const(p.a2, p.c2)};
}

std::string_view to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::Degenerate: return "Degenerate";
    case RegimeTag::SimCaseI: return "SimCaseI";
    case RegimeTag::SimCaseII: return "SimCaseII";
    case RegimeTag::InteriorLowH: return "InteriorLowH";
    case RegimeTag::InteriorHalf: return "InteriorHalf";
    case RegimeTag::InteriorHighH: return "InteriorHighH";
    case RegimeTag::SimCaseIV: return "SimCaseIV";
    case RegimeTag::SimCaseV: return "SimCaseV";
    case RegimeTag::BeyondHorizon: return "BeyondHorizon";
  }
  return "unknown";
}

bool nearly_equal(double x, double y, double rel_tol) {
  return std::abs(x - y) <= rel_tol * std::max(std::abs(x), std::abs(y));
}

bool is_interior(RegimeTag tag) {
  return tag == RegimeTag::InteriorLowH || tag == RegimeTag::InteriorHalf || tag == RegimeTag::InteriorHighH;
}

Regime classify(const NormalizedParams& p) {
  std::ostringstream detail;
  detail.precision(12);
  if (p.a1 >= p.a2) {
    detail << "a1=" << p.a1 << " >= a2=" << p.a2 << " with c1 > c2: company 1's line dominates on [0,inf), "
           << "the problem reduces to one-dimensional ruin of company 1";
    return {RegimeTag::Degenerate, detail.str()};
  }
  const CriticalPoints cp = critical_points(p);
  detail << "t*=" << cp.t_star << " t1=" << cp.t1 << " t2=" << cp.t2 << " T=" << p.horizon << " H=" << p.h.value();
  if (cp.t_star >= p.horizon) {
    detail << "; t* >= T";
    return {RegimeTag::BeyondHorizon, detail.str()};
  }
  if (p.h.is_one()) {
    detail << "; H=1, t_i infinite so t* < t1";
    return {RegimeTag::SimCaseI, detail.str()};
  }
  if (nearly_equal(cp.t_star, cp.t1)) {
    detail << "; t* = t1";
    return {RegimeTag::SimCaseII, detail.str()};
  }
  if (cp.t_star < cp.t1) {
    detail << "; t* < t1";
    return {RegimeTag::SimCaseI, detail.str()};
  }
  if (nearly_equal(cp.t_star, cp.t2)) {
    detail << "; t1 < t* = t2";
    return {RegimeTag::SimCaseIV, detail.str()};
  }
  if (cp.t_star > cp.t2) {
    detail << "; t1 < t2 < t*";
    return {RegimeTag::SimCaseV, detail.str()};
  }
  detail << "; t1 < t* < t2";
  if (p.h.is_half()) return {RegimeTag::InteriorHalf, detail.str()};
  return {p.h.value() < 0.5 ? RegimeTag::InteriorLowH : RegimeTag::InteriorHighH, detail.str()};
}

}  // namespace fbmruin
