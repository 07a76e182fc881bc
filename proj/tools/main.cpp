#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fbmruin/asymptotics.hpp"
#include "fbmruin/constants.hpp"
#include "fbmruin/errors.hpp"
#include "fbmruin/montecarlo.hpp"
#include "fbmruin/risk_model.hpp"
#include "report.hpp"

using namespace fbmruin;
using namespace fbmruin::cli;

namespace {

struct ModelInputs {
  std::optional<double> a1, a2, c1, c2, sigma1, sigma2, h, horizon, n_businesses;
};

struct Settings {
  std::string config_path;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  std::string out_path;
  std::string format;
  std::optional<std::string> plot;
  ModelInputs flags;
  FormulaOptions formula;

  std::vector<double> n_list;
  std::string ruin_type = "joint";
  std::string estimator;
  std::uint64_t replications = 0;
  std::size_t grid_points = kDefaultGridPoints;
  std::optional<double> pickands_value;
  std::optional<double> piterbarg_value;
  std::optional<double> beta_neg, beta_pos;
  bool simulate = false;
  bool ladder = false;
  std::optional<double> truncation_T;
  std::optional<double> grid_delta;
  std::string pickands_estimator = "sup-integral";
  std::size_t log_rate_grid = 200;
};

ModelInputs read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ValidationError("config file must hold a JSON object");
  ModelInputs m;
  const std::pair<const char*, std::optional<double>*> keys[] = {
      {"a1", &m.a1},         {"a2", &m.a2},         {"c1", &m.c1},      {"c2", &m.c2},
      {"sigma1", &m.sigma1}, {"sigma2", &m.sigma2}, {"h", &m.h},        {"horizon", &m.horizon},
      {"n_businesses", &m.n_businesses}};
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& [name, slot] : keys) {
      if (key != name) continue;
      if (!value.is_number()) throw ValidationError("config key '" + key + "' must be a number");
      *slot = value.get<double>();
      known = true;
    }
    if (!known) throw ValidationError("unknown config key '" + key + "'");
  }
  return m;
}

class Session {
 public:
  explicit Session(const Settings& s) : s_(s) {
    if (!s.config_path.empty()) file_ = read_config(s.config_path);
  }

  std::optional<double> get(std::optional<double> ModelInputs::*field) const {
    if (s_.flags.*field) return s_.flags.*field;
    return file_.*field;
  }

  double require(std::optional<double> ModelInputs::*field, const char* name) const {
    const auto v = get(field);
    if (!v) throw ValidationError(std::string("missing model parameter --") + name + " (flag or config key)");
    return *v;
  }

  HurstIndex hurst() const { return HurstIndex(require(&ModelInputs::h, "h")); }

  ModelParams model() const {
    ModelParams p;
    p.a1 = require(&ModelInputs::a1, "a1");
    p.a2 = require(&ModelInputs::a2, "a2");
    p.c1 = require(&ModelInputs::c1, "c1");
    p.c2 = require(&ModelInputs::c2, "c2");
    p.sigma1 = get(&ModelInputs::sigma1).value_or(0.5);
    p.sigma2 = get(&ModelInputs::sigma2).value_or(0.5);
    p.h = hurst();
    p.horizon = require(&ModelInputs::horizon, "horizon");
    p.n_businesses = get(&ModelInputs::n_businesses).value_or(1.0);
    p.validate();
    return p;
  }

  unsigned threads() const {
    if (s_.threads > 0) return s_.threads;
    return std::max(1u, std::thread::hardware_concurrency());
  }

  std::string format(const char* fallback) const { return s_.format.empty() ? fallback : s_.format; }

  void emit(const std::string& body, const std::string& what) const {
    if (s_.out_path.empty()) {
      std::cout << body;
      return;
    }
    std::ofstream out(s_.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + s_.out_path + "'");
    out << body;
    std::cout << what << " written to " << s_.out_path << '\n';
  }

  void emit_json(const json& j, const std::string& what) const { emit(j.dump(2) + "\n", what); }

  const Settings& settings() const { return s_; }

 private:
  const Settings& s_;
  ModelInputs file_;
};

json params_json(const ModelParams& p) {
  return {{"a1", number(p.a1)},         {"a2", number(p.a2)},         {"c1", number(p.c1)},
          {"c2", number(p.c2)},         {"sigma1", number(p.sigma1)}, {"sigma2", number(p.sigma2)},
          {"h", number(p.h.value())},   {"horizon", number(p.horizon)}, {"n_businesses", number(p.n_businesses)}};
}

json normalized_json(const NormalizedParams& p) {
  return {{"a1", number(p.a1)}, {"a2", number(p.a2)}, {"c1", number(p.c1)},
          {"c2", number(p.c2)}, {"swapped", p.swapped}};
}

// Critical points, peak constants and regime of one normalized instance.
json geometry_json(const NormalizedParams& p) {
  json j;
  const CriticalPoints cp = critical_points(p);
  j["t_star"] = number(cp.t_star);
  j["t1"] = number(cp.t1);
  j["t2"] = number(cp.t2);
  j["m1"] = number(peak_m(p.a1, p.c1, p.h));
  j["m2"] = number(peak_m(p.a2, p.c2, p.h));
  if (cp.t_star > 0.0) {
    const PeakConstants pc = peak_constants(p, cp);
    j["A1"] = number(pc.A1);
    j["A2"] = number(pc.A2);
  } else {
    j["A1"] = nullptr;
    j["A2"] = nullptr;
  }
  const Regime r = classify(p);
  j["regime"] = std::string(to_string(r.tag));
  j["detail"] = r.detail;
  return j;
}

std::string simultaneous_note(const NormalizedParams& p, RegimeTag tag) {
  if (p.h.is_one()) return "no closed form at H = 1; Monte Carlo only";
  switch (tag) {
    case RegimeTag::Degenerate: return "coincides with one-dimensional ruin of company 1";
    case RegimeTag::SimCaseI: return "exact: one-dimensional asymptotics of company 1";
    case RegimeTag::SimCaseII: return "exact: half the one-dimensional asymptotics of company 1";
    case RegimeTag::InteriorLowH: return "exact: crossing-point asymptotics with Pickands constant";
    case RegimeTag::InteriorHalf: return "exact: crossing-point asymptotics with Piterbarg-type constant";
    case RegimeTag::InteriorHighH: return "exact: Gaussian tail at the crossing point";
    case RegimeTag::SimCaseIV: return "exact: half the one-dimensional asymptotics of company 2";
    case RegimeTag::SimCaseV: return "exact: one-dimensional asymptotics of company 2";
    case RegimeTag::BeyondHorizon: return "not applicable: t* >= T";
  }
  return "";
}

std::string joint_note(const NormalizedParams& p, RegimeTag tag) {
  if (p.h.is_one()) return "exact for every N (Gaussian tail)";
  switch (tag) {
    case RegimeTag::Degenerate: return "coincides with one-dimensional ruin of company 1";
    case RegimeTag::SimCaseI: return "exact: one-dimensional asymptotics of company 1";
    case RegimeTag::SimCaseV: return "exact: one-dimensional asymptotics of company 2";
    case RegimeTag::BeyondHorizon: return "logarithmic rate only (t* >= T)";
    default: return "logarithmic rate only";
  }
}

int cmd_classify(const Session& s) {
  const ModelParams raw = s.model();
  const NormalizedParams p = normalize(raw);
  const Regime r = classify(p);
  json j;
  j["input"] = params_json(raw);
  // The raw (a, c) read as if both claim shares were one.
  try {
    NormalizedParams unit{raw.a1, raw.a2, raw.c1, raw.c2, raw.h, raw.horizon, raw.n_businesses, false};
    unit = normalize(unit);
    j["raw"] = normalized_json(unit);
    j["raw"]["geometry"] = geometry_json(unit);
  } catch (const ValidationError&) {
    j["raw"] = nullptr;
  }
  j["normalized"] = normalized_json(p);
  j["normalized"]["geometry"] = geometry_json(p);
  j["regime"] = std::string(to_string(r.tag));
  j["detail"] = r.detail;
  j["applicable"] = {{"simultaneous", simultaneous_note(p, r.tag)},
                     {"joint", joint_note(p, r.tag)},
                     {"log_rate", "always (variational rate of joint ruin)"}};
  json notes = json::array();
  if (r.tag == RegimeTag::Degenerate)
    notes.push_back("a1 >= a2 with c1 > c2: company 1's barrier lies above company 2's, so the two-dimensional problem "
                    "degenerates to one-dimensional ruin of company 1");
  if (r.tag == RegimeTag::BeyondHorizon)
    notes.push_back("warning: t* >= T, the simultaneous-ruin asymptotics do not apply");
  j["notes"] = notes;

  if (s.format("json") == "csv") {
    Table t{{"field", "value"}, {}};
    const auto& g = j["normalized"]["geometry"];
    for (const char* k : {"t_star", "t1", "t2", "m1", "m2", "A1", "A2"})
      t.rows.push_back({k, g[k].is_null() ? "nan" : csv_number(g[k].get<double>())});
    t.rows.push_back({"regime", j["regime"]});
    s.emit(t.str(), "classification");
  } else {
    s.emit_json(j, "classification");
  }
  return 0;
}

AsymptoticConstants constants_for(const Session& s, const NormalizedParams& p, const Regime& r) {
  AsymptoticConstants k = AsymptoticConstants::known_for(p.h);
  if (s.settings().pickands_value) k.pickands = *s.settings().pickands_value;
  if (s.settings().piterbarg_value) {
    k.piterbarg = *s.settings().piterbarg_value;
  } else if (r.tag == RegimeTag::InteriorHalf) {
    const auto [bn, bp] = piterbarg_betas(p);
    k.piterbarg = piterbarg_h_half_analytic(bn, bp);
  }
  return k;
}

json value_json(const AsymptoticValue& v) {
  return {{"form", v.form},
          {"log_prefactor", number(v.log_prefactor)},
          {"n_power", number(v.n_power)},
          {"rate", number(v.rate)},
          {"sign", number(v.sign)},
          {"exact_tail", v.exact_tail.has_value()}};
}

int cmd_asym(const Session& s) {
  const NormalizedParams p = normalize(s.model());
  const Regime r = classify(p);
  const AsymptoticConstants k = constants_for(s, p, r);
  const FormulaOptions& f = s.settings().formula;

  std::vector<std::pair<std::string, std::optional<AsymptoticValue>>> values;
  json j;
  j["regime"] = std::string(to_string(r.tag));
  j["constants"] = {{"pickands", k.pickands ? number(*k.pickands) : json(nullptr)},
                    {"piterbarg", k.piterbarg ? number(*k.piterbarg) : json(nullptr)}};
  auto attempt = [&](const char* name, auto&& fn) {
    try {
      const AsymptoticValue v = fn();
      j[name] = value_json(v);
      values.emplace_back(name, v);
    } catch (const ValidationError& e) {
      j[name] = {{"error", e.what()}};
      values.emplace_back(name, std::nullopt);
    }
  };
  attempt("simultaneous", [&] { return pi_sim_asym(p, r, k, f); });
  attempt("joint", [&] { return p.h.is_one() ? pi_and_exact_h1(p, f) : pi_and_asym(p, r, k, f); });

  const auto& ns = s.settings().n_list;
  if (!ns.empty()) {
    Table t{{"ruin_type", "N", "value", "log_value"}, {}};
    for (const auto& [name, v] : values) {
      if (!v) continue;
      for (double n : ns) t.rows.push_back({name, csv_number(n), csv_number(v->evaluate(n)), csv_number(v->log_evaluate(n))});
    }
    s.emit(t.str(), "asymptotic table");
    return 0;
  }
  if (s.format("json") == "csv") {
    Table t{{"ruin_type", "form", "log_prefactor", "n_power", "rate"}, {}};
    for (const auto& [name, v] : values)
      if (v) t.rows.push_back({name, v->form, csv_number(v->log_prefactor), csv_number(v->n_power), csv_number(v->rate)});
    s.emit(t.str(), "asymptotics");
    return 0;
  }
  s.emit_json(j, "asymptotics");
  return 0;
}

int cmd_logasym(const Session& s) {
  const NormalizedParams p = normalize(s.model());
  LogRateOptions o;
  o.grid_points = s.settings().log_rate_grid;
  o.threads = s.threads();
  const LogRateResult r = log_rate_and(p, o);
  json j = {{"rate", number(r.rate)},
            {"argmin_s", number(r.argmin_s)},
            {"argmin_t", number(r.argmin_t)},
            {"objective_at_argmin", number(r.objective_at_argmin)},
            {"regime", std::string(to_string(classify(p).tag))}};
  if (s.format("json") == "csv") {
    Table t{{"rate", "argmin_s", "argmin_t", "objective_at_argmin"},
            {{csv_number(r.rate), csv_number(r.argmin_s), csv_number(r.argmin_t), csv_number(r.objective_at_argmin)}}};
    s.emit(t.str(), "log rate");
    return 0;
  }
  s.emit_json(j, "log rate");
  return 0;
}

std::vector<RuinType> ruin_types(const std::string& name) {
  if (name == "all") return {RuinType::simultaneous, RuinType::joint, RuinType::at_least_one};
  return {parse_ruin_type(name)};
}

int cmd_simulate(const Session& s) {
  const ModelParams raw = s.model();
  const NormalizedParams base = normalize(raw);
  const Settings& st = s.settings();
  const std::vector<double> ns = st.n_list.empty() ? std::vector<double>{raw.n_businesses} : st.n_list;
  const EstimatorKind kind = parse_estimator(st.estimator.empty() ? "plain" : st.estimator);

  Table t{{"ruin_type", "N", "estimator", "p_hat", "std_error", "replications", "grid_n", "seed"}, {}};
  json rows = json::array();
  for (RuinType rt : ruin_types(st.ruin_type))
    for (double n : ns) {
      NormalizedParams p = base;
      p.n_businesses = n;
      RuinQuery q{p, rt, Grid(p.horizon, st.grid_points), st.replications ? st.replications : 10000, st.seed, kind,
                  s.threads()};
      const EstimateCI e = estimate_ruin(q);
      t.rows.push_back({std::string(to_string(rt)), csv_number(n), std::string(to_string(e.estimator)),
                        csv_number(e.p_hat), csv_number(e.std_error), std::to_string(e.replications),
                        std::to_string(st.grid_points), std::to_string(e.seed)});
      json row = {{"ruin_type", to_string(rt)},
                  {"N", number(n)},
                  {"estimator", to_string(e.estimator)},
                  {"p_hat", number(e.p_hat)},
                  {"std_error", number(e.std_error)},
                  {"replications", e.replications},
                  {"hits", e.hits},
                  {"effective_sample_size", number(e.effective_sample_size)},
                  {"grid_n", st.grid_points},
                  {"seed", e.seed}};
      if (!e.warning.empty()) {
        row["warning"] = e.warning;
        std::cerr << "warning: " << to_string(rt) << " N=" << n << ": " << e.warning << '\n';
      }
      rows.push_back(row);
    }
  if (s.format("csv") == "json")
    s.emit_json(rows, "simulation");
  else
    s.emit(t.str(), "simulation");
  return 0;
}

json pickands_json(const PickandsEstimate& e) {
  return {{"h", number(e.h)},
          {"value", number(e.value)},
          {"std_error", number(e.std_error)},
          {"method", to_string(e.method)},
          {"estimator", to_string(e.estimator)},
          {"truncation_T", number(e.truncation_T)},
          {"grid_delta", number(e.grid_delta)},
          {"replications", e.replications},
          {"seed", e.seed}};
}

int cmd_pickands(const Session& s) {
  const Settings& st = s.settings();
  PickandsOptions o;
  o.seed = st.seed;
  o.threads = s.threads();
  o.force_simulation = st.simulate;
  if (st.replications) o.replications = st.replications;
  if (st.truncation_T) o.truncation_T = *st.truncation_T;
  if (st.grid_delta) o.grid_delta = *st.grid_delta;
  if (st.pickands_estimator == "truncated-mean")
    o.estimator = PickandsEstimator::truncated_mean;
  else if (st.pickands_estimator != "sup-integral")
    throw ValidationError("unknown Pickands estimator '" + st.pickands_estimator + "'");
  const HurstIndex h = s.hurst();

  if (!st.ladder) {
    const json j = pickands_json(pickands(h, o));
    if (s.format("json") == "csv") {
      Table t{{"h", "value", "std_error", "method", "truncation_T", "grid_delta", "replications", "seed"}, {}};
      t.rows.push_back({csv_number(j["h"]), csv_number(j["value"]), csv_number(j["std_error"]), j["method"],
                        csv_number(j["truncation_T"]), csv_number(j["grid_delta"]), std::to_string(o.replications),
                        std::to_string(o.seed)});
      s.emit(t.str(), "Pickands constant");
    } else {
      s.emit_json(j, "Pickands constant");
    }
    return 0;
  }

  // (T, delta) ladder ending at the requested pair.
  o.force_simulation = true;
  json rows = json::array();
  Table t{{"h", "truncation_T", "grid_delta", "value", "std_error", "replications", "seed"}, {}};
  const double T = o.truncation_T, delta = o.grid_delta;
  for (double tf : {0.25, 0.5, 1.0})
    for (double df : {4.0, 2.0, 1.0}) {
      PickandsOptions step = o;
      step.truncation_T = T * tf;
      step.grid_delta = delta * df;
      const PickandsEstimate e = pickands(h, step);
      rows.push_back(pickands_json(e));
      t.rows.push_back({csv_number(e.h), csv_number(e.truncation_T), csv_number(e.grid_delta), csv_number(e.value),
                        csv_number(e.std_error), std::to_string(e.replications), std::to_string(e.seed)});
    }
  if (s.format("json") == "csv")
    s.emit(t.str(), "Pickands ladder");
  else
    s.emit_json(rows, "Pickands ladder");
  return 0;
}

int cmd_piterbarg(const Session& s) {
  const Settings& st = s.settings();
  double bn = 0.0, bp = 0.0;
  if (st.beta_neg && st.beta_pos) {
    bn = *st.beta_neg;
    bp = *st.beta_pos;
  } else if (st.beta_neg || st.beta_pos) {
    throw ValidationError("give both --beta-neg and --beta-pos, or neither to derive them from the model");
  } else {
    const NormalizedParams p = normalize(s.model());
    std::tie(bn, bp) = piterbarg_betas(p);
  }
  PiterbargOptions o;
  o.simulate = st.simulate;
  o.seed = st.seed;
  o.threads = s.threads();
  if (st.replications) o.replications = st.replications;
  if (st.truncation_T) o.truncation_T = *st.truncation_T;
  if (st.grid_delta) o.grid_delta = *st.grid_delta;
  const PiterbargEstimate e = piterbarg_h_half(bn, bp, o);
  const json j = {{"beta_neg", number(e.beta_neg)},
                  {"beta_pos", number(e.beta_pos)},
                  {"value", number(e.value)},
                  {"analytic_value", number(e.analytic_value)},
                  {"std_error", number(e.std_error)},
                  {"method", to_string(e.method)},
                  {"truncation_T", number(e.truncation_T)},
                  {"grid_delta", number(e.grid_delta)},
                  {"replications", e.replications},
                  {"seed", e.seed}};
  if (s.format("json") == "csv") {
    Table t{{"beta_neg", "beta_pos", "value", "analytic_value", "std_error", "method"},
            {{csv_number(e.beta_neg), csv_number(e.beta_pos), csv_number(e.value), csv_number(e.analytic_value),
              csv_number(e.std_error), std::string(to_string(e.method))}}};
    s.emit(t.str(), "Piterbarg-type constant");
  } else {
    s.emit_json(j, "Piterbarg-type constant");
  }
  return 0;
}

std::string svg_path(const Settings& st) {
  if (st.plot && !st.plot->empty()) return *st.plot;
  if (st.out_path.empty()) return "convergence.svg";
  const auto dot = st.out_path.find_last_of('.');
  const auto slash = st.out_path.find_last_of('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? st.out_path.substr(0, dot) : st.out_path) + ".svg";
}

int cmd_convergence(const Session& s) {
  const NormalizedParams p = normalize(s.model());
  const Settings& st = s.settings();
  const RuinType rt = parse_ruin_type(st.ruin_type);
  ConvergenceOptions o;
  o.grid_points = st.grid_points;
  if (st.replications) o.replications = st.replications;
  o.seed = st.seed;
  o.threads = s.threads();
  o.formula = st.formula;
  if (st.estimator.empty() || st.estimator == "auto")
    o.estimator = EstimatorChoice::automatic;
  else
    o.estimator = parse_estimator(st.estimator) == EstimatorKind::plain ? EstimatorChoice::plain : EstimatorChoice::shifted;
  if (st.pickands_value) o.constants.pickands = *st.pickands_value;
  if (st.piterbarg_value) o.constants.piterbarg = *st.piterbarg_value;
  const std::vector<double> ns = st.n_list.empty() ? std::vector<double>{1, 2, 4, 8} : st.n_list;
  const auto rows = convergence_study(p, rt, ns, o);

  Table t{{"N", "mc_estimate", "mc_stderr", "estimator", "asym_value", "ratio", "log_mc_over_N", "reference_rate",
           "asym_form"},
          {}};
  json out = json::array();
  for (const auto& r : rows) {
    t.rows.push_back({csv_number(r.n), csv_number(r.mc_estimate), csv_number(r.mc_stderr),
                      std::string(to_string(r.estimator)), csv_number(r.asym_value), csv_number(r.ratio),
                      csv_number(r.log_mc_over_n), csv_number(r.reference_rate), r.asym_form});
    out.push_back({{"N", number(r.n)},
                   {"mc_estimate", number(r.mc_estimate)},
                   {"mc_stderr", number(r.mc_stderr)},
                   {"estimator", to_string(r.estimator)},
                   {"asym_value", number(r.asym_value)},
                   {"ratio", number(r.ratio)},
                   {"log_mc_over_N", number(r.log_mc_over_n)},
                   {"reference_rate", number(r.reference_rate)},
                   {"asym_form", r.asym_form}});
  }
  if (s.format("csv") == "json")
    s.emit_json(out, "convergence table");
  else
    s.emit(t.str(), "convergence table");

  if (st.plot) {
    const std::string path = svg_path(st);
    std::ofstream svg(path, std::ios::binary);
    if (!svg) throw std::runtime_error("cannot write '" + path + "'");
    svg << convergence_svg(rows, std::string(to_string(rt)) + " ruin, " + std::string(to_string(classify(p).tag)));
    std::cerr << "plot written to " << path << '\n';
  }
  return 0;
}

void add_model_flags(CLI::App& app, Settings& s) {
  auto* g = app.add_option_group("model", "Model parameters (override --config)");
  g->add_option("--a1", s.flags.a1, "Initial capital of company 1");
  g->add_option("--a2", s.flags.a2, "Initial capital of company 2");
  g->add_option("--c1", s.flags.c1, "Premium rate of company 1");
  g->add_option("--c2", s.flags.c2, "Premium rate of company 2");
  g->add_option("--sigma1", s.flags.sigma1, "Claim share of company 1 (default 0.5)");
  g->add_option("--sigma2", s.flags.sigma2, "Claim share of company 2 (default 0.5)");
  g->add_option("--h", s.flags.h, "Hurst index in (0, 1]");
  g->add_option("--horizon,-T", s.flags.horizon, "Time horizon T");
  g->add_option("--n-businesses,-N", s.flags.n_businesses, "Number of aggregated businesses (default 1)");
}

void add_formula_flags(CLI::App& app, Settings& s) {
  auto* g = app.add_option_group("formula", "Alternatives to the printed formulas");
  g->add_flag("--strict-sign", s.formula.strict_sign, "Keep the printed negative denominator in the short-horizon H<1/2 case");
  g->add_flag("--psi-form", s.formula.psi_form, "Short-horizon H>1/2 case: pure Gaussian-tail prefactor T^H/(a+cT)");
  g->add_flag("--corrected-one-dim", s.formula.corrected_one_dim,
              "One-dim peak and short-horizon H<1/2 cases: sqrt(pi) and 1/H exponents");
  g->add_flag("--printed-h1-cases", s.formula.printed_h1_cases,
              "H=1 joint ruin: use the printed case labels instead of the event identity");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fbmruin: ruin asymptotics and simulation for the two-company fractional Brownian risk model"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_flag("--help", "Print this help message and exit");  // --h is the Hurst index
  Settings s;

  app.add_option("--config", s.config_path, "JSON file with a1,a2,c1,c2,sigma1,sigma2,h,horizon,n_businesses");
  app.add_option("--seed", s.seed, "Master seed")->capture_default_str();
  app.add_option("--threads", s.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--out", s.out_path, "Write the primary output here instead of stdout");
  app.add_option("--format", s.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--plot", s.plot, "Also write an SVG chart (convergence); optional path")->expected(0, 1);
  add_model_flags(app, s);
  add_formula_flags(app, s);

  auto* classify_cmd = app.add_subcommand("classify", "Critical points, constants and regime");
  auto* asym = app.add_subcommand("asym", "Exact asymptotics of simultaneous and joint ruin");
  asym->add_option("--n-list", s.n_list, "Tabulate the asymptotics at these N (CSV)")->delimiter(',');
  asym->add_option("--pickands", s.pickands_value, "Pickands constant H_{2H} (exact at H=1/2 and 1)");
  asym->add_option("--piterbarg", s.piterbarg_value, "Piterbarg-type constant (default: analytic from the betas)");

  auto* logasym = app.add_subcommand("logasym", "Logarithmic rate of joint ruin");
  logasym->add_option("--grid", s.log_rate_grid, "Coarse grid points per axis")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo ruin probabilities");
  simulate->add_option("--ruin-type", s.ruin_type, "simultaneous | joint | at_least_one | all")->capture_default_str();
  simulate->add_option("--n-list", s.n_list, "N values (default: --n-businesses)")->delimiter(',');
  simulate->add_option("--estimator", s.estimator, "plain | shifted")->check(CLI::IsMember({"plain", "shifted"}));
  simulate->add_option("--replications", s.replications, "Replications (default 10000)");
  simulate->add_option("--grid-points", s.grid_points, "Grid points on [0, T]")->capture_default_str();

  auto* pk = app.add_subcommand("pickands", "Pickands constant H_{2H}");
  pk->add_flag("--simulate", s.simulate, "Simulate even where the value is known exactly");
  pk->add_flag("--ladder", s.ladder, "Simulate over a (T, delta) ladder ending at the given pair");
  pk->add_option("--estimator", s.pickands_estimator, "sup-integral | truncated-mean")->capture_default_str();
  pk->add_option("--truncation-T", s.truncation_T, "Truncation horizon (default 10)");
  pk->add_option("--grid-delta", s.grid_delta, "Grid spacing (default 0.005)");
  pk->add_option("--replications", s.replications, "Replications (default 100000)");

  auto* pt = app.add_subcommand("piterbarg", "Piterbarg-type constant at H = 1/2");
  pt->add_option("--beta-neg", s.beta_neg, "Slope of d(t) for t < 0 (default: from the model)");
  pt->add_option("--beta-pos", s.beta_pos, "Slope of d(t) for t >= 0 (default: from the model)");
  pt->add_flag("--simulate", s.simulate, "Cross-check the analytic value by simulation");
  pt->add_option("--truncation-T", s.truncation_T, "Truncation horizon (default 15)");
  pt->add_option("--grid-delta", s.grid_delta, "Grid spacing (default 0.005)");
  pt->add_option("--replications", s.replications, "Replications (default 100000)");

  auto* conv = app.add_subcommand("convergence", "Monte Carlo vs asymptotics over a list of N");
  conv->add_option("--ruin-type", s.ruin_type, "simultaneous | joint | at_least_one")->capture_default_str();
  conv->add_option("--n-list", s.n_list, "Ascending N values (default 1,2,4,8)")->delimiter(',');
  conv->add_option("--estimator", s.estimator, "auto | plain | shifted")->check(CLI::IsMember({"auto", "plain", "shifted"}));
  conv->add_option("--replications", s.replications, "Replications (default 20000)");
  conv->add_option("--grid-points", s.grid_points, "Grid points on [0, T]")->capture_default_str();
  conv->add_option("--pickands", s.pickands_value, "Pickands constant H_{2H}");
  conv->add_option("--piterbarg", s.piterbarg_value, "Piterbarg-type constant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const Session session(s);
    if (*classify_cmd) return cmd_classify(session);
    if (*asym) return cmd_asym(session);
    if (*logasym) return cmd_logasym(session);
    if (*simulate) return cmd_simulate(session);
    if (*pk) return cmd_pickands(session);
    if (*pt) return cmd_piterbarg(session);
    if (*conv) return cmd_convergence(session);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
