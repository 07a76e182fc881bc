#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fbmruin/asymptotics.hpp"
#include "fbmruin/constants.hpp"
#include "fbmruin/errors.hpp"
#include "fbmruin/gaussian_paths.hpp"
#include "fbmruin/montecarlo.hpp"
#include "fbmruin/risk_model.hpp"

namespace py = pybind11;
using namespace fbmruin;
using namespace py::literals;

namespace {

ModelParams make_model(double a1, double a2, double c1, double c2, double h, double horizon, double sigma1,
                       double sigma2, double n_businesses) {
  ModelParams p;
  p.a1 = a1;
  p.a2 = a2;
  p.c1 = c1;
  p.c2 = c2;
  p.h = HurstIndex(h);
  p.horizon = horizon;
  p.sigma1 = sigma1;
  p.sigma2 = sigma2;
  p.n_businesses = n_businesses;
  p.validate();
  return p;
}

FormulaOptions make_formula(bool strict_sign, bool psi_form, bool corrected_one_dim, bool printed_h1_cases) {
  return {strict_sign, psi_form, corrected_one_dim, printed_h1_cases};
}

py::dict value_dict(const AsymptoticValue& v) {
  return py::dict("form"_a = v.form, "log_prefactor"_a = v.log_prefactor, "n_power"_a = v.n_power, "rate"_a = v.rate,
                  "sign"_a = v.sign);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-company fractional Brownian risk model: asymptotics, constants and Monte Carlo";
  m.attr("DEFAULT_SEED") = kDefaultSeed;

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<ModelParams>(m, "Model")
      .def(py::init(&make_model), "a1"_a, "a2"_a, "c1"_a, "c2"_a, "h"_a, "horizon"_a, "sigma1"_a = 0.5,
           "sigma2"_a = 0.5, "n_businesses"_a = 1.0)
      .def_readonly("a1", &ModelParams::a1)
      .def_readonly("a2", &ModelParams::a2)
      .def_readonly("c1", &ModelParams::c1)
      .def_readonly("c2", &ModelParams::c2)
      .def_readonly("sigma1", &ModelParams::sigma1)
      .def_readonly("sigma2", &ModelParams::sigma2)
      .def_property_readonly("h", [](const ModelParams& p) { return p.h.value(); })
      .def_readonly("horizon", &ModelParams::horizon)
      .def_readonly("n_businesses", &ModelParams::n_businesses)
      .def("normalized", [](const ModelParams& p) {
        const NormalizedParams n = normalize(p);
        return py::dict("a1"_a = n.a1, "a2"_a = n.a2, "c1"_a = n.c1, "c2"_a = n.c2, "swapped"_a = n.swapped);
      });

  py::class_<FormulaOptions>(m, "FormulaOptions")
      .def(py::init(&make_formula), "strict_sign"_a = false, "psi_form"_a = false, "corrected_one_dim"_a = false,
           "printed_h1_cases"_a = false)
      .def_readwrite("strict_sign", &FormulaOptions::strict_sign)
      .def_readwrite("psi_form", &FormulaOptions::psi_form)
      .def_readwrite("corrected_one_dim", &FormulaOptions::corrected_one_dim)
      .def_readwrite("printed_h1_cases", &FormulaOptions::printed_h1_cases);

  m.def(
      "classify",
      [](const ModelParams& model) {
        const NormalizedParams p = normalize(model);
        const CriticalPoints cp = critical_points(p);
        const Regime r = classify(p);
        return py::dict("regime"_a = std::string(to_string(r.tag)), "detail"_a = r.detail, "t_star"_a = cp.t_star,
                        "t1"_a = cp.t1, "t2"_a = cp.t2, "m1"_a = peak_m(p.a1, p.c1, p.h),
                        "m2"_a = peak_m(p.a2, p.c2, p.h));
      },
      "model"_a, "Critical points, peak values and regime of the normalized model.");

  m.def(
      "asymptotics",
      [](const ModelParams& model, std::optional<double> pickands, std::optional<double> piterbarg,
         const FormulaOptions& formula) {
        const NormalizedParams p = normalize(model);
        const Regime r = classify(p);
        AsymptoticConstants k = AsymptoticConstants::known_for(p.h);
        if (pickands) k.pickands = pickands;
        if (piterbarg) {
          k.piterbarg = piterbarg;
        } else if (r.tag == RegimeTag::InteriorHalf) {
          const auto [bn, bp] = piterbarg_betas(p);
          k.piterbarg = piterbarg_h_half_analytic(bn, bp);
        }
        py::dict out("regime"_a = std::string(to_string(r.tag)));
        auto attempt = [&](const char* key, auto&& fn) {
          try {
            out[key] = value_dict(fn());
          } catch (const ValidationError& e) {
            out[key] = py::none();
          }
        };
        attempt("simultaneous", [&] { return pi_sim_asym(p, r, k, formula); });
        attempt("joint", [&] { return p.h.is_one() ? pi_and_exact_h1(p, formula) : pi_and_asym(p, r, k, formula); });
        return out;
      },
      "model"_a, "pickands"_a = py::none(), "piterbarg"_a = py::none(), "formula"_a = FormulaOptions{},
      "Leading-order simultaneous and joint ruin asymptotics; None where no exact form exists.");

  m.def(
      "psi_one_dim",
      [](double a, double c, double h, double horizon, double n, double pickands, const FormulaOptions& formula) {
        return psi_one_dim(a, c, HurstIndex(h), horizon, pickands, formula).evaluate(n);
      },
      "a"_a, "c"_a, "h"_a, "horizon"_a, "n"_a, "pickands"_a = 1.0, "formula"_a = FormulaOptions{},
      "One-dimensional finite-horizon ruin asymptotic evaluated at N.");

  m.def(
      "log_rate",
      [](const ModelParams& model, std::size_t grid_points, unsigned threads) {
        LogRateOptions o;
        o.grid_points = grid_points;
        o.threads = threads;
        const LogRateResult r = log_rate_and(normalize(model), o);
        return py::dict("rate"_a = r.rate, "argmin_s"_a = r.argmin_s, "argmin_t"_a = r.argmin_t);
      },
      "model"_a, "grid_points"_a = 200, "threads"_a = 1, "Logarithmic rate of joint ruin.");

  m.def(
      "simulate",
      [](const ModelParams& model, const std::string& ruin_type, std::uint64_t replications, std::size_t grid_points,
         const std::string& estimator, std::uint64_t seed, unsigned threads) {
        const NormalizedParams p = normalize(model);
        const RuinQuery q{p,    parse_ruin_type(ruin_type), Grid(p.horizon, grid_points), replications,
                          seed, parse_estimator(estimator), threads};
        EstimateCI e;
        {
          py::gil_scoped_release release;
          e = estimate_ruin(q);
        }
        return py::dict("p_hat"_a = e.p_hat, "std_error"_a = e.std_error, "hits"_a = e.hits,
                        "replications"_a = e.replications, "estimator"_a = std::string(to_string(e.estimator)),
                        "warning"_a = e.warning);
      },
      "model"_a, "ruin_type"_a = "joint", "replications"_a = 10000, "grid_points"_a = kDefaultGridPoints,
      "estimator"_a = "plain", "seed"_a = kDefaultSeed, "threads"_a = 1, "Monte Carlo ruin probability.");

  m.def(
      "pickands",
      [](double h, bool simulate, std::uint64_t replications, double truncation_T, double grid_delta,
         std::uint64_t seed, unsigned threads) {
        PickandsOptions o;
        o.force_simulation = simulate;
        o.replications = replications;
        o.truncation_T = truncation_T;
        o.grid_delta = grid_delta;
        o.seed = seed;
        o.threads = threads;
        PickandsEstimate e;
        {
          py::gil_scoped_release release;
          e = pickands(HurstIndex(h), o);
        }
        return py::dict("value"_a = e.value, "std_error"_a = e.std_error, "method"_a = std::string(to_string(e.method)));
      },
      "h"_a, "simulate"_a = false, "replications"_a = 100000, "truncation_T"_a = 10.0, "grid_delta"_a = 0.005,
      "seed"_a = kDefaultSeed, "threads"_a = 1, "Pickands constant H_{2H}.");

  m.def("piterbarg_analytic", &piterbarg_h_half_analytic, "beta_neg"_a, "beta_pos"_a,
        "Piterbarg-type constant at H = 1/2 in closed form.");

  m.def(
      "sample_fbm",
      [](double horizon, std::size_t n_points, double h, std::uint64_t seed) {
        const PathSample s = sample_fbm(Grid(horizon, n_points), HurstIndex(h), seed);
        return py::array_t<double>(static_cast<py::ssize_t>(s.values.size()), s.values.data());
      },
      "horizon"_a, "n_points"_a, "h"_a, "seed"_a = kDefaultSeed, "One fBm path on an equispaced grid of [0, horizon].");

  m.def(
      "convergence",
      [](const ModelParams& model, const std::string& ruin_type, std::vector<double> n_list,
         std::uint64_t replications, std::size_t grid_points, std::uint64_t seed, unsigned threads) {
        ConvergenceOptions o;
        o.replications = replications;
        o.grid_points = grid_points;
        o.seed = seed;
        o.threads = threads;
        std::vector<ConvergenceRow> rows;
        {
          py::gil_scoped_release release;
          rows = convergence_study(normalize(model), parse_ruin_type(ruin_type), n_list, o);
        }
        py::list out;
        for (const auto& r : rows)
          out.append(py::dict("N"_a = r.n, "mc_estimate"_a = r.mc_estimate, "mc_stderr"_a = r.mc_stderr,
                              "estimator"_a = std::string(to_string(r.estimator)), "asym_value"_a = r.asym_value,
                              "ratio"_a = r.ratio, "log_mc_over_N"_a = r.log_mc_over_n,
                              "reference_rate"_a = r.reference_rate, "asym_form"_a = r.asym_form));
        return out;
      },
      "model"_a, "ruin_type"_a, "n_list"_a, "replications"_a = 20000, "grid_points"_a = kDefaultGridPoints,
      "seed"_a = kDefaultSeed, "threads"_a = 1, "Monte Carlo against the asymptotic over a list of N.");
}
