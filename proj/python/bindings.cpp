#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "slope/config_json.hpp"
#include "slope/errors.hpp"
#include "slope/estimators.hpp"
#include "slope/pattern.hpp"
#include "slope/simulation.hpp"
#include "slope/sorted_l1.hpp"
#include "slope/theory.hpp"
#include "slope/version.hpp"

namespace py = pybind11;
using namespace slope;

namespace {

std::vector<int> pattern_list(const PatternVector& m) {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < m.size(); ++i) out.push_back(m[i]);
  return out;
}

py::dict fit_dict(const Fit& fit) {
  py::dict d;
  d["method"] = to_string(fit.method);
  d["beta"] = fit.beta;
  d["objective"] = fit.objective;
  d["iterations"] = fit.iterations;
  d["converged"] = fit.converged;
  d["diagnostics"] = fit.diagnostics;
  if (fit.certificate) {
    d["pi"] = fit.certificate->pi;
  } else {
    d["pi"] = py::none();
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sorted-l1 penalized regression kernels";
  m.attr("__version__") = kVersion;

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("prox_sorted_l1", [](const Vector& y, const Vector& lam) { return prox_sorted_l1(y, TuningVector(lam)); },
        py::arg("y"), py::arg("lam"));
  m.def(
      "project_dual_ball",
      [](const Vector& y, const Vector& lam) {
        const DualCertificate c = project_dual_ball(y, TuningVector(lam));
        return py::make_tuple(c.pi, c.slack);
      },
      py::arg("y"), py::arg("lam"), "Returns (pi, cumulative slack).");
  m.def("sorted_l1_norm", [](const Vector& b, const Vector& lam) { return sorted_l1_norm(b, TuningVector(lam)); },
        py::arg("b"), py::arg("lam"));
  m.def("dual_norm", [](const Vector& x, const Vector& lam) { return dual_norm(x, TuningVector(lam)); },
        py::arg("x"), py::arg("lam"));
  m.def("pattern_of", [](const Vector& b, double tie_tol) { return pattern_list(pattern_of(b, tie_tol)); },
        py::arg("b"), py::arg("tie_tol") = kDefaultTieTolerance);

  m.def(
      "cluster_condition",
      [](const Vector& ols_beta, const Vector& lam, double c) {
        std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
        for (const auto& p : cluster_condition(ols_beta, TuningVector(lam), c)) out.emplace_back(p.first, p.second);
        return out;
      },
      py::arg("ols_beta"), py::arg("lam"), py::arg("c") = 1.0);
  m.def(
      "support_conditions",
      [](const Vector& ols_beta, const Vector& lam, double c, Eigen::Index p0) {
        const auto r = support_conditions(ols_beta, TuningVector(lam), c, p0);
        py::dict d;
        d["cond_a"] = r.cond_a;
        d["cond_b"] = r.cond_b;
        d["cond_c"] = r.cond_c;
        d["all"] = r.all;
        d["margin_a"] = r.margin_a;
        d["margin_b"] = r.margin_b;
        d["margin_c"] = r.margin_c;
        return d;
      },
      py::arg("ols_beta"), py::arg("lam"), py::arg("c"), py::arg("p0"));

  m.def(
      "fit",
      [](const Matrix& x, const Vector& y, const std::string& method, std::optional<Vector> lam, bool general,
         double tol, double tie_tol) {
        const LinearModel model(x, y);
        const Method kind = method_from_string(method);
        if (kind == Method::kOls) return fit_dict(ols(model));
        if (!lam) throw InputError("method " + method + " needs lam");
        const TuningVector tuning(*lam);
        SolverOptions opts;
        opts.tol = tol;
        const bool lasso = kind == Method::kLasso || kind == Method::kLassoLs;
        if (lasso && !tuning.is_constant()) throw InputError("lasso needs a constant tuning vector");
        Fit penalized = general ? slope_general(model, tuning, opts)
                                : (lasso ? lasso_orthogonal(model, tuning[0]) : slope_orthogonal(model, tuning));
        if (kind == Method::kSlopeLs) return fit_dict(debias(model, pattern_of(penalized.beta, tie_tol)));
        if (kind == Method::kLassoLs) return fit_dict(debias(model, SignVector::of(penalized.beta)));
        if (lasso) penalized.method = Method::kLasso;
        return fit_dict(penalized);
      },
      py::arg("x"), py::arg("y"), py::arg("method") = "slope", py::arg("lam") = py::none(),
      py::arg("general") = false, py::arg("tol") = 1e-8, py::arg("tie_tol") = kDefaultTieTolerance);

  m.def("trig_design", &trig_design, py::arg("n"), py::arg("p"), py::arg("normalize") = false);

  m.def(
      "simulate",
      [](const std::string& config_json, int jobs) {
        const SimulationConfig config = simulation_config_from_json(nlohmann::json::parse(config_json));
        MonteCarloSummary summary;
        {
          py::gil_scoped_release release;
          summary = monte_carlo(config, jobs);
        }
        return summary_to_json(summary, -1);
      },
      py::arg("config_json") = "{}", py::arg("jobs") = 1, "Runs the Monte Carlo study; returns the summary JSON.");
}
