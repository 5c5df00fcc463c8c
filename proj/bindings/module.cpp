#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spl/diagnostics.hpp"
#include "spl/experiment.hpp"
#include "spl/io.hpp"
#include "spl/problem.hpp"
#include "spl/regularizer.hpp"
#include "spl/rng.hpp"
#include "spl/solver.hpp"

namespace py = pybind11;
using namespace spl;

PYBIND11_MODULE(_core, m) {
  m.doc() = "self-paced learning solvers with majorization-minimization convergence certificates";

  py::enum_<RegularizerKind>(m, "RegularizerKind")
      .value("Hard", RegularizerKind::Hard)
      .value("Linear", RegularizerKind::Linear)
      .value("Entropic", RegularizerKind::Entropic)
      .value("Tabulated", RegularizerKind::Tabulated);

  py::class_<Regularizer>(m, "Regularizer")
      .def_static("hard", &Regularizer::hard, py::arg("pace"))
      .def_static("linear", &Regularizer::linear, py::arg("pace"))
      .def_static("entropic", &Regularizer::entropic, py::arg("pace"))
      .def_static("tabulated", &Regularizer::tabulated, py::arg("pace"), py::arg("loss_knots"),
                  py::arg("weight_knots"))
      .def_static("tabulated_unchecked", &Regularizer::tabulated_unchecked, py::arg("pace"),
                  py::arg("loss_knots"), py::arg("weight_knots"))
      .def_property_readonly("kind", &Regularizer::kind)
      .def_property_readonly("pace", &Regularizer::pace)
      .def_property_readonly("smooth", &Regularizer::smooth)
      .def("with_pace", &Regularizer::with_pace, py::arg("pace"))
      .def("penalty", &Regularizer::penalty, py::arg("v"))
      .def("weight", &Regularizer::weight, py::arg("loss"))
      .def("envelope", &Regularizer::envelope, py::arg("loss"))
      .def("__repr__", [](const Regularizer& r) {
        return "Regularizer(" + to_string(r.kind()) + ", pace=" + format_double(r.pace()) + ")";
      });

  py::class_<ConditionReport>(m, "ConditionReport")
      .def_readonly("condition1", &ConditionReport::condition1)
      .def_readonly("condition2", &ConditionReport::condition2)
      .def_readonly("condition3", &ConditionReport::condition3)
      .def_readonly("margin1", &ConditionReport::margin1)
      .def_readonly("margin2", &ConditionReport::margin2)
      .def_readonly("margin3", &ConditionReport::margin3)
      .def_readonly("notes", &ConditionReport::notes)
      .def("all_passed", &ConditionReport::all_passed);

  m.def("check_sp_conditions", &check_sp_conditions, py::arg("regularizer"), py::arg("loss_grid"),
        py::arg("pace_grid"));

  py::enum_<LossKind>(m, "LossKind")
      .value("SquaredError", LossKind::SquaredError)
      .value("Logistic", LossKind::Logistic);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<Eigen::MatrixXd, Eigen::VectorXd>(), py::arg("features"), py::arg("targets"))
      .def_property_readonly("features", &Dataset::features)
      .def_property_readonly("targets", &Dataset::targets)
      .def_property_readonly("size", &Dataset::size)
      .def_property_readonly("dim", &Dataset::dim);

  m.def("normalize_binary_labels", &normalize_binary_labels, py::arg("targets"));

  py::class_<Problem>(m, "Problem")
      .def(py::init<Dataset, LossKind, double, Regularizer>(), py::arg("dataset"),
           py::arg("loss_kind"), py::arg("mu"), py::arg("regularizer"))
      .def_property_readonly("dataset", &Problem::dataset)
      .def_property_readonly("loss_kind", &Problem::loss_kind)
      .def_property_readonly("mu", &Problem::mu)
      .def_property_readonly("regularizer", &Problem::regularizer)
      .def("with_regularizer", &Problem::with_regularizer, py::arg("regularizer"))
      .def("losses", &Problem::losses, py::arg("params"))
      .def("loss_gradients", &Problem::loss_gradients, py::arg("params"))
      .def("explicit_objective", &Problem::explicit_objective, py::arg("params"),
           py::arg("weights"))
      .def("implicit_objective", &Problem::implicit_objective, py::arg("params"))
      .def("implicit_gradient", &Problem::implicit_gradient, py::arg("params"))
      .def("surrogate", &Problem::surrogate, py::arg("params"), py::arg("anchor"))
      .def("weighted_objective", &Problem::weighted_objective, py::arg("params"),
           py::arg("weights"));

  py::enum_<SolverScheme>(m, "SolverScheme")
      .value("Aos", SolverScheme::Aos)
      .value("ExactMm", SolverScheme::ExactMm)
      .value("InexactMm", SolverScheme::InexactMm);

  py::enum_<InnerMethod>(m, "InnerMethod")
      .value("ClosedForm", InnerMethod::ClosedForm)
      .value("GradientDescent", InnerMethod::GradientDescent);

  py::class_<ErrorSchedule>(m, "ErrorSchedule")
      .def_static("geometric", &ErrorSchedule::geometric, py::arg("eps0"), py::arg("rho"))
      .def_static("power", &ErrorSchedule::power, py::arg("eps0"), py::arg("exponent"))
      .def("epsilon", &ErrorSchedule::epsilon, py::arg("k"))
      .def("tail", &ErrorSchedule::tail, py::arg("k"))
      .def("total", &ErrorSchedule::total)
      .def("__repr__", &ErrorSchedule::describe);

  py::class_<ArmijoConfig>(m, "ArmijoConfig")
      .def(py::init<>())
      .def_readwrite("c", &ArmijoConfig::c)
      .def_readwrite("backtrack", &ArmijoConfig::backtrack)
      .def_readwrite("initial_step", &ArmijoConfig::initial_step);

  py::class_<InnerSolverConfig>(m, "InnerSolverConfig")
      .def(py::init<>())
      .def_readwrite("method", &InnerSolverConfig::method)
      .def_readwrite("grad_tol", &InnerSolverConfig::grad_tol)
      .def_readwrite("max_inner_iters", &InnerSolverConfig::max_inner_iters)
      .def_readwrite("armijo", &InnerSolverConfig::armijo);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("scheme", &SolverConfig::scheme)
      .def_readwrite("max_outer_iters", &SolverConfig::max_outer_iters)
      .def_readwrite("outer_tol", &SolverConfig::outer_tol)
      .def_readwrite("inner", &SolverConfig::inner)
      .def_readwrite("error_schedule", &SolverConfig::error_schedule);

  py::class_<TraceRow>(m, "TraceRow")
      .def_readonly("k", &TraceRow::k)
      .def_readonly("explicit_obj", &TraceRow::explicit_obj)
      .def_readonly("implicit_obj", &TraceRow::implicit_obj)
      .def_readonly("surrogate_obj", &TraceRow::surrogate_obj)
      .def_readonly("grad_norm", &TraceRow::grad_norm)
      .def_readonly("eps", &TraceRow::eps)
      .def_readonly("tail", &TraceRow::tail)
      .def_readonly("step_norm", &TraceRow::step_norm)
      .def_readonly("inner_iters", &TraceRow::inner_iters)
      .def_readonly("inner_residual", &TraceRow::inner_residual);

  py::class_<IterateTrace>(m, "IterateTrace")
      .def_readonly("scheme", &IterateTrace::scheme)
      .def_readonly("converged", &IterateTrace::converged)
      .def_readonly("has_error_schedule", &IterateTrace::has_error_schedule)
      .def_readonly("rows", &IterateTrace::rows)
      .def_readonly("params", &IterateTrace::params)
      .def_readonly("weights", &IterateTrace::weights)
      .def("iterations", &IterateTrace::iterations)
      .def("final_params", &IterateTrace::final_params)
      .def("implicit_values", &IterateTrace::implicit_values)
      .def("adjusted_values", &IterateTrace::adjusted_values)
      .def("final_grad_norm", &IterateTrace::final_grad_norm);

  m.def("weight_step", &weight_step, py::arg("problem"), py::arg("params"));
  m.def(
      "param_step",
      [](const Problem& problem, const Eigen::VectorXd& weights, const Eigen::VectorXd& init,
         const InnerSolverConfig& config) {
        const ParamStepResult r = param_step(problem, weights, init, config);
        return py::make_tuple(r.params, r.gap, r.grad_norm, r.iters);
      },
      py::arg("problem"), py::arg("weights"), py::arg("init"),
      py::arg("config") = InnerSolverConfig{},
      "returns (params, gap, grad_norm, inner_iters)");
  m.def("aos_solve", &aos_solve, py::arg("problem"), py::arg("w0"), py::arg("config"));
  m.def("mm_solve", &mm_solve, py::arg("problem"), py::arg("w0"), py::arg("config"));
  m.def("inexact_mm_solve", &inexact_mm_solve, py::arg("problem"), py::arg("w0"),
        py::arg("config"));

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("name", &CheckResult::name)
      .def_readonly("passed", &CheckResult::passed)
      .def_readonly("worst_margin", &CheckResult::worst_margin)
      .def_readonly("location", &CheckResult::location)
      .def_readonly("skipped", &CheckResult::skipped)
      .def_readonly("informational", &CheckResult::informational)
      .def_readonly("note", &CheckResult::note);

  py::class_<CertificationReport>(m, "CertificationReport")
      .def_readonly("checks", &CertificationReport::checks)
      .def_readonly("assumptions", &CertificationReport::assumptions)
      .def("verdict", &CertificationReport::verdict);

  py::enum_<DescentMode>(m, "DescentMode")
      .value("Exact", DescentMode::Exact)
      .value("Adjusted", DescentMode::Adjusted);

  m.def("certify_majorization", &certify_majorization, py::arg("problem"), py::arg("anchors"),
        py::arg("probes"), py::arg("tol") = 1e-9);
  m.def("certify_descent", &certify_descent, py::arg("trace"), py::arg("mode"),
        py::arg("tol") = 1e-10);
  m.def("certify_criticality", &certify_criticality, py::arg("problem"), py::arg("w_final"),
        py::arg("tol"));
  m.def("certify_equivalence", &certify_equivalence, py::arg("trace_a"), py::arg("trace_b"),
        py::arg("tol"));
  m.def("certify_level_set", &certify_level_set, py::arg("trace"), py::arg("problem"),
        py::arg("tol") = 1e-9);
  m.def("certify_lsc_limit", &certify_lsc_limit, py::arg("values"), py::arg("limit_candidate"),
        py::arg("tol"));

  py::class_<GeneratorSpec>(m, "GeneratorSpec")
      .def(py::init<>())
      .def_readwrite("n", &GeneratorSpec::n)
      .def_readwrite("d", &GeneratorSpec::d)
      .def_readwrite("true_params", &GeneratorSpec::true_params)
      .def_readwrite("noise_sigma", &GeneratorSpec::noise_sigma)
      .def_readwrite("outlier_fraction", &GeneratorSpec::outlier_fraction)
      .def_readwrite("outlier_magnitude", &GeneratorSpec::outlier_magnitude);

  py::class_<GeneratedData>(m, "GeneratedData")
      .def_readonly("dataset", &GeneratedData::dataset)
      .def_readonly("true_params", &GeneratedData::true_params)
      .def_readonly("outlier_indices", &GeneratedData::outlier_indices)
      .def_readonly("outlier_signs", &GeneratedData::outlier_signs);

  m.def("generate", &generate, py::arg("spec"), py::arg("seed"));
  m.def("percentile", &percentile, py::arg("values"), py::arg("p"));

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const SolveError& err) {
      PyErr_SetString(PyExc_RuntimeError, err.what());
    }
  });
}
