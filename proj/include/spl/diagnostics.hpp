#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "spl/problem.hpp"
#include "spl/solver.hpp"

namespace spl {

/// Outcome of one certificate. worst_margin is the most adverse slack
/// observed; each check states its own margin convention, but in every case
/// passed holds iff worst_margin clears the check's tolerance. location is
/// the row / pair index of the worst offender (-1 when not applicable).
struct CheckResult {
  std::string name;
  bool passed = false;
  double worst_margin = 0.0;
  long location = -1;
  bool skipped = false;        // unsupported for the inputs, not a failure
  bool informational = false;  // recorded but excluded from the verdict
  std::string note;
};

struct CertificationReport {
  std::vector<CheckResult> checks;
  std::vector<std::string> assumptions;

  /// True when every non-skipped, non-informational check passed.
  bool verdict() const;
};

enum class DescentMode { Exact, Adjusted };

/// Core majorization check over arbitrary objective/surrogate evaluators:
/// surrogate(probe, anchor) - objective(probe) >= -tol for every anchor x
/// probe combination, and |surrogate(a, a) - objective(a)| <= tol at every
/// anchor. Margin: min over both families of (gap) resp. (-|tangency error|).
CheckResult majorization_check(const std::function<double(const Eigen::VectorXd&)>& objective,
                               const std::function<double(const Eigen::VectorXd&,
                                                          const Eigen::VectorXd&)>& surrogate,
                               const std::vector<Eigen::VectorXd>& anchors,
                               const std::vector<Eigen::VectorXd>& probes, double tol = 1e-9);

/// Majorization of the implicit objective by the MM surrogate.
CheckResult certify_majorization(const Problem& problem,
                                 const std::vector<Eigen::VectorXd>& anchors,
                                 const std::vector<Eigen::VectorXd>& probes, double tol = 1e-9);

/// Monotone descent of the implicit objective along a trace. Exact mode
/// checks G_{k+1} <= G_k + tol; adjusted mode checks the error-corrected
/// sequence G_k + r_k and requires the trace to carry an error schedule.
/// Margin: min over k of the per-step decrease.
CheckResult certify_descent(const IterateTrace& trace, DescentMode mode, double tol = 1e-10);

/// Criticality of a terminal iterate: |grad G(w)| <= tol. Skipped (not
/// failed) for non-smooth regularizer kinds. Margin: tol - residual.
CheckResult certify_criticality(const Problem& problem, const Eigen::VectorXd& w_final,
                                double tol);

/// Elementwise agreement of two iterate sequences (parameters and weights).
/// Unequal lengths are truncated to the shorter with a note. Margin:
/// tol - max abs difference.
CheckResult certify_equivalence(const IterateTrace& trace_a, const IterateTrace& trace_b,
                                double tol);

/// Containment in the initial level set enlarged by the total error budget:
/// G_k <= G_0 + sum eps + tol for every k. Margin: min over k of the slack.
CheckResult certify_level_set(const IterateTrace& trace, const Problem& problem,
                              double tol = 1e-9);

/// Non-increasing sequence stabilizing at a candidate limit: every step
/// decrease >= -tol and |last - candidate| <= tol. Margin: min of the two
/// families.
CheckResult certify_lsc_limit(const std::vector<double>& values, double limit_candidate,
                              double tol);

}  // namespace spl
