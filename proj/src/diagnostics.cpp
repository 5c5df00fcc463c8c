#include "spl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spl {

bool CertificationReport::verdict() const {
  for (const auto& c : checks) {
    if (c.skipped || c.informational) continue;
    if (!c.passed) return false;
  }
  return true;
}

CheckResult majorization_check(const std::function<double(const Eigen::VectorXd&)>& objective,
                               const std::function<double(const Eigen::VectorXd&,
                                                          const Eigen::VectorXd&)>& surrogate,
                               const std::vector<Eigen::VectorXd>& anchors,
                               const std::vector<Eigen::VectorXd>& probes, double tol) {
  if (anchors.empty() || probes.empty()) {
    throw std::invalid_argument("majorization check needs non-empty anchor and probe lists");
  }
  CheckResult result;
  result.name = "majorization";
  result.worst_margin = std::numeric_limits<double>::infinity();

  std::vector<double> probe_values;
  probe_values.reserve(probes.size());
  for (const auto& p : probes) probe_values.push_back(objective(p));

  long pair_index = 0;
  for (std::size_t a = 0; a < anchors.size(); ++a) {
    for (std::size_t p = 0; p < probes.size(); ++p, ++pair_index) {
      const double gap = surrogate(probes[p], anchors[a]) - probe_values[p];
      if (gap < result.worst_margin) {
        result.worst_margin = gap;
        result.location = pair_index;
      }
    }
    const double tangency = -std::abs(surrogate(anchors[a], anchors[a]) - objective(anchors[a]));
    if (tangency < result.worst_margin) {
      result.worst_margin = tangency;
      result.location = static_cast<long>(a);
    }
  }
  result.passed = result.worst_margin >= -tol;
  return result;
}

CheckResult certify_majorization(const Problem& problem,
                                 const std::vector<Eigen::VectorXd>& anchors,
                                 const std::vector<Eigen::VectorXd>& probes, double tol) {
  auto objective = [&problem](const Eigen::VectorXd& w) { return problem.implicit_objective(w); };
  auto surrogate = [&problem](const Eigen::VectorXd& w, const Eigen::VectorXd& a) {
    return problem.surrogate(w, a);
  };
  return majorization_check(objective, surrogate, anchors, probes, tol);
}

CheckResult certify_descent(const IterateTrace& trace, DescentMode mode, double tol) {
  if (trace.rows.empty()) throw std::invalid_argument("descent check needs a non-empty trace");
  if (mode == DescentMode::Adjusted && !trace.has_error_schedule) {
    throw std::invalid_argument("adjusted descent needs a trace with error-schedule data");
  }
  CheckResult result;
  result.name = mode == DescentMode::Exact ? "descent" : "descent-adjusted";
  result.worst_margin = std::numeric_limits<double>::infinity();
  const auto values =
      mode == DescentMode::Exact ? trace.implicit_values() : trace.adjusted_values();
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    const double decrease = values[k] - values[k + 1];
    if (decrease < result.worst_margin) {
      result.worst_margin = decrease;
      result.location = static_cast<long>(k);
    }
  }
  if (!std::isfinite(result.worst_margin)) result.worst_margin = 0.0;  // single-row trace
  result.passed = result.worst_margin >= -tol;
  return result;
}

CheckResult certify_criticality(const Problem& problem, const Eigen::VectorXd& w_final,
                                double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("criticality tolerance must be positive");
  CheckResult result;
  result.name = "criticality";
  if (!problem.regularizer().smooth()) {
    result.skipped = true;
    result.passed = true;
    result.note = "non-smooth weighting rule: zero-subgradient residual is not computable";
    return result;
  }
  const double residual = problem.implicit_gradient(w_final).norm();
  result.worst_margin = tol - residual;
  result.passed = result.worst_margin >= 0.0;
  return result;
}

CheckResult certify_equivalence(const IterateTrace& trace_a, const IterateTrace& trace_b,
                                double tol) {
  CheckResult result;
  result.name = "equivalence";
  if (trace_a.params.empty() || trace_b.params.empty()) {
    throw std::invalid_argument("equivalence check needs traces with iterate vectors");
  }
  const std::size_t n = std::min(trace_a.params.size(), trace_b.params.size());
  if (trace_a.params.size() != trace_b.params.size()) {
    result.note = "traces have different lengths; compared the first " + std::to_string(n) +
                  " iterates";
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double diff = (trace_a.params[k] - trace_b.params[k]).cwiseAbs().maxCoeff();
    if (k < trace_a.weights.size() && k < trace_b.weights.size()) {
      diff = std::max(diff, (trace_a.weights[k] - trace_b.weights[k]).cwiseAbs().maxCoeff());
    }
    if (diff > worst) {
      worst = diff;
      result.location = static_cast<long>(k);
    }
  }
  result.worst_margin = tol - worst;
  result.passed = result.worst_margin >= 0.0;
  return result;
}

CheckResult certify_level_set(const IterateTrace& trace, const Problem& problem, double tol) {
  if (trace.rows.empty()) throw std::invalid_argument("level-set check needs a non-empty trace");
  CheckResult result;
  result.name = "level-set";
  result.worst_margin = std::numeric_limits<double>::infinity();
  // Budget-enlarged level set of the starting point; recompute values from the
  // iterates when the trace carries them, otherwise trust the recorded column.
  const bool recompute = trace.params.size() == trace.rows.size();
  auto value_at = [&](std::size_t k) {
    return recompute ? problem.implicit_objective(trace.params[k]) : trace.rows[k].implicit_obj;
  };
  const double budget = trace.rows.front().tail;  // total remaining at row 0
  const double ceiling = value_at(0) + budget;
  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    const double slack = ceiling - value_at(k);
    if (slack < result.worst_margin) {
      result.worst_margin = slack;
      result.location = static_cast<long>(k);
    }
  }
  result.passed = result.worst_margin >= -tol;
  return result;
}

CheckResult certify_lsc_limit(const std::vector<double>& values, double limit_candidate,
                              double tol) {
  if (values.size() < 2) throw std::invalid_argument("lsc-limit check needs at least two values");
  CheckResult result;
  result.name = "lsc-limit";
  result.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    const double decrease = values[k] - values[k + 1];
    if (decrease < result.worst_margin) {
      result.worst_margin = decrease;
      result.location = static_cast<long>(k);
    }
  }
  const double closeness = -std::abs(values.back() - limit_candidate);
  if (closeness < result.worst_margin) {
    result.worst_margin = closeness;
    result.location = static_cast<long>(values.size() - 1);
  }
  result.passed = result.worst_margin >= -tol;
  return result;
}

}  // namespace spl
