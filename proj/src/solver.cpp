#include "spl/solver.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace spl {

std::string to_string(SolverScheme scheme) {
  switch (scheme) {
    case SolverScheme::Aos:
      return "aos";
    case SolverScheme::ExactMm:
      return "mm";
    case SolverScheme::InexactMm:
      return "inexact-mm";
  }
  return "unknown";
}

std::string to_string(InnerMethod method) {
  return method == InnerMethod::ClosedForm ? "closed-form" : "gradient-descent";
}

ErrorSchedule ErrorSchedule::geometric(double eps0, double rho) {
  if (!std::isfinite(eps0) || eps0 < 0.0) {
    throw std::invalid_argument("geometric schedule needs eps0 >= 0");
  }
  if (!(rho > 0.0 && rho < 1.0)) {
    throw std::invalid_argument("geometric schedule needs rho in (0,1); the sum diverges otherwise");
  }
  return {Rule::Geometric, eps0, rho};
}

ErrorSchedule ErrorSchedule::power(double eps0, double exponent) {
  if (!std::isfinite(eps0) || eps0 < 0.0) {
    throw std::invalid_argument("power schedule needs eps0 >= 0");
  }
  if (!(exponent > 1.0)) {
    throw std::invalid_argument("power schedule needs exponent > 1; the sum diverges otherwise");
  }
  return {Rule::Power, eps0, exponent};
}

double ErrorSchedule::epsilon(int k) const {
  if (k < 1) throw std::invalid_argument("error schedule index starts at 1");
  if (rule_ == Rule::Geometric) return eps0_ * std::pow(param_, k);
  return eps0_ * std::pow(static_cast<double>(k), -param_);
}

double ErrorSchedule::tail(int k) const {
  if (k < 1) throw std::invalid_argument("error schedule index starts at 1");
  if (rule_ == Rule::Geometric) return eps0_ * std::pow(param_, k) / (1.0 - param_);
  // sum_{j>=k} j^-p: direct terms up to M, then an Euler-Maclaurin tail.
  const double p = param_;
  const int m = k + 64;
  double s = 0.0;
  for (int j = m - 1; j >= k; --j) s += std::pow(static_cast<double>(j), -p);
  const double dm = static_cast<double>(m);
  s += std::pow(dm, 1.0 - p) / (p - 1.0) + 0.5 * std::pow(dm, -p) +
       p / 12.0 * std::pow(dm, -p - 1.0);
  return eps0_ * s;
}

std::string ErrorSchedule::describe() const {
  if (rule_ == Rule::Geometric) {
    return "geometric(eps0=" + std::to_string(eps0_) + ", rho=" + std::to_string(param_) + ")";
  }
  return "power(eps0=" + std::to_string(eps0_) + ", p=" + std::to_string(param_) + ")";
}

const Eigen::VectorXd& IterateTrace::final_params() const {
  if (params.empty()) throw std::logic_error("trace carries no iterate vectors");
  return params.back();
}

std::vector<double> IterateTrace::implicit_values() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.implicit_obj);
  return out;
}

std::vector<double> IterateTrace::adjusted_values() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.implicit_obj + r.tail);
  return out;
}

Eigen::VectorXd weight_step(const Problem& problem, const Eigen::VectorXd& params) {
  const Eigen::VectorXd l = problem.losses(params);
  Eigen::VectorXd v(l.size());
  for (Eigen::Index i = 0; i < l.size(); ++i) v[i] = problem.regularizer().weight(l[i]);
  return v;
}

namespace {

void validate_inner(const InnerSolverConfig& cfg) {
  if (!(cfg.grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be positive");
  if (cfg.max_inner_iters < 1) throw std::invalid_argument("max_inner_iters must be >= 1");
  if (!(cfg.armijo.c > 0.0 && cfg.armijo.c < 1.0)) {
    throw std::invalid_argument("armijo c must lie in (0,1)");
  }
  if (!(cfg.armijo.backtrack > 0.0 && cfg.armijo.backtrack < 1.0)) {
    throw std::invalid_argument("armijo backtrack ratio must lie in (0,1)");
  }
  if (!(cfg.armijo.initial_step > 0.0)) {
    throw std::invalid_argument("armijo initial step must be positive");
  }
}

ParamStepResult closed_form_step(const Problem& problem, const Eigen::VectorXd& weights) {
  if (problem.loss_kind() != LossKind::SquaredError || !(problem.mu() > 0.0)) {
    throw std::invalid_argument("closed-form step needs squared error loss and mu > 0");
  }
  const auto& x = problem.dataset().features();
  const auto& y = problem.dataset().targets();
  const Eigen::MatrixXd a =
      x.transpose() * weights.asDiagonal() * x +
      problem.mu() * Eigen::MatrixXd::Identity(problem.dim(), problem.dim());
  const Eigen::VectorXd b = x.transpose() * (weights.asDiagonal() * y);
  ParamStepResult result;
  result.params = a.ldlt().solve(b);
  if (!result.params.allFinite()) {
    throw std::runtime_error("closed-form parameter step produced non-finite values");
  }
  const Eigen::VectorXd grad = a * result.params - b;  // weighted-objective gradient
  result.grad_norm = grad.norm();
  result.residual = result.grad_norm / std::max(1.0, b.norm());
  result.gap = 0.0;
  result.iters = 0;
  return result;
}

ParamStepResult gradient_descent_step(const Problem& problem, const Eigen::VectorXd& weights,
                                      const Eigen::VectorXd& init, const InnerSolverConfig& cfg,
                                      double grad_tol) {
  ParamStepResult result;
  Eigen::VectorXd w = init;
  double value = problem.weighted_objective(w, weights);
  Eigen::VectorXd grad = problem.weighted_gradient(w, weights);
  int iter = 0;
  while (iter < cfg.max_inner_iters) {
    const double gnorm2 = grad.squaredNorm();
    if (std::sqrt(gnorm2) <= grad_tol) break;
    double step = cfg.armijo.initial_step;
    Eigen::VectorXd candidate;
    double cand_value = value;
    bool accepted = false;
    for (int bt = 0; bt < 200; ++bt) {
      candidate = w - step * grad;
      cand_value = problem.weighted_objective(candidate, weights);
      if (cand_value <= value - cfg.armijo.c * step * gnorm2) {
        accepted = true;
        break;
      }
      step *= cfg.armijo.backtrack;
    }
    if (!accepted) break;  // step underflow; no further progress possible
    w = std::move(candidate);
    value = cand_value;
    grad = problem.weighted_gradient(w, weights);
    ++iter;
  }
  if (!w.allFinite()) {
    throw std::runtime_error("gradient-descent parameter step produced non-finite values");
  }
  result.params = std::move(w);
  result.grad_norm = grad.norm();
  result.gap = problem.mu() > 0.0 ? grad.squaredNorm() / (2.0 * problem.mu())
                                  : std::numeric_limits<double>::infinity();
  result.residual = result.gap;
  result.iters = iter;
  return result;
}

}  // namespace

ParamStepResult param_step(const Problem& problem, const Eigen::VectorXd& weights,
                           const Eigen::VectorXd& init, const InnerSolverConfig& config,
                           double grad_tol_override) {
  validate_inner(config);
  if (weights.size() != problem.size()) {
    throw std::invalid_argument("weights length does not match the number of samples");
  }
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0 && weights[i] <= 1.0)) {
      throw std::invalid_argument("sample weights must lie in [0,1]");
    }
  }
  if (config.method == InnerMethod::ClosedForm) {
    return closed_form_step(problem, weights);
  }
  const double tol = grad_tol_override >= 0.0 ? std::max(config.grad_tol, grad_tol_override)
                                              : config.grad_tol;
  return gradient_descent_step(problem, weights, init, config, tol);
}

namespace {

void validate_config(const Problem& problem, const SolverConfig& cfg) {
  if (!(cfg.outer_tol > 0.0)) throw std::invalid_argument("outer_tol must be positive");
  if (cfg.max_outer_iters < 1) throw std::invalid_argument("max_outer_iters must be >= 1");
  validate_inner(cfg.inner);
  if (cfg.scheme == SolverScheme::InexactMm) {
    if (!cfg.error_schedule) {
      throw std::invalid_argument("inexact scheme needs an error schedule");
    }
    if (cfg.inner.method != InnerMethod::GradientDescent) {
      throw std::invalid_argument(
          "inexact scheme needs the gradient-descent inner method (the eps_k stop is a gap "
          "certificate)");
    }
    if (!(problem.mu() > 0.0)) {
      throw std::invalid_argument("inexact scheme needs mu > 0 for the gap certificate");
    }
  }
}

double smooth_grad_norm(const Problem& problem, const Eigen::VectorXd& params) {
  if (!problem.regularizer().smooth()) return std::numeric_limits<double>::quiet_NaN();
  return problem.implicit_gradient(params).norm();
}

IterateTrace run_scheme(const Problem& problem, const Eigen::VectorXd& w0,
                        const SolverConfig& cfg) {
  validate_config(problem, cfg);
  if (w0.size() != problem.dim()) {
    throw std::invalid_argument("initial parameters do not match the dataset dimension");
  }
  const bool inexact = cfg.scheme == SolverScheme::InexactMm;

  IterateTrace trace;
  trace.scheme = cfg.scheme;
  trace.has_error_schedule = inexact;

  Eigen::VectorXd w = w0;
  Eigen::VectorXd v = weight_step(problem, w);

  TraceRow row0;
  row0.k = 0;
  row0.explicit_obj = problem.explicit_objective(w, v);
  row0.implicit_obj = problem.implicit_objective(w);
  row0.surrogate_obj = row0.implicit_obj;  // U(w0|w0) = G(w0)
  row0.grad_norm = smooth_grad_norm(problem, w);
  trace.rows.push_back(row0);
  trace.params.push_back(w);
  trace.weights.push_back(v);

  try {
    for (int k = 1; k <= cfg.max_outer_iters; ++k) {
      const Eigen::VectorXd prev = w;
      v = weight_step(problem, prev);
      const double eps_k = inexact ? cfg.error_schedule->epsilon(k) : 0.0;
      const double override_tol =
          inexact ? std::sqrt(2.0 * problem.mu() * eps_k) : -1.0;
      const ParamStepResult step = param_step(problem, v, prev, cfg.inner, override_tol);
      w = step.params;

      TraceRow row;
      row.k = k;
      row.explicit_obj = problem.explicit_objective(w, v);
      row.implicit_obj = problem.implicit_objective(w);
      row.surrogate_obj = problem.surrogate(w, prev);
      row.grad_norm = smooth_grad_norm(problem, w);
      row.eps = eps_k;
      row.step_norm = (w - prev).norm();
      row.inner_iters = step.iters;
      row.inner_residual = step.residual;
      trace.rows.push_back(row);
      trace.params.push_back(w);
      trace.weights.push_back(v);

      if (row.step_norm <= cfg.outer_tol) {
        trace.converged = true;
        break;
      }
    }
  } catch (const std::runtime_error& err) {
    throw SolveError(err.what(), std::move(trace));
  }

  if (inexact) {
    // Remaining budget per row, filled backwards so tail_k = eps_{k+1} + tail_{k+1}
    // holds exactly in floating point.
    const int last = trace.rows.back().k;
    double tail = cfg.error_schedule->tail(last + 1);
    for (auto it = trace.rows.rbegin(); it != trace.rows.rend(); ++it) {
      it->tail = tail;
      tail = it->eps + tail;
    }
  }
  return trace;
}

}  // namespace

IterateTrace aos_solve(const Problem& problem, const Eigen::VectorXd& w0,
                       const SolverConfig& config) {
  if (config.scheme != SolverScheme::Aos) {
    throw std::invalid_argument("aos_solve requires the aos scheme");
  }
  return run_scheme(problem, w0, config);
}

IterateTrace mm_solve(const Problem& problem, const Eigen::VectorXd& w0,
                      const SolverConfig& config) {
  if (config.scheme != SolverScheme::ExactMm) {
    throw std::invalid_argument("mm_solve requires the mm scheme");
  }
  return run_scheme(problem, w0, config);
}

IterateTrace inexact_mm_solve(const Problem& problem, const Eigen::VectorXd& w0,
                              const SolverConfig& config) {
  if (config.scheme != SolverScheme::InexactMm) {
    throw std::invalid_argument("inexact_mm_solve requires the inexact-mm scheme");
  }
  return run_scheme(problem, w0, config);
}

}  // namespace spl
