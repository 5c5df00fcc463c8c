#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "spl/problem.hpp"

namespace spl {

enum class SolverScheme { Aos, ExactMm, InexactMm };
enum class InnerMethod { ClosedForm, GradientDescent };

std::string to_string(SolverScheme scheme);
std::string to_string(InnerMethod method);

/// Summable error budget for the inexact scheme: eps_k for k = 1, 2, ...
/// Supported rules keep the total finite by construction:
///   geometric  eps_k = eps0 * rho^k,  rho in (0,1)
///   power      eps_k = eps0 * k^-p,   p > 1
class ErrorSchedule {
 public:
  static ErrorSchedule geometric(double eps0, double rho);
  static ErrorSchedule power(double eps0, double exponent);

  /// eps_k, valid for k >= 1.
  double epsilon(int k) const;

  /// Tail sum over j >= k of eps_j, valid for k >= 1.
  double tail(int k) const;

  /// Total budget, sum over all k >= 1.
  double total() const { return tail(1); }

  std::string describe() const;

 private:
  enum class Rule { Geometric, Power };
  ErrorSchedule(Rule rule, double eps0, double param) : rule_(rule), eps0_(eps0), param_(param) {}

  Rule rule_;
  double eps0_;
  double param_;
};

struct ArmijoConfig {
  double c = 1e-4;
  double backtrack = 0.5;
  double initial_step = 1.0;
};

struct InnerSolverConfig {
  InnerMethod method = InnerMethod::ClosedForm;
  double grad_tol = 1e-10;
  int max_inner_iters = 10000;
  ArmijoConfig armijo;
};

struct SolverConfig {
  SolverScheme scheme = SolverScheme::Aos;
  int max_outer_iters = 500;
  double outer_tol = 1e-10;
  InnerSolverConfig inner;
  std::optional<ErrorSchedule> error_schedule;  // required for InexactMm
};

/// One outer iteration of a solve. Row 0 is the initial point; eps is the
/// error budget spent reaching this iterate (0 at row 0) and tail is the
/// remaining budget sum_{j>k} eps_j, so implicit_obj + tail is the monotone
/// Lyapunov sequence of the inexact scheme.
struct TraceRow {
  int k = 0;
  double explicit_obj = 0.0;
  double implicit_obj = 0.0;
  double surrogate_obj = 0.0;   // U(w_k | w_{k-1}); equals implicit_obj at row 0
  double grad_norm = 0.0;       // |grad G(w_k)|; NaN for non-smooth kinds
  double eps = 0.0;
  double tail = 0.0;
  double step_norm = 0.0;
  int inner_iters = 0;
  double inner_residual = 0.0;  // gap certificate (gd) or linear-solve residual (closed form)
};

struct IterateTrace {
  SolverScheme scheme = SolverScheme::Aos;
  bool converged = false;
  bool has_error_schedule = false;
  std::vector<TraceRow> rows;
  std::vector<Eigen::VectorXd> params;   // w_k per row; may be empty when loaded from CSV
  std::vector<Eigen::VectorXd> weights;  // v_k per row

  int iterations() const { return rows.empty() ? 0 : rows.back().k; }
  const Eigen::VectorXd& final_params() const;
  std::vector<double> implicit_values() const;
  /// implicit_obj + tail per row (the adjusted Lyapunov values).
  std::vector<double> adjusted_values() const;
  double final_grad_norm() const { return rows.empty() ? 0.0 : rows.back().grad_norm; }
};

/// Thrown when an inner solve fails numerically; carries the rows produced
/// before the failure.
class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, IterateTrace partial)
      : std::runtime_error(what), partial_trace(std::move(partial)) {}
  IterateTrace partial_trace;
};

struct ParamStepResult {
  Eigen::VectorXd params;
  double gap = 0.0;        // upper bound on weighted-objective suboptimality
  double grad_norm = 0.0;  // weighted-objective gradient norm at exit
  int iters = 0;
  double residual = 0.0;
};

/// Exact minimizer of the explicit objective over the weights at fixed
/// parameters: weight_i = regularizer.weight(loss_i).
Eigen::VectorXd weight_step(const Problem& problem, const Eigen::VectorXd& params);

/// Minimizes the weighted objective 0.5*mu*|w|^2 + sum_i v_i loss_i(w).
/// ClosedForm solves the normal equations (X^T V X + mu I) w = X^T V y and is
/// valid only for squared error with mu > 0. GradientDescent runs Armijo
/// backtracking until the gradient norm reaches grad_tol (or the override,
/// when non-negative) and certifies the suboptimality gap as
/// grad_norm^2 / (2*mu), valid because the weighted objective is mu-strongly
/// convex for both supported losses.
ParamStepResult param_step(const Problem& problem, const Eigen::VectorXd& weights,
                           const Eigen::VectorXd& init, const InnerSolverConfig& config,
                           double grad_tol_override = -1.0);

/// Alternating optimization on the explicit objective: exact weight step,
/// then a parameter step, until the step norm reaches outer_tol.
IterateTrace aos_solve(const Problem& problem, const Eigen::VectorXd& w0,
                       const SolverConfig& config);

/// Majorization-minimization on the implicit objective. Each surrogate
/// minimization coincides with the weighted parameter step (the surrogate
/// differs from the weighted objective by constants in w), so this shares the
/// AOS code path and the two schemes produce identical iterates.
IterateTrace mm_solve(const Problem& problem, const Eigen::VectorXd& w0,
                      const SolverConfig& config);

/// MM with errors: step k may miss the surrogate minimum by eps_k, enforced
/// through the strong-convexity gap certificate. Requires a summable error
/// schedule, the gradient-descent inner method, and mu > 0.
IterateTrace inexact_mm_solve(const Problem& problem, const Eigen::VectorXd& w0,
                              const SolverConfig& config);

}  // namespace spl
