#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "spl/diagnostics.hpp"
#include "spl/io.hpp"
#include "spl/problem.hpp"
#include "spl/regularizer.hpp"
#include "spl/solver.hpp"

namespace spl {

struct GeneratorSpec {
  int n = 50;
  int d = 5;
  std::optional<Eigen::VectorXd> true_params;  // defaults to all ones
  double noise_sigma = 0.1;
  double outlier_fraction = 0.0;
  double outlier_magnitude = 1.0;
};

struct GeneratedData {
  Dataset dataset;
  Eigen::VectorXd true_params;
  std::vector<int> outlier_indices;  // sorted
  std::vector<int> outlier_signs;    // +1 / -1, aligned with outlier_indices
};

/// Synthetic regression data: standard-normal features, targets
/// true_params . x + noise, and a floor(outlier_fraction * n) subset of the
/// targets shifted by +-outlier_magnitude. Deterministic per seed; draw order
/// is features row-major, then noise, then outlier selection, then signs.
GeneratedData generate(const GeneratorSpec& spec, std::uint64_t seed);

nlohmann::json ground_truth_json(const GeneratedData& data, const GeneratorSpec& spec,
                                 std::uint64_t seed);

struct PaceRule {
  bool percentile = true;
  double value = 70.0;  // percentile in (0,100) or the fixed pace value

  static PaceRule fixed(double v) { return {false, v}; }
  static PaceRule at_percentile(double p) { return {true, p}; }
};

/// Pace parameter from a fixed value or from the p-th linear-interpolation
/// percentile of the losses at the starting point.
PaceParameter resolve_pace(const PaceRule& rule, const Problem& problem,
                           const Eigen::VectorXd& w0);

/// Linear-interpolation percentile of a sample (p in (0,100)).
double percentile(std::vector<double> values, double p);

struct CertificationSettings {
  double criticality_tol = 1e-6;
  double criticality_tol_inexact = 1e-5;
  double equivalence_tol = 1e-10;
  int majorization_anchors = 100;
  int majorization_probes = 100;
  double probe_box = 3.0;  // anchors/probes drawn uniformly from [-box, box]^D
};

struct SweepSettings {
  std::string parameter;  // "lambda" or "eps0"
  std::vector<double> values;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  // exactly one data source
  std::optional<std::string> data_path;
  std::optional<GeneratorSpec> generator;

  LossKind loss_kind = LossKind::SquaredError;
  double mu = 1.0;
  RegularizerKind regularizer_kind = RegularizerKind::Entropic;
  PaceRule pace_rule = PaceRule::at_percentile(70.0);
  std::optional<std::string> table_path;  // tabulated kind only

  std::optional<Eigen::VectorXd> w0;  // defaults to zeros
  std::vector<SolverConfig> solvers;
  CertificationSettings certification;
  std::optional<SweepSettings> sweep;
};

/// Parses the experiment config JSON; every field except the data source and
/// the seed has a default.
ExperimentConfig parse_experiment_config(const nlohmann::json& json);
ExperimentConfig load_experiment_config(const std::string& path);

/// Default solver configuration for a scheme: closed-form inner solves where
/// valid (squared error, mu > 0, exact scheme), gradient descent otherwise,
/// and a geometric error schedule for the inexact scheme.
SolverConfig default_solver(SolverScheme scheme, LossKind loss, double mu);

nlohmann::json solver_config_json(const SolverConfig& config);

struct SchemeOutcome {
  SolverScheme scheme = SolverScheme::Aos;
  int iters = 0;
  bool converged = false;
  double final_implicit = 0.0;
  double final_grad_norm = 0.0;
  bool verdict = false;
  double param_error = std::numeric_limits<double>::quiet_NaN();  // |w - true_w| when known
};

struct RunResult {
  std::vector<SchemeOutcome> outcomes;
  std::optional<bool> equivalence_verdict;
  double baseline_error = std::numeric_limits<double>::quiet_NaN();
  bool all_passed = false;
  std::vector<std::string> artifacts;  // paths written, relative to output_dir
};

/// Runs the full pipeline: data, pace resolution, one solve per configured
/// scheme, certification reports, and the summary table. Artifacts land in
/// config.output_dir. Identical config and seed produce identical bytes.
RunResult run_experiment(const ExperimentConfig& config);

/// Runs the pipeline once per sweep value (pace or eps0 override) in
/// subdirectories of output_dir and writes a sweep.csv summary.
RunResult run_sweep(const ExperimentConfig& config);

/// Builds the problem exactly as run_experiment would (loads or generates
/// data, resolves the pace), without writing artifacts.
Problem build_problem(const ExperimentConfig& config);

/// Certification of a previously written trace (possibly loaded from CSV,
/// without iterate vectors): majorization over seeded probes, descent
/// (adjusted when the trace carries an error schedule), level-set
/// containment, the lsc-limit check against final_value (defaults to the
/// last recorded objective), and criticality from the recorded gradient-norm
/// column.
CertificationReport verify_trace(const Problem& problem, const IterateTrace& trace,
                                 const CertificationSettings& settings, std::uint64_t seed,
                                 std::optional<double> final_value = std::nullopt);

}  // namespace spl
