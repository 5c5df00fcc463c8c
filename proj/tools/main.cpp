#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "spl/experiment.hpp"
#include "spl/io.hpp"
#include "spl/rng.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> scheme;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required = true) {
  auto* opt = cmd->add_option("--config", flags.config_path, "experiment config (JSON)");
  if (config_required) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "override the config seed");
  cmd->add_option("--out", flags.out_dir, "override the output directory");
}

spl::ExperimentConfig load_config(const CommonFlags& flags) {
  spl::ExperimentConfig cfg = spl::load_experiment_config(flags.config_path);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.out_dir) cfg.output_dir = *flags.out_dir;
  if (flags.scheme) {
    const spl::SolverScheme wanted = [&] {
      if (*flags.scheme == "aos") return spl::SolverScheme::Aos;
      if (*flags.scheme == "mm") return spl::SolverScheme::ExactMm;
      if (*flags.scheme == "inexact-mm") return spl::SolverScheme::InexactMm;
      throw CLI::ValidationError("--scheme must be aos, mm or inexact-mm");
    }();
    std::vector<spl::SolverConfig> kept;
    for (const auto& s : cfg.solvers) {
      if (s.scheme == wanted) kept.push_back(s);
    }
    if (kept.empty()) {
      kept.push_back(spl::default_solver(wanted, cfg.loss_kind, cfg.mu));
    }
    cfg.solvers = std::move(kept);
  }
  return cfg;
}

void print_outcomes(const spl::RunResult& result) {
  for (const auto& o : result.outcomes) {
    std::cout << spl::to_string(o.scheme) << ": iters=" << o.iters
              << " converged=" << (o.converged ? "yes" : "no")
              << " final_G=" << spl::format_double(o.final_implicit)
              << " grad_norm=" << spl::format_double(o.final_grad_norm)
              << " certification=" << (o.verdict ? "pass" : "FAIL") << "\n";
  }
  if (result.equivalence_verdict) {
    std::cout << "aos/mm equivalence: " << (*result.equivalence_verdict ? "pass" : "FAIL") << "\n";
  }
}

int cmd_gen_data(const CommonFlags& flags) {
  spl::ExperimentConfig cfg = load_config(flags);
  if (!cfg.generator) {
    std::cerr << "gen-data needs a data.generator section in the config\n";
    return 2;
  }
  const fs::path out(cfg.output_dir);
  fs::create_directories(out);
  const spl::GeneratedData data = spl::generate(*cfg.generator, cfg.seed);
  spl::save_dataset_csv(data.dataset, (out / "dataset.csv").string());
  spl::write_json_file(spl::ground_truth_json(data, *cfg.generator, cfg.seed),
                       (out / "truth.json").string());
  std::cout << "wrote " << (out / "dataset.csv").string() << " and " << (out / "truth.json").string()
            << "\n";
  return 0;
}

int cmd_solve(const CommonFlags& flags) {
  const spl::ExperimentConfig cfg = load_config(flags);
  const spl::RunResult result = spl::run_experiment(cfg);
  print_outcomes(result);
  std::cout << "artifacts in " << cfg.output_dir << "\n";
  return result.all_passed ? 0 : 1;
}

int cmd_verify(const CommonFlags& flags, const std::string& trace_path,
               const std::string& sidecar_path) {
  const spl::ExperimentConfig cfg = load_config(flags);
  const spl::Problem problem = spl::build_problem(cfg);
  const spl::IterateTrace trace = spl::load_trace_csv(trace_path);

  std::optional<double> final_value;
  std::string sidecar = sidecar_path;
  if (sidecar.empty()) {
    fs::path guess(trace_path);
    guess.replace_extension(".json");
    if (fs::exists(guess)) sidecar = guess.string();
  }
  if (!sidecar.empty()) {
    final_value = spl::read_json_file(sidecar).at("final_G").get<double>();
  }

  const spl::CertificationReport report =
      spl::verify_trace(problem, trace, cfg.certification, cfg.seed, final_value);
  for (const auto& c : report.checks) {
    std::cout << c.name << ": "
              << (c.skipped ? "skipped" : (c.passed ? "pass" : "FAIL"))
              << (c.informational ? " (informational)" : "")
              << " worst_margin=" << spl::format_double(c.worst_margin) << "\n";
  }
  const fs::path out(cfg.output_dir);
  fs::create_directories(out);
  const fs::path report_path = out / "verify_report.json";
  spl::write_json_file(spl::certification_report_json(report), report_path.string());
  std::cout << "verdict: " << (report.verdict() ? "pass" : "FAIL") << " (" << report_path.string()
            << ")\n";
  return report.verdict() ? 0 : 1;
}

int cmd_sweep(const CommonFlags& flags) {
  const spl::ExperimentConfig cfg = load_config(flags);
  const spl::RunResult result = spl::run_sweep(cfg);
  std::cout << "sweep summary in " << (fs::path(cfg.output_dir) / "sweep.csv").string() << "\n";
  return result.all_passed ? 0 : 1;
}

struct GridSpec {
  double min = 0.0;
  double max = 10.0;
  int count = 101;
};

std::vector<double> linspace(const GridSpec& grid) {
  if (grid.count < 1 || !(grid.max >= grid.min)) {
    throw std::invalid_argument("invalid grid specification");
  }
  std::vector<double> out;
  out.reserve(grid.count);
  for (int i = 0; i < grid.count; ++i) {
    const double t = grid.count == 1 ? 0.0 : static_cast<double>(i) / (grid.count - 1);
    out.push_back(grid.min + t * (grid.max - grid.min));
  }
  return out;
}

GridSpec parse_grid(const nlohmann::json& j, const GridSpec& defaults) {
  GridSpec grid = defaults;
  grid.min = j.value("min", grid.min);
  grid.max = j.value("max", grid.max);
  grid.count = j.value("count", grid.count);
  return grid;
}

int cmd_check_regularizer(const CommonFlags& flags) {
  nlohmann::json cfg = nlohmann::json::object();
  if (!flags.config_path.empty()) cfg = spl::read_json_file(flags.config_path);

  std::string kind = "entropic";
  double pace = 1.0;
  std::string table;
  if (cfg.contains("regularizer")) {
    const auto& r = cfg["regularizer"];
    kind = r.value("kind", kind);
    pace = r.value("lambda", pace);
    table = r.value("table", table);
  }
  spl::Regularizer reg = [&]() {
    if (kind == "hard") return spl::Regularizer::hard(pace);
    if (kind == "linear") return spl::Regularizer::linear(pace);
    if (kind == "entropic") return spl::Regularizer::entropic(pace);
    if (kind == "tabulated") {
      if (table.empty()) throw std::invalid_argument("tabulated kind needs a table path");
      return spl::load_tabulated_csv(pace, table);
    }
    throw std::invalid_argument("unknown regularizer kind '" + kind + "'");
  }();

  const GridSpec loss_defaults{0.0, 10.0, 101};
  const GridSpec pace_defaults{0.1, 10.0, 100};
  const auto loss_grid =
      linspace(cfg.contains("loss_grid") ? parse_grid(cfg["loss_grid"], loss_defaults)
                                         : loss_defaults);
  const auto pace_grid =
      linspace(cfg.contains("pace_grid") ? parse_grid(cfg["pace_grid"], pace_defaults)
                                         : pace_defaults);

  const spl::ConditionReport report = spl::check_sp_conditions(reg, loss_grid, pace_grid);
  std::cout << "condition1 (penalty convex): " << (report.condition1 ? "pass" : "FAIL")
            << " margin=" << spl::format_double(report.margin1) << "\n"
            << "condition2 (weight vs loss): " << (report.condition2 ? "pass" : "FAIL")
            << " margin=" << spl::format_double(report.margin2) << "\n"
            << "condition3 (weight vs pace): " << (report.condition3 ? "pass" : "FAIL")
            << " margin=" << spl::format_double(report.margin3) << "\n";

  const fs::path out(flags.out_dir.value_or("."));
  fs::create_directories(out);
  const fs::path report_path = out / "condition_report.json";
  spl::write_json_file(spl::condition_report_json(report), report_path.string());
  std::cout << "report: " << report_path.string() << "\n";
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"self-paced learning solvers with convergence certificates"};
  app.require_subcommand(1);

  CommonFlags gen_flags, solve_flags, verify_flags, sweep_flags, check_flags;
  std::string trace_path, sidecar_path;

  auto* gen = app.add_subcommand("gen-data", "generate a synthetic dataset (CSV + ground truth)");
  add_common(gen, gen_flags);

  auto* solve = app.add_subcommand("solve", "run the configured solvers and certifications");
  add_common(solve, solve_flags);
  solve->add_option("--scheme", solve_flags.scheme, "restrict to one scheme: aos, mm, inexact-mm");

  auto* verify = app.add_subcommand("verify", "re-certify an existing trace CSV");
  add_common(verify, verify_flags);
  verify->add_option("--trace", trace_path, "trace CSV to certify")
      ->required()
      ->check(CLI::ExistingFile);
  verify->add_option("--sidecar", sidecar_path, "trace summary JSON (default: trace with .json)");

  auto* sweep = app.add_subcommand("sweep", "run the pipeline over a lambda or eps0 grid");
  add_common(sweep, sweep_flags);

  auto* check = app.add_subcommand("check-regularizer",
                                   "verify the self-paced regularizer conditions on grids");
  add_common(check, check_flags, /*config_required=*/false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_data(gen_flags);
    if (solve->parsed()) return cmd_solve(solve_flags);
    if (verify->parsed()) return cmd_verify(verify_flags, trace_path, sidecar_path);
    if (sweep->parsed()) return cmd_sweep(sweep_flags);
    if (check->parsed()) return cmd_check_regularizer(check_flags);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
