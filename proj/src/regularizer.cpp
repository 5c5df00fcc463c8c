#include "spl/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "spl/quadrature.hpp"

namespace spl {

PaceParameter::PaceParameter(double value) : value_(value) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw std::invalid_argument("pace parameter must be positive and finite");
  }
}

std::string to_string(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::Hard:
      return "hard";
    case RegularizerKind::Linear:
      return "linear";
    case RegularizerKind::Entropic:
      return "entropic";
    case RegularizerKind::Tabulated:
      return "tabulated";
  }
  return "unknown";
}

Regularizer::Regularizer(RegularizerKind kind, double pace, std::vector<double> loss_knots,
                         std::vector<double> weight_knots)
    : kind_(kind),
      pace_(pace),
      loss_knots_(std::move(loss_knots)),
      weight_knots_(std::move(weight_knots)) {}

Regularizer Regularizer::hard(double pace) { return {RegularizerKind::Hard, pace, {}, {}}; }

Regularizer Regularizer::linear(double pace) { return {RegularizerKind::Linear, pace, {}, {}}; }

Regularizer Regularizer::entropic(double pace) { return {RegularizerKind::Entropic, pace, {}, {}}; }

namespace {

void validate_loss_knots(const std::vector<double>& ls) {
  if (ls.empty()) throw std::invalid_argument("tabulated regularizer needs a non-empty table");
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (!std::isfinite(ls[i]) || ls[i] < 0.0) {
      throw std::invalid_argument("tabulated loss knots must be finite and non-negative");
    }
    if (i > 0 && ls[i] <= ls[i - 1]) {
      throw std::invalid_argument("tabulated loss knots must be strictly increasing");
    }
  }
}

}  // namespace

Regularizer Regularizer::tabulated(double pace, std::vector<double> loss_knots,
                                   std::vector<double> weight_knots) {
  if (loss_knots.size() != weight_knots.size()) {
    throw std::invalid_argument("tabulated knot vectors must have equal length");
  }
  validate_loss_knots(loss_knots);
  for (std::size_t i = 0; i < weight_knots.size(); ++i) {
    const double v = weight_knots[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw std::invalid_argument("tabulated weights must lie in [0,1]");
    }
    if (i > 0 && v > weight_knots[i - 1]) {
      throw std::invalid_argument("tabulated weights must be non-increasing");
    }
  }
  return {RegularizerKind::Tabulated, pace, std::move(loss_knots), std::move(weight_knots)};
}

Regularizer Regularizer::tabulated_unchecked(double pace, std::vector<double> loss_knots,
                                             std::vector<double> weight_knots) {
  if (loss_knots.size() != weight_knots.size()) {
    throw std::invalid_argument("tabulated knot vectors must have equal length");
  }
  validate_loss_knots(loss_knots);
  return {RegularizerKind::Tabulated, pace, std::move(loss_knots), std::move(weight_knots)};
}

Regularizer Regularizer::with_pace(double pace) const {
  return {kind_, pace, loss_knots_, weight_knots_};
}

double Regularizer::penalty(double v) const {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("weight must lie in [0,1]");
  }
  const double pace = pace_.value();
  switch (kind_) {
    case RegularizerKind::Hard:
      return -pace * v;
    case RegularizerKind::Linear:
      return pace * (0.5 * v * v - v);
    case RegularizerKind::Entropic:
      // v log v -> 0 as v -> 0, so the domain closes at 0.
      return v == 0.0 ? 0.0 : pace * v * (std::log(v) - 1.0);
    case RegularizerKind::Tabulated:
      throw std::logic_error("penalty is not defined for a tabulated regularizer");
  }
  throw std::logic_error("unreachable");
}

double Regularizer::weight(double loss) const {
  if (!(loss >= 0.0) || !std::isfinite(loss)) {
    throw std::domain_error("loss must be non-negative and finite");
  }
  const double pace = pace_.value();
  switch (kind_) {
    case RegularizerKind::Hard:
      // Tie at loss == pace: the minimizer set is [0,1]; include the sample.
      return loss <= pace ? 1.0 : 0.0;
    case RegularizerKind::Linear:
      return std::max(0.0, 1.0 - loss / pace);
    case RegularizerKind::Entropic:
      return std::exp(-loss / pace);
    case RegularizerKind::Tabulated: {
      const auto& ls = loss_knots_;
      const auto& vs = weight_knots_;
      if (loss <= ls.front()) return vs.front();
      if (loss >= ls.back()) return vs.back();
      const auto it = std::upper_bound(ls.begin(), ls.end(), loss);
      const std::size_t hi = static_cast<std::size_t>(it - ls.begin());
      const std::size_t lo = hi - 1;
      const double t = (loss - ls[lo]) / (ls[hi] - ls[lo]);
      return vs[lo] + t * (vs[hi] - vs[lo]);
    }
  }
  throw std::logic_error("unreachable");
}

double Regularizer::envelope(double loss) const {
  if (!(loss >= 0.0) || !std::isfinite(loss)) {
    throw std::domain_error("loss must be non-negative and finite");
  }
  const double pace = pace_.value();
  switch (kind_) {
    case RegularizerKind::Hard:
      return std::min(loss, pace);
    case RegularizerKind::Linear:
      return loss <= pace ? loss - loss * loss / (2.0 * pace) : 0.5 * pace;
    case RegularizerKind::Entropic:
      return -pace * std::expm1(-loss / pace);
    case RegularizerKind::Tabulated: {
      if (loss == 0.0) return 0.0;
      // Integrate segment by segment so the quadrature never straddles a knot.
      const auto f = [this](double t) { return weight(t); };
      double total = 0.0;
      double a = 0.0;
      for (std::size_t i = 0; i < loss_knots_.size() && a < loss; ++i) {
        const double b = std::min(loss, loss_knots_[i]);
        if (b > a) {
          total += integrate(f, a, b, 1e-10);
          a = b;
        }
      }
      if (a < loss) total += integrate(f, a, loss, 1e-10);
      return total;
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

void validate_grid(const std::vector<double>& grid, bool strictly_positive, const char* what) {
  if (grid.empty()) throw std::invalid_argument(std::string(what) + " grid must be non-empty");
  const double lower = strictly_positive ? std::numeric_limits<double>::min() : 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < lower) {
      throw std::invalid_argument(std::string(what) + " grid entries out of range");
    }
    if (i > 0 && grid[i] < grid[i - 1]) {
      throw std::invalid_argument(std::string(what) + " grid must be sorted");
    }
  }
}

}  // namespace

ConditionReport check_sp_conditions(const Regularizer& reg, const std::vector<double>& loss_grid,
                                    const std::vector<double>& pace_grid) {
  validate_grid(loss_grid, false, "loss");
  validate_grid(pace_grid, true, "pace");

  ConditionReport report;
  const double tol = 1e-12;

  // Condition 1: convexity of the penalty via second differences on a weight grid.
  if (reg.kind() == RegularizerKind::Tabulated) {
    report.condition1 = true;
    report.margin1 = 0.0;
    report.notes.push_back("condition1 skipped: tabulated kind has no penalty closed form");
  } else {
    const int n = 1001;
    const double h = 1.0 / (n - 1);
    double worst = std::numeric_limits<double>::infinity();
    for (double pace : pace_grid) {
      const Regularizer r = reg.with_pace(pace);
      double prev = r.penalty(0.0);
      double cur = r.penalty(h);
      for (int i = 1; i + 1 < n; ++i) {
        const double next = r.penalty((i + 1) * h);
        worst = std::min(worst, prev - 2.0 * cur + next);
        prev = cur;
        cur = next;
      }
    }
    report.margin1 = worst;
    report.condition1 = worst >= -1e-9;
  }

  // Condition 2: weight in [0,1], non-increasing in loss, limit surrogates at
  // the smallest pace on the grid.
  {
    double worst = std::numeric_limits<double>::infinity();
    for (double pace : pace_grid) {
      const Regularizer r = reg.with_pace(pace);
      double prev = std::numeric_limits<double>::quiet_NaN();
      for (std::size_t j = 0; j < loss_grid.size(); ++j) {
        const double v = r.weight(loss_grid[j]);
        worst = std::min(worst, std::min(v, 1.0 - v));
        if (j > 0 && loss_grid[j] > loss_grid[j - 1]) {
          worst = std::min(worst, prev - v);
        }
        prev = v;
      }
    }
    const Regularizer r_min = reg.with_pace(pace_grid.front());
    worst = std::min(worst, r_min.weight(loss_grid.front()) - 0.95);
    worst = std::min(worst, 0.05 - r_min.weight(loss_grid.back()));
    report.margin2 = worst;
    report.condition2 = worst >= -tol;
  }

  // Condition 3: weight non-decreasing in the pace parameter.
  {
    double worst = std::numeric_limits<double>::infinity();
    for (double loss : loss_grid) {
      double prev = std::numeric_limits<double>::quiet_NaN();
      for (std::size_t j = 0; j < pace_grid.size(); ++j) {
        const double v = reg.with_pace(pace_grid[j]).weight(loss);
        if (j > 0 && pace_grid[j] > pace_grid[j - 1]) {
          worst = std::min(worst, v - prev);
        }
        prev = v;
      }
    }
    if (!std::isfinite(worst)) worst = 0.0;  // single-pace grid
    report.margin3 = worst;
    report.condition3 = worst >= -tol;
  }

  if (reg.kind() == RegularizerKind::Hard) {
    report.notes.push_back(
        "hard kind: weight(loss) jumps at loss == pace; the tie resolves to 1 (sample included), "
        "so the weighting rule is discontinuous there");
  }
  return report;
}

}  // namespace spl
