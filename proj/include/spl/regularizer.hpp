#pragma once

#include <string>
#include <vector>

namespace spl {

/// Pace parameter controlling how large a loss still earns substantial weight.
/// Construction rejects non-positive or non-finite values.
class PaceParameter {
 public:
  explicit PaceParameter(double value);
  double value() const { return value_; }

 private:
  double value_;
};

enum class RegularizerKind { Hard, Linear, Entropic, Tabulated };

std::string to_string(RegularizerKind kind);

/// A self-paced regularizer family: the penalty f on a sample weight, the
/// induced weighting rule v(loss) = argmin_{v in [0,1]} { v*loss + f(v) },
/// and the integrated envelope F(loss) = int_0^loss v(t) dt.
///
/// Closed forms:
///   Hard      f = -pace*v            weight = 1{loss <= pace}        envelope = min(loss, pace)
///   Linear    f = pace*(v^2/2 - v)   weight = max(0, 1 - loss/pace)  envelope = loss - loss^2/(2*pace), capped at pace/2
///   Entropic  f = pace*v*(log v - 1) weight = exp(-loss/pace)        envelope = pace*(1 - exp(-loss/pace))
///   Tabulated weight interpolated from a sampled table; envelope by adaptive
///   quadrature; the penalty has no closed form and is unsupported.
class Regularizer {
 public:
  static Regularizer hard(double pace);
  static Regularizer linear(double pace);
  static Regularizer entropic(double pace);

  /// Tabulated weighting rule from (loss, weight) knots. Knots must be
  /// non-empty, strictly increasing in loss, with weights in [0,1] and
  /// non-increasing. Evaluation clamps to the end knots.
  static Regularizer tabulated(double pace, std::vector<double> loss_knots,
                               std::vector<double> weight_knots);

  /// Same as tabulated() but skips the weight-shape validation (range and
  /// monotonicity). Exists so condition checks can be exercised against
  /// malformed tables; loss knots must still be sorted strictly increasing.
  static Regularizer tabulated_unchecked(double pace, std::vector<double> loss_knots,
                                         std::vector<double> weight_knots);

  RegularizerKind kind() const { return kind_; }
  double pace() const { return pace_.value(); }

  /// True when the weighting rule is a continuous function of the loss.
  bool smooth() const { return kind_ != RegularizerKind::Hard; }

  /// Copy of this regularizer with a different pace parameter.
  Regularizer with_pace(double pace) const;

  /// Penalty f(v) for a weight v in [0,1]. Unsupported for Tabulated.
  double penalty(double v) const;

  /// Optimal sample weight for a given non-negative loss.
  double weight(double loss) const;

  /// Integrated envelope F(loss) = int_0^loss weight(t) dt.
  double envelope(double loss) const;

  const std::vector<double>& loss_knots() const { return loss_knots_; }
  const std::vector<double>& weight_knots() const { return weight_knots_; }

 private:
  Regularizer(RegularizerKind kind, double pace, std::vector<double> loss_knots,
              std::vector<double> weight_knots);

  RegularizerKind kind_;
  PaceParameter pace_;
  std::vector<double> loss_knots_;
  std::vector<double> weight_knots_;
};

/// Numerical verification of the three defining conditions of a self-paced
/// regularizer on finite grids:
///   1. v -> f(v) convex on [0,1] (second differences; skipped for Tabulated),
///   2. loss -> weight non-increasing, contained in [0,1], near 1 at the small
///      end and near 0 at the large end of the grid (limits checked at the
///      smallest pace, where the grid reaches the asymptotic regime),
///   3. pace -> weight non-decreasing.
struct ConditionReport {
  bool condition1 = false;
  bool condition2 = false;
  bool condition3 = false;
  double margin1 = 0.0;  // min second difference of f
  double margin2 = 0.0;  // min over range / monotonicity / limit slacks
  double margin3 = 0.0;  // min consecutive weight increase across the pace grid
  std::vector<std::string> notes;

  bool all_passed() const { return condition1 && condition2 && condition3; }
};

ConditionReport check_sp_conditions(const Regularizer& reg, const std::vector<double>& loss_grid,
                                    const std::vector<double>& pace_grid);

}  // namespace spl
