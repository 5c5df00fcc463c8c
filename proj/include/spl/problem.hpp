#pragma once

#include <Eigen/Core>

#include "spl/regularizer.hpp"

namespace spl {

enum class LossKind { SquaredError, Logistic };

std::string to_string(LossKind kind);

/// Training data: one feature row per sample plus a target vector.
class Dataset {
 public:
  Dataset(Eigen::MatrixXd features, Eigen::VectorXd targets);

  const Eigen::MatrixXd& features() const { return features_; }
  const Eigen::VectorXd& targets() const { return targets_; }
  Eigen::Index size() const { return features_.rows(); }
  Eigen::Index dim() const { return features_.cols(); }

 private:
  Eigen::MatrixXd features_;
  Eigen::VectorXd targets_;
};

/// Maps {0,1} class labels to {-1,+1}; vectors already in {-1,+1} pass through.
Eigen::VectorXd normalize_binary_labels(const Eigen::VectorXd& targets);

/// A self-paced learning problem: dataset, per-sample loss family, ridge
/// strength mu (model regularizer 0.5*mu*|w|^2), and the self-paced
/// regularizer that weights samples by their current loss.
///
/// Two objectives live here. The explicit one is the joint function of model
/// parameters and sample weights,
///   E(w, v) = 0.5*mu*|w|^2 + sum_i [ v_i * loss_i(w) + penalty(v_i) ],
/// and the implicit one eliminates the weights through the envelope,
///   G(w) = 0.5*mu*|w|^2 + sum_i envelope(loss_i(w)).
/// surrogate() is the first-order upper bound of G used by the
/// majorization-minimization scheme; it touches G at the anchor.
class Problem {
 public:
  Problem(Dataset dataset, LossKind loss_kind, double mu, Regularizer regularizer);

  const Dataset& dataset() const { return dataset_; }
  LossKind loss_kind() const { return loss_kind_; }
  double mu() const { return mu_; }
  const Regularizer& regularizer() const { return regularizer_; }
  Eigen::Index size() const { return dataset_.size(); }
  Eigen::Index dim() const { return dataset_.dim(); }

  /// Problem with the same data/loss/mu but a different regularizer.
  Problem with_regularizer(Regularizer regularizer) const;

  /// Per-sample losses l_i(w); non-negative and finite.
  Eigen::VectorXd losses(const Eigen::VectorXd& params) const;

  /// Row i is the gradient of l_i at the given parameters.
  Eigen::MatrixXd loss_gradients(const Eigen::VectorXd& params) const;

  double explicit_objective(const Eigen::VectorXd& params, const Eigen::VectorXd& weights) const;
  double implicit_objective(const Eigen::VectorXd& params) const;

  /// Gradient of the implicit objective. Requires a smooth regularizer
  /// (continuous weighting rule); throws for the hard kind.
  Eigen::VectorXd implicit_gradient(const Eigen::VectorXd& params) const;

  /// Majorizer U(params | anchor) of the implicit objective.
  double surrogate(const Eigen::VectorXd& params, const Eigen::VectorXd& anchor) const;

  /// The w-subproblem objective 0.5*mu*|w|^2 + sum_i v_i * loss_i(w).
  double weighted_objective(const Eigen::VectorXd& params, const Eigen::VectorXd& weights) const;

  /// Gradient of weighted_objective in the parameters.
  Eigen::VectorXd weighted_gradient(const Eigen::VectorXd& params,
                                    const Eigen::VectorXd& weights) const;

 private:
  void check_params(const Eigen::VectorXd& params) const;
  void check_weights(const Eigen::VectorXd& weights) const;

  Dataset dataset_;
  LossKind loss_kind_;
  double mu_;
  Regularizer regularizer_;
};

}  // namespace spl
