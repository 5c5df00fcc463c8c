#include "spl/problem.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace spl {

std::string to_string(LossKind kind) {
  return kind == LossKind::SquaredError ? "squared" : "logistic";
}

Dataset::Dataset(Eigen::MatrixXd features, Eigen::VectorXd targets)
    : features_(std::move(features)), targets_(std::move(targets)) {
  if (features_.rows() < 1 || features_.cols() < 1) {
    throw std::invalid_argument("dataset needs at least one sample and one feature");
  }
  if (targets_.size() != features_.rows()) {
    throw std::invalid_argument("targets length must match the number of samples");
  }
  if (!features_.allFinite() || !targets_.allFinite()) {
    throw std::invalid_argument("dataset entries must be finite");
  }
}

Eigen::VectorXd normalize_binary_labels(const Eigen::VectorXd& targets) {
  Eigen::VectorXd out = targets;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out[i] == 0.0) {
      out[i] = -1.0;
    } else if (out[i] != 1.0 && out[i] != -1.0) {
      throw std::invalid_argument("binary labels must be in {0,1} or {-1,+1}");
    }
  }
  return out;
}

namespace {

// log(1 + exp(z)) without overflow.
double log1pexp(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// 1 / (1 + exp(z)) without overflow.
double inv1pexp(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

}  // namespace

Problem::Problem(Dataset dataset, LossKind loss_kind, double mu, Regularizer regularizer)
    : dataset_(std::move(dataset)),
      loss_kind_(loss_kind),
      mu_(mu),
      regularizer_(std::move(regularizer)) {
  if (!std::isfinite(mu) || mu < 0.0) {
    throw std::invalid_argument("mu must be non-negative and finite");
  }
  if (loss_kind_ == LossKind::Logistic) {
    const auto& y = dataset_.targets();
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y[i] != 1.0 && y[i] != -1.0) {
        throw std::invalid_argument(
            "logistic targets must be -1/+1 (see normalize_binary_labels)");
      }
    }
  }
}

Problem Problem::with_regularizer(Regularizer regularizer) const {
  return {dataset_, loss_kind_, mu_, std::move(regularizer)};
}

void Problem::check_params(const Eigen::VectorXd& params) const {
  if (params.size() != dataset_.dim()) {
    throw std::invalid_argument("parameter dimension does not match the dataset");
  }
  if (!params.allFinite()) {
    throw std::invalid_argument("parameters must be finite");
  }
}

void Problem::check_weights(const Eigen::VectorXd& weights) const {
  if (weights.size() != dataset_.size()) {
    throw std::invalid_argument("weights length does not match the number of samples");
  }
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0 && weights[i] <= 1.0)) {
      throw std::invalid_argument("sample weights must lie in [0,1]");
    }
  }
}

Eigen::VectorXd Problem::losses(const Eigen::VectorXd& params) const {
  check_params(params);
  const Eigen::VectorXd margins = dataset_.features() * params;
  const auto& y = dataset_.targets();
  Eigen::VectorXd out(dataset_.size());
  if (loss_kind_ == LossKind::SquaredError) {
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      const double r = y[i] - margins[i];
      out[i] = 0.5 * r * r;
    }
  } else {
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      out[i] = log1pexp(-y[i] * margins[i]);
    }
  }
  if (!out.allFinite()) {
    throw std::runtime_error("loss evaluation produced a non-finite value");
  }
  return out;
}

Eigen::MatrixXd Problem::loss_gradients(const Eigen::VectorXd& params) const {
  check_params(params);
  const Eigen::VectorXd margins = dataset_.features() * params;
  const auto& y = dataset_.targets();
  Eigen::VectorXd coeff(dataset_.size());
  if (loss_kind_ == LossKind::SquaredError) {
    coeff = margins - y;  // -(y - x^T w)
  } else {
    for (Eigen::Index i = 0; i < coeff.size(); ++i) {
      coeff[i] = -y[i] * inv1pexp(y[i] * margins[i]);
    }
  }
  return coeff.asDiagonal() * dataset_.features();
}

double Problem::explicit_objective(const Eigen::VectorXd& params,
                                   const Eigen::VectorXd& weights) const {
  check_weights(weights);
  const Eigen::VectorXd l = losses(params);
  double total = 0.5 * mu_ * params.squaredNorm();
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    total += weights[i] * l[i] + regularizer_.penalty(weights[i]);
  }
  return total;
}

double Problem::implicit_objective(const Eigen::VectorXd& params) const {
  const Eigen::VectorXd l = losses(params);
  double total = 0.5 * mu_ * params.squaredNorm();
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    total += regularizer_.envelope(l[i]);
  }
  return total;
}

Eigen::VectorXd Problem::implicit_gradient(const Eigen::VectorXd& params) const {
  if (!regularizer_.smooth()) {
    throw std::logic_error(
        "implicit gradient needs a continuous weighting rule; the hard kind is not smooth");
  }
  const Eigen::VectorXd l = losses(params);
  const Eigen::VectorXd margins = dataset_.features() * params;
  const auto& y = dataset_.targets();
  Eigen::VectorXd coeff(dataset_.size());
  if (loss_kind_ == LossKind::SquaredError) {
    coeff = margins - y;
  } else {
    for (Eigen::Index i = 0; i < coeff.size(); ++i) {
      coeff[i] = -y[i] * inv1pexp(y[i] * margins[i]);
    }
  }
  for (Eigen::Index i = 0; i < coeff.size(); ++i) {
    coeff[i] *= regularizer_.weight(l[i]);
  }
  return mu_ * params + dataset_.features().transpose() * coeff;
}

double Problem::surrogate(const Eigen::VectorXd& params, const Eigen::VectorXd& anchor) const {
  const Eigen::VectorXd l_anchor = losses(anchor);
  const Eigen::VectorXd l = losses(params);
  double total = 0.5 * mu_ * params.squaredNorm();
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    total += regularizer_.envelope(l_anchor[i]) +
             regularizer_.weight(l_anchor[i]) * (l[i] - l_anchor[i]);
  }
  return total;
}

double Problem::weighted_objective(const Eigen::VectorXd& params,
                                   const Eigen::VectorXd& weights) const {
  check_weights(weights);
  const Eigen::VectorXd l = losses(params);
  return 0.5 * mu_ * params.squaredNorm() + weights.dot(l);
}

Eigen::VectorXd Problem::weighted_gradient(const Eigen::VectorXd& params,
                                           const Eigen::VectorXd& weights) const {
  check_weights(weights);
  check_params(params);
  const Eigen::VectorXd margins = dataset_.features() * params;
  const auto& y = dataset_.targets();
  Eigen::VectorXd coeff(dataset_.size());
  if (loss_kind_ == LossKind::SquaredError) {
    coeff = margins - y;
  } else {
    for (Eigen::Index i = 0; i < coeff.size(); ++i) {
      coeff[i] = -y[i] * inv1pexp(y[i] * margins[i]);
    }
  }
  coeff.array() *= weights.array();
  return mu_ * params + dataset_.features().transpose() * coeff;
}

}  // namespace spl
