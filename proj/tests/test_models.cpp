#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "spl/problem.hpp"
#include "oracles.hpp"

using spl::Dataset;
using spl::LossKind;
using spl::Problem;
using spl::Regularizer;

namespace {

Eigen::MatrixXd mat1(double x) {
  Eigen::MatrixXd m(1, 1);
  m(0, 0) = x;
  return m;
}

Eigen::VectorXd vec1(double y) {
  Eigen::VectorXd v(1);
  v[0] = y;
  return v;
}

Problem one_sample(double x, double y, LossKind loss, double mu, Regularizer reg) {
  return {Dataset(mat1(x), vec1(y)), loss, mu, std::move(reg)};
}

Problem random_problem(std::mt19937_64& rng, int n, int d, LossKind loss, Regularizer reg,
                       double mu) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd x(n, d);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = normal(rng);
    y[i] = loss == LossKind::Logistic ? (normal(rng) > 0.0 ? 1.0 : -1.0) : normal(rng);
  }
  return {Dataset(std::move(x), std::move(y)), loss, mu, std::move(reg)};
}

}  // namespace

TEST_CASE("dataset invariants") {
  CHECK_THROWS_AS(Dataset(Eigen::MatrixXd(0, 1), Eigen::VectorXd(0)), std::invalid_argument);
  CHECK_THROWS_AS(Dataset(mat1(1.0), Eigen::VectorXd(2)), std::invalid_argument);
  Eigen::MatrixXd bad = mat1(std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(Dataset(bad, vec1(1.0)), std::invalid_argument);
}

TEST_CASE("label normalization") {
  Eigen::VectorXd y(3);
  y << 0.0, 1.0, -1.0;
  const Eigen::VectorXd out = spl::normalize_binary_labels(y);
  CHECK(out[0] == -1.0);
  CHECK(out[1] == 1.0);
  CHECK(out[2] == -1.0);
  y[1] = 0.5;
  CHECK_THROWS_AS(spl::normalize_binary_labels(y), std::invalid_argument);
}

TEST_CASE("logistic problems require signed labels") {
  CHECK_THROWS_AS(one_sample(1.0, 0.0, LossKind::Logistic, 1.0, Regularizer::entropic(1.0)),
                  std::invalid_argument);
  CHECK_NOTHROW(one_sample(1.0, 1.0, LossKind::Logistic, 1.0, Regularizer::entropic(1.0)));
}

TEST_CASE("losses: spot values") {
  const auto reg = Regularizer::entropic(1.0);
  CHECK(one_sample(1.0, 1.0, LossKind::SquaredError, 0.0, reg).losses(vec1(1.0))[0] == 0.0);
  CHECK(one_sample(1.0, 1.0, LossKind::SquaredError, 0.0, reg).losses(vec1(0.0))[0] ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(one_sample(1.0, 1.0, LossKind::Logistic, 0.0, reg).losses(vec1(0.0))[0] ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("losses: dimension mismatch") {
  const auto problem = one_sample(1.0, 1.0, LossKind::SquaredError, 0.0, Regularizer::entropic(1.0));
  CHECK_THROWS_AS(problem.losses(Eigen::VectorXd::Zero(2)), std::invalid_argument);
}

TEST_CASE("loss gradients: spot values and finite differences") {
  const auto reg = Regularizer::entropic(1.0);
  CHECK(one_sample(1.0, 1.0, LossKind::SquaredError, 0.0, reg).loss_gradients(vec1(0.0))(0, 0) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(one_sample(2.0, 0.0, LossKind::SquaredError, 0.0, reg).loss_gradients(vec1(1.0))(0, 0) ==
        doctest::Approx(4.0).epsilon(1e-12));

  const auto logistic = one_sample(1.0, 1.0, LossKind::Logistic, 0.0, reg);
  const Eigen::VectorXd fd = oracles::central_gradient(
      [&logistic](const Eigen::VectorXd& w) { return logistic.losses(w)[0]; }, vec1(0.0));
  CHECK(logistic.loss_gradients(vec1(0.0))(0, 0) == doctest::Approx(fd[0]).epsilon(1e-7));
  CHECK(logistic.loss_gradients(vec1(0.0))(0, 0) == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("loss gradients match finite differences on random instances") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const LossKind loss = trial % 2 == 0 ? LossKind::SquaredError : LossKind::Logistic;
    auto problem = random_problem(rng, 6, 3, loss, Regularizer::entropic(1.0), 0.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd w(3);
    for (int j = 0; j < 3; ++j) w[j] = normal(rng);
    const Eigen::MatrixXd grads = problem.loss_gradients(w);
    for (int i = 0; i < 6; ++i) {
      const Eigen::VectorXd fd = oracles::central_gradient(
          [&problem, i](const Eigen::VectorXd& p) { return problem.losses(p)[i]; }, w);
      CHECK((grads.row(i).transpose() - fd).norm() <= 1e-5 * std::max(1.0, fd.norm()));
    }
  }
}

TEST_CASE("explicit objective: spot values") {
  // entropic, exact fit, full weight: only the penalty survives
  const auto entropic = one_sample(1.0, 1.0, LossKind::SquaredError, 0.0, Regularizer::entropic(1.0));
  CHECK(entropic.explicit_objective(vec1(1.0), vec1(1.0)) == doctest::Approx(-1.0).epsilon(1e-12));
  // hard kind with zero weight: everything vanishes
  const auto hard = one_sample(1.0, 0.0, LossKind::SquaredError, 0.0, Regularizer::hard(1.0));
  CHECK(hard.explicit_objective(vec1(1.0), vec1(0.0)) == 0.0);
  // linear kind, mu=2, |w|^2=1, zero loss, full weight: 1 + 0 + 2*(0.5-1) = 0
  const auto linear = one_sample(1.0, 1.0, LossKind::SquaredError, 2.0, Regularizer::linear(2.0));
  CHECK(linear.explicit_objective(vec1(1.0), vec1(1.0)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("explicit objective validates weights") {
  const auto problem = one_sample(1.0, 1.0, LossKind::SquaredError, 0.0, Regularizer::entropic(1.0));
  CHECK_THROWS_AS(problem.explicit_objective(vec1(0.0), vec1(1.5)), std::invalid_argument);
  CHECK_THROWS_AS(problem.explicit_objective(vec1(0.0), Eigen::VectorXd::Ones(2)),
                  std::invalid_argument);
}

TEST_CASE("implicit objective: spot values") {
  const auto zero_loss = one_sample(1.0, 1.0, LossKind::SquaredError, 0.0, Regularizer::entropic(1.0));
  CHECK(zero_loss.implicit_objective(vec1(1.0)) == 0.0);
  // hard kind: envelope is min(loss, pace)
  const auto hard = one_sample(1.0, 2.0, LossKind::SquaredError, 0.0, Regularizer::hard(0.5));
  CHECK(hard.implicit_objective(vec1(0.0)) == doctest::Approx(0.5).epsilon(1e-12));
  // entropic with mu=2, |w|^2=1, loss 5 at w=1: 1 + (1 - e^-5)
  const auto entropic = one_sample(1.0, 1.0 + std::sqrt(10.0), LossKind::SquaredError, 2.0,
                                   Regularizer::entropic(1.0));
  CHECK(entropic.implicit_objective(vec1(1.0)) ==
        doctest::Approx(1.0 + (1.0 - std::exp(-5.0))).epsilon(1e-12));
}

TEST_CASE("implicit gradient: spot values and smoothness requirement") {
  const auto flat = one_sample(1.0, 1.0, LossKind::SquaredError, 0.0, Regularizer::entropic(1.0));
  CHECK(flat.implicit_gradient(vec1(1.0))[0] == 0.0);  // zero loss gradient at the exact fit

  const auto entropic = one_sample(1.0, 1.0, LossKind::SquaredError, 0.0, Regularizer::entropic(1.0));
  CHECK(entropic.implicit_gradient(vec1(0.0))[0] ==
        doctest::Approx(-std::exp(-0.5)).epsilon(1e-12));

  const auto hard = one_sample(1.0, 1.0, LossKind::SquaredError, 0.0, Regularizer::hard(1.0));
  CHECK_THROWS_AS(hard.implicit_gradient(vec1(0.0)), std::logic_error);
}

TEST_CASE("implicit gradient matches finite differences of the implicit objective") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const LossKind loss = trial % 2 == 0 ? LossKind::SquaredError : LossKind::Logistic;
    const auto reg = trial % 3 == 0 ? Regularizer::linear(1.5) : Regularizer::entropic(0.8);
    auto problem = random_problem(rng, 8, 3, loss, reg, 2.0);
    Eigen::VectorXd w(3);
    for (int j = 0; j < 3; ++j) w[j] = normal(rng);
    const Eigen::VectorXd fd = oracles::central_gradient(
        [&problem](const Eigen::VectorXd& p) { return problem.implicit_objective(p); }, w);
    const Eigen::VectorXd g = problem.implicit_gradient(w);
    CHECK((g - fd).norm() <= 1e-5 * std::max(1.0, fd.norm()));
  }
}

TEST_CASE("surrogate touches the implicit objective at the anchor") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto problem = random_problem(rng, 10, 4, LossKind::SquaredError, Regularizer::entropic(1.0), 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd w(4);
    for (int j = 0; j < 4; ++j) w[j] = normal(rng);
    CHECK(std::abs(problem.surrogate(w, w) - problem.implicit_objective(w)) <= 1e-9);
  }
}

TEST_CASE("surrogate gap: hard kind worked example") {
  // anchor loss 0.2 (weight 1), probe loss 0.9, pace 0.5:
  // U = envelope(0.2) + 1*(0.9-0.2) = 0.9, G = min(0.9, 0.5) = 0.5, gap 0.4
  const auto problem = one_sample(1.0, 0.0, LossKind::SquaredError, 0.0, Regularizer::hard(0.5));
  const Eigen::VectorXd anchor = vec1(-std::sqrt(0.4));   // loss 0.2
  const Eigen::VectorXd probe = vec1(-std::sqrt(1.8));    // loss 0.9
  const double u = problem.surrogate(probe, anchor);
  const double g = problem.implicit_objective(probe);
  CHECK(u - g == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(u >= g);
}

TEST_CASE("surrogate majorizes the implicit objective on random pairs") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  auto problem = random_problem(rng, 12, 5, LossKind::SquaredError, Regularizer::entropic(1.3), 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd w(5), anchor(5);
    for (int j = 0; j < 5; ++j) {
      w[j] = box(rng);
      anchor[j] = box(rng);
    }
    CHECK(problem.surrogate(w, anchor) - problem.implicit_objective(w) >= -1e-9);
  }
}

TEST_CASE("tangent gradient identity: the surrogate gradient at the anchor equals grad G") {
  std::mt19937_64 rng(67);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const auto& reg : {Regularizer::entropic(1.1), Regularizer::linear(2.0)}) {
    auto problem = random_problem(rng, 9, 4, LossKind::SquaredError, reg, 1.5);
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXd w(4);
      for (int j = 0; j < 4; ++j) w[j] = normal(rng);
      // assemble grad_w U(w|anchor)|anchor=w from the public pieces
      const Eigen::VectorXd l = problem.losses(w);
      const Eigen::MatrixXd grads = problem.loss_gradients(w);
      Eigen::VectorXd u_grad = problem.mu() * w;
      for (Eigen::Index i = 0; i < l.size(); ++i) {
        u_grad += problem.regularizer().weight(l[i]) * grads.row(i).transpose();
      }
      CHECK((u_grad - problem.implicit_gradient(w)).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("coercivity proxy: the implicit objective grows along rays when mu > 0") {
  std::mt19937_64 rng(71);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const auto& reg : {Regularizer::hard(1.0), Regularizer::linear(1.0),
                          Regularizer::entropic(1.0)}) {
    auto problem = random_problem(rng, 10, 3, LossKind::SquaredError, reg, 0.5);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd u(3);
      for (int j = 0; j < 3; ++j) u[j] = normal(rng);
      u.normalize();
      double prev = problem.implicit_objective(20.0 * u);
      for (double t = 40.0; t <= 320.0; t *= 2.0) {
        const double value = problem.implicit_objective(t * u);
        CHECK(value > prev);
        prev = value;
      }
    }
  }
}
