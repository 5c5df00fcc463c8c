#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "spl/regularizer.hpp"
#include "oracles.hpp"

using spl::Regularizer;
using spl::RegularizerKind;

TEST_CASE("pace parameter must be positive") {
  CHECK_THROWS_AS(spl::PaceParameter(0.0), std::invalid_argument);
  CHECK_THROWS_AS(spl::PaceParameter(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(Regularizer::entropic(0.0), std::invalid_argument);
  CHECK(spl::PaceParameter(2.5).value() == 2.5);
}

TEST_CASE("penalty closed forms") {
  CHECK(Regularizer::entropic(1.0).penalty(1.0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(Regularizer::hard(2.0).penalty(0.0) == 0.0);
  CHECK(Regularizer::linear(2.0).penalty(0.5) == doctest::Approx(-0.75).epsilon(1e-12));
  // entropic penalty closes the domain at zero
  CHECK(Regularizer::entropic(3.0).penalty(0.0) == 0.0);
}

TEST_CASE("penalty domain and unsupported kinds") {
  const auto reg = Regularizer::linear(1.0);
  CHECK_THROWS_AS(reg.penalty(-0.1), std::domain_error);
  CHECK_THROWS_AS(reg.penalty(1.1), std::domain_error);
  const auto tab = Regularizer::tabulated(1.0, {0.0, 1.0}, {1.0, 0.0});
  CHECK_THROWS_AS(tab.penalty(0.5), std::logic_error);
}

TEST_CASE("weight closed forms and limits") {
  CHECK(Regularizer::entropic(1.0).weight(0.0) == 1.0);
  CHECK(Regularizer::entropic(2.0).weight(2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(Regularizer::linear(1.0).weight(0.25) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(Regularizer::hard(0.5).weight(0.3) == 1.0);
  CHECK(Regularizer::hard(0.5).weight(0.7) == 0.0);
  // tie at loss == pace includes the sample
  CHECK(Regularizer::hard(0.5).weight(0.5) == 1.0);
  CHECK_THROWS_AS(Regularizer::hard(1.0).weight(-0.1), std::domain_error);
}

TEST_CASE("weight matches brute-force minimization of v*loss + penalty") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> pace_dist(0.1, 10.0);
  std::uniform_real_distribution<double> loss_dist(0.0, 10.0);
  const int grid_points = 100000;
  const double tol = 1.0 / (grid_points - 1);
  for (int trial = 0; trial < 100; ++trial) {
    const double pace = pace_dist(rng);
    const double loss = loss_dist(rng);
    {
      const double expect = oracles::grid_minimizer(
          [pace](double v) { return oracles::hard_penalty(pace, v); }, loss, grid_points);
      CHECK(std::abs(Regularizer::hard(pace).weight(loss) - expect) <= tol);
    }
    {
      const double expect = oracles::grid_minimizer(
          [pace](double v) { return oracles::linear_penalty(pace, v); }, loss, grid_points);
      CHECK(std::abs(Regularizer::linear(pace).weight(loss) - expect) <= tol);
    }
    {
      const double expect = oracles::grid_minimizer(
          [pace](double v) { return oracles::entropic_penalty(pace, v); }, loss, grid_points);
      CHECK(std::abs(Regularizer::entropic(pace).weight(loss) - expect) <= tol);
    }
  }
}

TEST_CASE("envelope closed forms") {
  CHECK(Regularizer::hard(1.0).envelope(0.0) == 0.0);
  CHECK(Regularizer::linear(1.0).envelope(0.0) == 0.0);
  CHECK(Regularizer::entropic(1.0).envelope(0.0) == 0.0);
  CHECK(Regularizer::hard(0.5).envelope(2.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(Regularizer::entropic(1.0).envelope(5.0) ==
        doctest::Approx(1.0 - std::exp(-5.0)).epsilon(1e-12));
  CHECK(Regularizer::linear(2.0).envelope(1.0) == doctest::Approx(1.0 - 0.25).epsilon(1e-12));
  CHECK(Regularizer::linear(2.0).envelope(5.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(Regularizer::linear(1.0).envelope(-1.0), std::domain_error);
}

TEST_CASE("envelope agrees with quadrature of the weight map") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> pace_dist(0.1, 10.0);
  std::uniform_real_distribution<double> loss_dist(0.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double pace = pace_dist(rng);
    const double loss = loss_dist(rng);
    for (const auto& reg : {Regularizer::hard(pace), Regularizer::linear(pace),
                            Regularizer::entropic(pace)}) {
      const double quad = oracles::adaptive_quadrature(
          [&reg](double t) { return reg.weight(t); }, 0.0, loss, 1e-10);
      CHECK(std::abs(reg.envelope(loss) - quad) <= 1e-8);
    }
  }
}

TEST_CASE("hard envelope equals quadrature of the step function to 1e-10") {
  const auto reg = Regularizer::hard(0.5);
  const double quad =
      oracles::adaptive_quadrature([&reg](double t) { return reg.weight(t); }, 0.0, 2.0, 1e-12);
  CHECK(std::abs(reg.envelope(2.0) - quad) <= 1e-10);
  CHECK(std::abs(quad - 0.5) <= 1e-10);
}

TEST_CASE("weight bounds and monotonicity on random pairs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pace_dist(0.05, 20.0);
  std::uniform_real_distribution<double> loss_dist(0.0, 30.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double pace_a = pace_dist(rng);
    const double pace_b = pace_dist(rng);
    const double loss_a = loss_dist(rng);
    const double loss_b = loss_dist(rng);
    for (auto make : {&Regularizer::hard, &Regularizer::linear, &Regularizer::entropic}) {
      const auto reg = make(std::min(pace_a, pace_b));
      const double v1 = reg.weight(std::min(loss_a, loss_b));
      const double v2 = reg.weight(std::max(loss_a, loss_b));
      CHECK(v1 >= 0.0);
      CHECK(v1 <= 1.0);
      CHECK(v1 >= v2);  // non-increasing in the loss
      const double v_small_pace = reg.weight(loss_a);
      const double v_large_pace = make(std::max(pace_a, pace_b)).weight(loss_a);
      CHECK(v_small_pace <= v_large_pace);  // non-decreasing in the pace
    }
  }
}

TEST_CASE("fundamental theorem: envelope derivative equals the weight (smooth kinds)") {
  const double h = 1e-5;
  for (const auto& reg : {Regularizer::linear(1.3), Regularizer::entropic(1.7)}) {
    for (int j = 0; j < 50; ++j) {
      const double loss = 0.05 + 0.06 * j;
      if (reg.kind() == RegularizerKind::Linear && std::abs(loss - reg.pace()) < 0.02) continue;
      const double fd = (reg.envelope(loss + h) - reg.envelope(loss - h)) / (2.0 * h);
      CHECK(std::abs(fd - reg.weight(loss)) <= 1e-6);
    }
  }
}

TEST_CASE("envelope is concave") {
  for (const auto& reg : {Regularizer::hard(1.1), Regularizer::linear(0.8),
                          Regularizer::entropic(2.2)}) {
    const double h = 0.01;
    for (int j = 1; j < 400; ++j) {
      const double loss = j * h;
      const double second =
          reg.envelope(loss - h) - 2.0 * reg.envelope(loss) + reg.envelope(loss + h);
      CHECK(second <= 1e-9);
    }
  }
}

TEST_CASE("tabulated regularizer validates its table") {
  CHECK_THROWS_AS(Regularizer::tabulated(1.0, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(Regularizer::tabulated(1.0, {0.0, 0.0}, {1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(Regularizer::tabulated(1.0, {0.0, 1.0}, {0.5, 0.9}), std::invalid_argument);
  CHECK_THROWS_AS(Regularizer::tabulated(1.0, {0.0, 1.0}, {1.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(Regularizer::tabulated(1.0, {0.0, 1.0}, {1.0}), std::invalid_argument);
  // the unchecked variant admits an increasing table but still wants sorted knots
  CHECK_NOTHROW(Regularizer::tabulated_unchecked(1.0, {0.0, 1.0}, {0.2, 0.9}));
  CHECK_THROWS_AS(Regularizer::tabulated_unchecked(1.0, {1.0, 0.0}, {0.2, 0.9}),
                  std::invalid_argument);
}

TEST_CASE("tabulated weight interpolates and clamps") {
  const auto reg = Regularizer::tabulated(1.0, {1.0, 2.0, 4.0}, {1.0, 0.5, 0.0});
  CHECK(reg.weight(0.0) == 1.0);   // clamp left
  CHECK(reg.weight(9.0) == 0.0);   // clamp right
  CHECK(reg.weight(1.5) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(reg.weight(3.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(reg.smooth());
}

TEST_CASE("tabulated envelope matches the exact piecewise-linear integral") {
  const auto reg = Regularizer::tabulated(1.0, {1.0, 2.0, 4.0}, {1.0, 0.5, 0.0});
  // exact: 1 on [0,1]; mean heights on the linear pieces; 0 beyond 4
  const double exact_at_3 = 1.0 + 0.75 * 1.0 + 0.375 * 1.0;
  CHECK(reg.envelope(3.0) == doctest::Approx(exact_at_3).epsilon(1e-10));
  const double exact_at_10 = 1.0 + 0.75 + 0.25 * 2.0;  // nothing accrues past the last knot
  CHECK(reg.envelope(10.0) == doctest::Approx(exact_at_10).epsilon(1e-10));
  CHECK(reg.envelope(0.0) == 0.0);
}

namespace {

std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

}  // namespace

TEST_CASE("condition report: closed-form kinds pass") {
  const auto losses = linear_grid(0.0, 10.0, 101);
  const auto paces = linear_grid(0.1, 10.0, 100);
  for (const auto& reg : {Regularizer::entropic(1.0), Regularizer::linear(1.0)}) {
    const auto report = spl::check_sp_conditions(reg, losses, paces);
    CHECK(report.condition1);
    CHECK(report.condition2);
    CHECK(report.condition3);
    CHECK(report.margin1 >= 0.0);
    CHECK(report.margin2 >= 0.0);
    CHECK(report.margin3 >= 0.0);
  }
  // hard kind: the penalty is linear, second differences vanish
  const auto report = spl::check_sp_conditions(Regularizer::hard(1.0), losses, paces);
  CHECK(report.condition1);
  CHECK(report.margin1 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.condition2);
  CHECK(report.condition3);
  CHECK(!report.notes.empty());  // tie flag
}

TEST_CASE("condition report: increasing table fails condition 2") {
  const auto reg = Regularizer::tabulated_unchecked(1.0, {0.0, 5.0, 10.0}, {0.96, 0.2, 0.99});
  const auto report =
      spl::check_sp_conditions(reg, linear_grid(0.0, 10.0, 21), linear_grid(0.1, 10.0, 5));
  CHECK(report.condition1);  // skipped for tabulated
  CHECK_FALSE(report.condition2);
  CHECK(report.margin2 < 0.0);
  CHECK(report.condition3);  // no pace dependence
}

TEST_CASE("condition report rejects empty or malformed grids") {
  const auto reg = Regularizer::entropic(1.0);
  CHECK_THROWS_AS(spl::check_sp_conditions(reg, {}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(spl::check_sp_conditions(reg, {0.0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(spl::check_sp_conditions(reg, {1.0, 0.5}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(spl::check_sp_conditions(reg, {0.0, 1.0}, {0.0, 1.0}), std::invalid_argument);
}
