// Test-only oracles, independent of the library code paths they check.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Core>

namespace oracles {

// Self-paced penalty closed forms, written out from scratch so the brute
// force below does not share code with the implementation.
inline double hard_penalty(double pace, double v) { return -pace * v; }
inline double linear_penalty(double pace, double v) { return pace * (0.5 * v * v - v); }
inline double entropic_penalty(double pace, double v) {
  return v == 0.0 ? 0.0 : pace * v * (std::log(v) - 1.0);
}

// argmin over a uniform grid on [0,1] of v*loss + penalty(v).
inline double grid_minimizer(const std::function<double(double)>& penalty, double loss,
                             int points = 100000) {
  double best_v = 0.0;
  double best = penalty(0.0);
  for (int i = 1; i < points; ++i) {
    const double v = static_cast<double>(i) / (points - 1);
    const double value = v * loss + penalty(v);
    if (value < best) {
      best = value;
      best_v = v;
    }
  }
  return best_v;
}

// Adaptive quadrature, written independently of the library implementation:
// an explicit work stack, plain composite Simpson values (no extrapolation
// term), and a halving tolerance budget. Deep splitting around the hard
// kind's jump keeps the accepted-interval error below jump * 2^-depth.
inline double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                                  double tol = 1e-10) {
  if (b <= a) return 0.0;
  struct Segment {
    double a, b, fa, fm, fb, value, tol;
    int depth;
  };
  auto simpson = [](double lo, double hi, double flo, double fmid, double fhi) {
    return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  };
  std::vector<Segment> work;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  work.push_back({a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 60});
  double total = 0.0;
  while (!work.empty()) {
    const Segment s = work.back();
    work.pop_back();
    const double m = 0.5 * (s.a + s.b);
    const double lm = 0.5 * (s.a + m);
    const double rm = 0.5 * (m + s.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(s.a, m, s.fa, flm, s.fm);
    const double right = simpson(m, s.b, s.fm, frm, s.fb);
    if (s.depth <= 0 || std::abs(left + right - s.value) <= 15.0 * s.tol) {
      total += left + right;
    } else {
      work.push_back({s.a, m, s.fa, flm, s.fm, left, 0.5 * s.tol, s.depth - 1});
      work.push_back({m, s.b, s.fm, frm, s.fb, right, 0.5 * s.tol, s.depth - 1});
    }
  }
  return total;
}

// Central finite differences of a scalar function of a vector.
inline Eigen::VectorXd central_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

// Minimizer of a 1-D function by scanning a uniform grid.
inline double grid_argmin_1d(const std::function<double(double)>& f, double lo, double hi,
                             int points = 200001) {
  double best_x = lo;
  double best = f(lo);
  for (int i = 1; i < points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    const double value = f(x);
    if (value < best) {
      best = value;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace oracles
