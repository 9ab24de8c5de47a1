#pragma once

// Test-side numeric oracles, independent of the library's evaluation paths:
// adaptive Simpson quadrature and central finite differences.

#include "foamlab/common.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

using Fn1 = std::function<double(double)>;
using FnN = std::function<double(const std::vector<double>&)>;

inline double simpson(const Fn1& f, double a, double b) {
  double m = (a + b) / 2;
  return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
}

inline double adaptive_simpson_rec(const Fn1& f, double a, double b, double whole, double tol,
                                   int depth) {
  double m = (a + b) / 2;
  double left = simpson(f, a, m), right = simpson(f, m, b);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, left, tol / 2, depth - 1) +
         adaptive_simpson_rec(f, m, b, right, tol / 2, depth - 1);
}

inline double adaptive_simpson(const Fn1& f, double a, double b, double tol = 1e-13) {
  return adaptive_simpson_rec(f, a, b, simpson(f, a, b), tol, 40);
}

/// Central finite differences for an arbitrary multi-index, one axis at a time.
inline double central_diff(const FnN& f, std::vector<double> x, std::vector<int> p, double h) {
  for (std::size_t ax = 0; ax < p.size(); ++ax) {
    if (p[ax] > 0) {
      std::vector<int> q = p;
      q[ax] -= 1;
      std::vector<double> xp = x, xm = x;
      xp[ax] += h;
      xm[ax] -= h;
      return (central_diff(f, xp, q, h) - central_diff(f, xm, q, h)) / (2.0 * h);
    }
  }
  return f(x);
}

inline double central_diff(const FnN& f, const std::vector<double>& x,
                           const foamlab::MultiIndex& p, double h) {
  return central_diff(f, x, p.p, h);
}

/// Richardson-extrapolated central differences, O(h^4) truncation.
inline double central_diff_rich(const FnN& f, const std::vector<double>& x,
                                const foamlab::MultiIndex& p, double h) {
  double coarse = central_diff(f, x, p.p, h);
  double fine = central_diff(f, x, p.p, h / 2);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace oracles
