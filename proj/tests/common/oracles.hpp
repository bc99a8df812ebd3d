#pragma once
// Reference computations used only by the tests. Each one is written
// independently of the library code it checks.

#include "prpr/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using prpr::Index;
using prpr::Mat;
using prpr::Vec;

// Root of t³s + t − 1 on [0, 1] by plain bisection.
inline double cubic_root_bisect(double s, double tol = 1e-15) {
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (mid * mid * mid * s + mid - 1.0 > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Condat's direct algorithm for argmin_u ½‖u − y‖² + λ Σ|u[i+1] − u[i]|.
inline Vec tv1d_condat(const Vec& y, double lambda) {
  const int n = static_cast<int>(y.size());
  Vec x(n);
  if (n == 0) return x;
  if (n == 1) {
    x[0] = y[0];
    return x;
  }
  int k = 0, k0 = 0, kplus = 0, kminus = 0;
  double umin = lambda, umax = -lambda;
  double vmin = y[0] - lambda, vmax = y[0] + lambda;
  const double twolambda = 2.0 * lambda, minlambda = -lambda;
  for (;;) {
    while (k == n - 1) {
      if (umin < 0.0) {
        do x[k0++] = vmin; while (k0 <= kminus);
        umax = (vmin = y[kminus = k = k0]) + (umin = lambda) - vmax;
      } else if (umax > 0.0) {
        do x[k0++] = vmax; while (k0 <= kplus);
        umin = (vmax = y[kplus = k = k0]) + (umax = minlambda) - vmin;
      } else {
        vmin += umin / (k - k0 + 1);
        do x[k0++] = vmin; while (k0 <= k);
        return x;
      }
    }
    if ((umin += y[k + 1] - vmin) < minlambda) {
      do x[k0++] = vmin; while (k0 <= kminus);
      vmax = (vmin = y[kplus = kminus = k = k0]) + twolambda;
      umin = lambda;
      umax = minlambda;
    } else if ((umax += y[k + 1] - vmax) > lambda) {
      do x[k0++] = vmax; while (k0 <= kplus);
      vmin = (vmax = y[kplus = kminus = k = k0]) - twolambda;
      umin = lambda;
      umax = minlambda;
    } else {
      k++;
      if (umin >= lambda) {
        vmin += (umin - lambda) / ((kminus = k) - k0 + 1);
        umin = lambda;
      }
      if (umax <= minlambda) {
        vmax += (umax + lambda) / ((kplus = k) - k0 + 1);
        umax = minlambda;
      }
    }
  }
}

// Central differences of f at x with step h.
inline Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  Vec g(x.size());
  Vec xp = x, xm = x;
  for (Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
    xp[i] = xm[i] = x[i];
  }
  return g;
}

// Minimizer of f over the grid {lo + i·step}² (row-major scan, first hit wins).
inline Vec grid_argmin_2d(const std::function<double(double, double)>& f, double lo, double hi,
                          double step) {
  const long count = std::lround((hi - lo) / step) + 1;
  double best = std::numeric_limits<double>::infinity();
  double bu = 0, bv = 0;
  for (long i = 0; i < count; ++i) {
    const double u = lo + static_cast<double>(i) * step;
    for (long j = 0; j < count; ++j) {
      const double v = lo + static_cast<double>(j) * step;
      const double val = f(u, v);
      if (val < best) {
        best = val;
        bu = u;
        bv = v;
      }
    }
  }
  Vec out(2);
  out << bu, bv;
  return out;
}

// min over all row subsets I with |I| ≥ ⌈m/2⌉ of ‖(Az)_I‖, by enumerating
// every subset. Each subset sum is accumulated in ascending order of the
// squares so the result is bit-comparable with any sort-based routine.
inline double half_rows_brute(const Vec& az) {
  const int m = static_cast<int>(az.size());
  const int need = (m + 1) / 2;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> sq;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (__builtin_popcount(mask) < need) continue;
    sq.clear();
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) sq.push_back(az[i] * az[i]);
    std::sort(sq.begin(), sq.end());
    double s = 0.0;
    for (double v : sq) s += v;
    best = std::min(best, std::sqrt(s));
  }
  return best;
}

}  // namespace oracle
