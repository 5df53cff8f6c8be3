#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "junction_hj/junction.hpp"
#include "junction_hj/lagrangian.hpp"

namespace fixtures {

using junction_hj::Junction;
using junction_hj::Lagrangian;

// L1 = (1+q)^2/4 and L2 = (1-q)^2/4: both idle costs equal, I0 = {1, 2}.
inline Junction t2_sym() {
  return Junction({Lagrangian::quadratic(0.25, -1.0, 0.0),
                   Lagrangian::quadratic(0.25, 1.0, 0.0)});
}

// L1 = (1+q)^2/4 and L2 = (1-q)^2/2: L2(0) = 0.5 > L0, so I0 = {1}.
inline Junction t2_asym() {
  return Junction({Lagrangian::quadratic(0.25, -1.0, 0.0),
                   Lagrangian::quadratic(0.5, 1.0, 0.0)});
}

inline double lref(double q) { return (1.0 + q) * (1.0 + q) / 4.0; }
inline double l2_asym(double q) { return (1.0 - q) * (1.0 - q) / 2.0; }

// Grid minimum of f over [lo, hi] with n+1 nodes. Used as the test-side
// oracle for scalar minimizations.
inline double grid_min(const std::function<double(double)>& f, double lo,
                       double hi, int n) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n; ++k) {
    best = std::min(best, f(lo + (hi - lo) * k / n));
  }
  return best;
}

inline double grid_max(const std::function<double(double)>& f, double lo,
                       double hi, int n) {
  return -grid_min([&](double s) { return -f(s); }, lo, hi, n);
}

}  // namespace fixtures
