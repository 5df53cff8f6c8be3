#pragma once

// Bracketed scalar root finding shared by the conjugation, K-inverse and
// entry-time solvers. Thin wrapper over Boost.Math TOMS 748.

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "junction_hj/errors.hpp"

namespace junction_hj::detail {

inline constexpr std::uintmax_t kMaxRootIterations = 200;

/// Root of `f` on [lo, hi] given f(lo), f(hi) of opposite signs (or zero).
/// Returns the bracket endpoint with the smaller residual.
template <class F>
double bracketed_root(F&& f, double lo, double hi, double f_lo, double f_hi,
                      const char* what) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw NumericalError(std::string(what) + ": root not bracketed");
  }
  std::uintmax_t iterations = kMaxRootIterations;
  const auto tol = boost::math::tools::eps_tolerance<double>();
  std::pair<double, double> r;
  try {
    r = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol,
                                          iterations);
  } catch (const std::exception& e) {
    throw NumericalError(std::string(what) + ": " + e.what());
  }
  if (iterations >= kMaxRootIterations) {
    throw NumericalError(std::string(what) + ": no convergence after " +
                         std::to_string(kMaxRootIterations) + " iterations");
  }
  if (r.first == r.second) return r.first;
  return std::abs(f(r.first)) <= std::abs(f(r.second)) ? r.first : r.second;
}

/// Root of a monotone `f` on [0, +inf) (direction = +1) or (-inf, 0]
/// (direction = -1), where f(0) and f(far) have opposite signs. The bracket
/// is grown geometrically from 0.
template <class F>
double root_from_origin(F&& f, double direction, const char* what) {
  const double f0 = f(0.0);
  if (f0 == 0.0) return 0.0;
  double inner = 0.0;
  double f_inner = f0;
  double step = 1.0;
  for (int k = 0; k < 1100; ++k) {
    const double outer = direction * step;
    const double f_outer = f(outer);
    if (!std::isfinite(f_outer)) break;
    if ((f_outer > 0.0) != (f0 > 0.0) || f_outer == 0.0) {
      if (direction > 0) {
        return bracketed_root(f, inner, outer, f_inner, f_outer, what);
      }
      return bracketed_root(f, outer, inner, f_outer, f_inner, what);
    }
    inner = outer;
    f_inner = f_outer;
    step *= 2.0;
  }
  throw NumericalError(std::string(what) +
                       ": could not bracket root (declared convexity violated?)");
}

}  // namespace junction_hj::detail
