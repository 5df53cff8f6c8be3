#include "junction_hj/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "junction_hj/errors.hpp"
#include "roots.hpp"

namespace junction_hj {

Lagrangian Lagrangian::quadratic(double a, double b, double c) {
  return quadratic(a, b, c, 2.0 * a);
}

Lagrangian Lagrangian::quadratic(double a, double b, double c, double gamma) {
  if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c))) {
    throw ValidationError("quadratic Lagrangian coefficients must be finite");
  }
  if (!(a > 0.0)) {
    throw ValidationError("quadratic Lagrangian needs a > 0");
  }
  if (!(gamma > 0.0) || gamma > 2.0 * a * (1.0 + 1e-12)) {
    throw ValidationError("quadratic Lagrangian needs 0 < gamma <= 2a");
  }
  Lagrangian L;
  L.quadratic_ = QuadraticCoefficients{a, b, c};
  L.gamma_ = gamma;
  return L;
}

Lagrangian Lagrangian::from_functions(Function value, Function slope,
                                      double gamma, Function curvature) {
  if (!value || !slope) {
    throw ValidationError("generic Lagrangian needs value and slope callables");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ValidationError("generic Lagrangian needs a finite gamma > 0");
  }
  Lagrangian L;
  L.value_ = std::move(value);
  L.slope_ = std::move(slope);
  L.curvature_ = std::move(curvature);
  L.gamma_ = gamma;
  return L;
}

double Lagrangian::operator()(double q) const {
  if (quadratic_) {
    const double d = q - quadratic_->b;
    return quadratic_->a * d * d + quadratic_->c;
  }
  return value_(q);
}

double Lagrangian::slope(double q) const {
  if (quadratic_) return 2.0 * quadratic_->a * (q - quadratic_->b);
  return slope_(q);
}

double Lagrangian::curvature(double q) const {
  if (quadratic_) return 2.0 * quadratic_->a;
  if (curvature_) return curvature_(q);
  const double h = 1e-5 * std::max(1.0, std::abs(q));
  return (slope_(q + h) - slope_(q - h)) / (2.0 * h);
}

void check_convexity(const Lagrangian& L) {
  const double gamma = L.gamma();
  if (L.coefficients()) {
    if (2.0 * L.coefficients()->a < gamma * (1.0 - 1e-12)) {
      throw ValidationError("Lagrangian convexity: 2a < declared gamma");
    }
    return;
  }
  constexpr double h = 1e-3;
  for (double q = -10.0; q <= 10.0 + 1e-12; q += 0.25) {
    const double mid = L(q);
    const double second = (L(q + h) - 2.0 * mid + L(q - h)) / (h * h);
    // Rounding in the second difference is about 4 eps |L| / h^2.
    const double slack = 1e-6 * gamma + 1e-9 * (1.0 + std::abs(mid));
    if (!std::isfinite(second) || second < gamma - slack) {
      std::ostringstream os;
      os << "Lagrangian convexity: L''(" << q << ") ~ " << second
         << " < gamma = " << gamma;
      throw ValidationError(os.str());
    }
    const double s0 = L.slope(q);
    const double s1 = L.slope(q + 0.25);
    if (s1 - s0 < gamma * 0.25 * (1.0 - 1e-6) - 1e-12 * (1.0 + std::abs(s0))) {
      std::ostringstream os;
      os << "Lagrangian convexity: L' grows slower than gamma near q = " << q;
      throw ValidationError(os.str());
    }
  }
}

ConjugatePoint conjugate(const Lagrangian& L, double p) {
  if (const auto& k = L.coefficients()) {
    const double q = k->b + p / (2.0 * k->a);
    return {q, p * k->b + p * p / (4.0 * k->a) - k->c};
  }
  const double q = detail::root_from_origin(
      [&](double v) { return L.slope(v) - p; },
      L.slope(0.0) < p ? 1.0 : -1.0, "conjugate");
  return {q, p * q - L(q)};
}

double h_minus(const Lagrangian& L, double p) {
  if (p <= L.slope(0.0)) return conjugate(L, p).value;
  return -L(0.0);
}

}  // namespace junction_hj
