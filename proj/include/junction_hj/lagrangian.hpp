#pragma once

#include <functional>
#include <optional>

namespace junction_hj {

/// Coefficients of L(q) = a (q - b)^2 + c.
struct QuadraticCoefficients {
  double a;
  double b;
  double c;
};

/// Running cost of one branch: a C^2 function of the velocity q with
/// L'' >= gamma > 0.
///
/// Two representations are supported. The quadratic family has closed forms
/// for everything downstream (conjugate, K, K^-1). A generic Lagrangian is
/// given by callables for L and L' plus a declared lower bound on L''; the
/// second derivative falls back to central differences of L' when no
/// callable is supplied.
class Lagrangian {
 public:
  using Function = std::function<double(double)>;

  /// a (q - b)^2 + c with gamma = 2a.
  static Lagrangian quadratic(double a, double b, double c);
  /// Same with a declared gamma, which must satisfy 0 < gamma <= 2a.
  static Lagrangian quadratic(double a, double b, double c, double gamma);

  static Lagrangian from_functions(Function value, Function slope,
                                   double gamma, Function curvature = {});

  double operator()(double q) const;
  double slope(double q) const;
  double curvature(double q) const;
  double gamma() const { return gamma_; }

  const std::optional<QuadraticCoefficients>& coefficients() const {
    return quadratic_;
  }

 private:
  Lagrangian() = default;

  std::optional<QuadraticCoefficients> quadratic_;
  Function value_;
  Function slope_;
  Function curvature_;
  double gamma_ = 0.0;
};

/// Throws ValidationError when the probe grid q in [-10, 10] shows
/// L'' < gamma or L' failing to grow at rate gamma.
void check_convexity(const Lagrangian& L);

struct ConjugatePoint {
  double q_star;  ///< unique solution of L'(q) = p
  double value;   ///< H(p) = p q* - L(q*)
};

/// Legendre-Fenchel conjugate H(p) = sup_q (p q - L(q)). Closed form for the
/// quadratic family, bracketed root find on L'(q) = p otherwise.
ConjugatePoint conjugate(const Lagrangian& L, double p);

inline double hamiltonian(const Lagrangian& L, double p) {
  return conjugate(L, p).value;
}

/// Nonincreasing envelope sup_{q <= 0} (p q - L(q)).
double h_minus(const Lagrangian& L, double p);

}  // namespace junction_hj
