#pragma once

#include <span>
#include <vector>

#include "junction_hj/lagrangian.hpp"
#include "junction_hj/point.hpp"

namespace junction_hj {

/// Which monotone half-line of K_l an inverse is taken on.
enum class Side { Minus, Plus };

/// Absolute tolerance on L_i(0) - L0(0) for membership in I0.
inline constexpr double kIdleTolerance = 1e-12;

/// N half-lines glued at the origin, one Lagrangian per branch, with the
/// constants that the minimal-action formulas depend on. Branch ids are
/// 1-based. Immutable after construction.
class Junction {
 public:
  /// Throws ValidationError for an empty list or a Lagrangian failing its
  /// convexity probe.
  explicit Junction(std::vector<Lagrangian> lagrangians);

  int size() const { return static_cast<int>(branches_.size()); }
  const Lagrangian& branch(int l) const;

  /// L0(0) = min_j L_j(0), the cost per unit time of idling at the junction.
  double idle_cost() const { return idle_cost_; }
  bool in_i0(int l) const;
  std::vector<int> i0() const;

  /// Signed roots of K_l: xi_minus <= 0 <= xi_plus, both 0 exactly on I0.
  double xi_minus(int l) const;
  double xi_plus(int l) const;

  double gamma() const { return gamma_; }
  double gamma0() const { return gamma0_; }
  double c0() const { return c0_; }
  /// M = max_i L_i(0).
  double max_idle_cost() const { return max_idle_cost_; }

  /// K_l(xi) = L_l(xi) - xi L_l'(xi) - L0(0).
  double k(int l, double xi) const;
  double k_at_zero(int l) const;

  /// xi on the requested side with K_l(xi) = v. Requires v <= K_l(0) (a
  /// rounding slack of 1e-12 relative is accepted and mapped to xi = 0);
  /// throws DomainError otherwise.
  double k_inverse(int l, double v, Side side) const;

 private:
  void check_branch(int l) const;

  std::vector<Lagrangian> branches_;
  std::vector<double> k_zero_;
  std::vector<double> xi_minus_;
  std::vector<double> xi_plus_;
  double idle_cost_ = 0.0;
  double gamma_ = 0.0;
  double gamma0_ = 0.0;
  double c0_ = 0.0;
  double max_idle_cost_ = 0.0;
};

inline Junction build_junction(std::vector<Lagrangian> lagrangians) {
  return Junction(std::move(lagrangians));
}

/// H at a point of the junction: H_i(p) on the interior of branch i (grad
/// holds one value), max_i H_i^-(p_i) at the junction point (grad holds one
/// value per branch). Throws DomainError on an arity mismatch.
double hamiltonian_at(const Junction& J, const Point& x,
                      std::span<const double> grad);

}  // namespace junction_hj
