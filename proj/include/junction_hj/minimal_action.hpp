#pragma once

#include <optional>
#include <string>

#include "junction_hj/junction.hpp"
#include "junction_hj/point.hpp"

namespace junction_hj {

/// How an optimal trajectory of the reduced problem behaves.
///   Straight: stays in one branch, constant velocity.
///   Linear: reaches the junction, idles there for tau2 - tau1 > 0, leaves.
///   Implicit: touches the junction at a single instant tau1 = tau2.
///   StayAtJunction: starts and ends at the junction point.
enum class Regime { Straight, Linear, Implicit, StayAtJunction };

std::string to_string(Regime r);

/// Value of D0 (or of D after rescaling) plus the optimal trajectory's
/// shape. tau1/tau2 are NaN for Straight.
struct ActionResult {
  double value = 0.0;
  Regime regime = Regime::Straight;
  double tau1 = 0.0;
  double tau2 = 0.0;
  int entry_branch = kJunction;
  int exit_branch = kJunction;
};

/// (d/dy, d/dx) of D0 with y, x the coordinates along the entry and exit
/// branches.
struct Gradient {
  double d_y = 0.0;
  double d_x = 0.0;
};

struct GradientResult {
  double d_y = 0.0;
  double d_x = 0.0;
  bool smooth = true;
  /// Gradient of the competing arm where D0 has a kink.
  std::optional<Gradient> alternate;
};

/// Non-smooth set detection tolerance (value tie and distance to the kink
/// endpoints).
inline constexpr double kKinkTolerance = 1e-10;

enum class Phase { Entry, Exit };

// ---- Point-level operations (junction endpoints resolved over pairings) ----

/// L_i(x - y) on a common branch, L0(0) at (junction, junction), +inf across
/// branches.
double d_straight(const Junction& J, const Point& y, const Point& x);

/// Entry: E1(tau, y) = tau L_j(-y/tau) - tau L0(0), 0 for y at the junction,
/// +inf for tau = 0 and y away from it. Exit: E2(tau, x) = (1-tau)
/// L_i(x/(1-tau)) + tau L0(0), L0(0) for x at the junction, +inf for tau = 1
/// and x away from it.
double phase_cost(const Junction& J, Phase kind, double tau, const Point& p);

/// The single-visit time T(y, x) of the entry/exit pairing (j, i). Throws
/// UndefinedTauError at (0, 0) when neither branch is in I0.
double solve_tau(const Junction& J, int j, double y, int i, double x);

/// inf over tau of E1(tau, y) + E2(tau, x), minimized over pairings when an
/// endpoint is the junction point.
double d_implicit(const Junction& J, const Point& y, const Point& x);

/// -L_j'(xi_j^-) y + L_i'(xi_i^+) x + L0(0) on the idling triangle, empty
/// outside it or when i or j is in I0.
std::optional<double> d_linear(const Junction& J, int j, double y, int i,
                               double x);

/// Cheapest trajectory through the junction point.
ActionResult d_junction(const Junction& J, const Point& y, const Point& x);

/// Reduced minimal action over the unit time horizon.
ActionResult d0(const Junction& J, const Point& y, const Point& x);

GradientResult d0_gradient(const Junction& J, const Point& y, const Point& x);

/// Minimal action from y at time s to x at time t via the scaling law
/// (t - s) D0(y / (t - s), x / (t - s)). Taus are reported as absolute times.
/// At s = t: 0 if y = x, +inf otherwise. Throws DomainError for s > t.
ActionResult action(const Junction& J, double s, const Point& y, double t,
                    const Point& x);

// ---- Pairing-level operations: y on branch j, x on branch i ----

bool in_idle_triangle(const Junction& J, int j, double y, int i, double x);

/// D_junction^{ji}.
ActionResult junction_action(const Junction& J, int j, double y, int i,
                             double x);

/// D0^{ji}: min(D_junction, D_straight) for i = j, ties toward Straight.
ActionResult reduced_action(const Junction& J, int j, double y, int i,
                            double x);

Gradient junction_gradient(const Junction& J, int j, double y, int i,
                           double x);

GradientResult reduced_gradient(const Junction& J, int j, double y, int i,
                                double x);

}  // namespace junction_hj
