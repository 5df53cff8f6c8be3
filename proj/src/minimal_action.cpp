#include "junction_hj/minimal_action.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "junction_hj/errors.hpp"
#include "roots.hpp"

namespace junction_hj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// T and 1 - T, each computed without cancellation.
struct TauSplit {
  double tau;
  double rest;
};

TauSplit interior_tau(const Junction& J, int j, double y, int i, double x) {
  // F(tau) = K_j(-y/tau) - K_i(x/(1-tau)) increases from -inf to +inf.
  auto F = [&](double tau) { return J.k(j, -y / tau) - J.k(i, x / (1.0 - tau)); };
  const double f_mid = F(0.5);
  if (f_mid == 0.0) return {0.5, 0.5};
  if (f_mid > 0.0) {
    double hi = 0.5, f_hi = f_mid;
    double lo = 0.25, f_lo = F(lo);
    while (f_lo > 0.0) {
      hi = lo;
      f_hi = f_lo;
      lo *= 0.5;
      if (lo < std::numeric_limits<double>::min()) {
        throw NumericalError("solve_tau: entry time underflows");
      }
      f_lo = F(lo);
    }
    const double tau = detail::bracketed_root(F, lo, hi, f_lo, f_hi, "solve_tau");
    return {tau, 1.0 - tau};
  }
  // Root in (1/2, 1): parametrize by the remaining time s = 1 - tau.
  auto G = [&](double s) { return J.k(j, -y / (1.0 - s)) - J.k(i, x / s); };
  double hi = 0.5, g_hi = f_mid;
  double lo = 0.25, g_lo = G(lo);
  while (g_lo < 0.0) {
    hi = lo;
    g_hi = g_lo;
    lo *= 0.5;
    if (lo < std::numeric_limits<double>::min()) {
      throw NumericalError("solve_tau: exit time underflows");
    }
    g_lo = G(lo);
  }
  const double s = detail::bracketed_root(G, lo, hi, g_lo, g_hi, "solve_tau");
  return {1.0 - s, s};
}

TauSplit tau_split(const Junction& J, int j, double y, int i, double x) {
  if (y == 0.0 && x == 0.0) {
    if (!J.in_i0(i) && !J.in_i0(j)) {
      throw UndefinedTauError(
          "solve_tau: T is undefined at (0, 0) when neither branch idles "
          "at the minimal cost");
    }
    if (J.in_i0(j) && !J.in_i0(i)) return {1.0, 0.0};
    return {0.0, 1.0};
  }
  if (y == 0.0) {
    if (J.in_i0(i)) return {0.0, 1.0};
    const double r = x / J.xi_plus(i);
    if (r >= 1.0) return {0.0, 1.0};
    return {1.0 - r, r};
  }
  if (x == 0.0) {
    if (J.in_i0(j)) return {1.0, 0.0};
    const double r = -y / J.xi_minus(j);
    if (r >= 1.0) return {1.0, 0.0};
    return {r, 1.0 - r};
  }
  return interior_tau(J, j, y, i, x);
}

double implicit_value(const Junction& J, int j, double y, int i, double x,
                      const TauSplit& s) {
  const double L0 = J.idle_cost();
  const double entry =
      y == 0.0 ? s.tau * L0 : s.tau * J.branch(j)(-y / s.tau);
  const double exit =
      x == 0.0 ? s.rest * L0 : s.rest * J.branch(i)(x / s.rest);
  if (y != 0.0 && s.tau == 0.0) return kInf;
  if (x != 0.0 && s.rest == 0.0) return kInf;
  return entry + exit;
}

ActionResult straight_result(const Junction& J, int i, double y, double x) {
  ActionResult r;
  r.value = (y == 0.0 && x == 0.0) ? J.idle_cost() : J.branch(i)(x - y);
  r.regime = Regime::Straight;
  r.tau1 = kNaN;
  r.tau2 = kNaN;
  r.entry_branch = i;
  r.exit_branch = i;
  return r;
}

int regime_rank(Regime r) {
  switch (r) {
    case Regime::Straight:
    case Regime::StayAtJunction:
      return 0;
    case Regime::Linear:
      return 1;
    case Regime::Implicit:
      return 2;
  }
  return 3;
}

/// Whether `a` should replace the incumbent `b`: smaller value, or a value
/// tie resolved by regime (Straight, Linear, Implicit) and then by the
/// pairing (j, i).
bool preferred(const ActionResult& a, const ActionResult& b) {
  if (!std::isfinite(a.value) || !std::isfinite(b.value)) {
    if (a.value != b.value) return a.value < b.value;
  } else {
    const double tol =
        1e-12 * std::max({1.0, std::abs(a.value), std::abs(b.value)});
    if (a.value < b.value - tol) return true;
    if (a.value > b.value + tol) return false;
  }
  if (regime_rank(a.regime) != regime_rank(b.regime)) {
    return regime_rank(a.regime) < regime_rank(b.regime);
  }
  return std::pair(a.entry_branch, a.exit_branch) <
         std::pair(b.entry_branch, b.exit_branch);
}

std::vector<std::pair<int, int>> pairings(const Junction& J, const Point& y,
                                          const Point& x) {
  std::vector<int> js, is;
  if (y.is_junction()) {
    for (int l = 1; l <= J.size(); ++l) js.push_back(l);
  } else {
    J.branch(y.branch());
    js.push_back(y.branch());
  }
  if (x.is_junction()) {
    for (int l = 1; l <= J.size(); ++l) is.push_back(l);
  } else {
    J.branch(x.branch());
    is.push_back(x.branch());
  }
  std::vector<std::pair<int, int>> out;
  for (int j : js) {
    for (int i : is) out.emplace_back(j, i);
  }
  return out;
}

template <class Eval>
ActionResult best_over_pairings(const Junction& J, const Point& y,
                                const Point& x, Eval&& eval) {
  std::optional<ActionResult> best;
  for (auto [j, i] : pairings(J, y, x)) {
    ActionResult r = eval(j, y.coord(), i, x.coord());
    if (!best || preferred(r, *best)) best = r;
  }
  return *best;
}

Gradient straight_gradient(const Junction& J, int i, double y, double x) {
  const double s = J.branch(i).slope(x - y);
  return {-s, s};
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Straight:
      return "straight";
    case Regime::Linear:
      return "linear";
    case Regime::Implicit:
      return "implicit";
    case Regime::StayAtJunction:
      return "stay";
  }
  return "unknown";
}

double d_straight(const Junction& J, const Point& y, const Point& x) {
  if (y.is_junction() && x.is_junction()) return J.idle_cost();
  if (y.is_junction()) return J.branch(x.branch())(x.coord());
  if (x.is_junction()) return J.branch(y.branch())(-y.coord());
  if (y.branch() != x.branch()) return kInf;
  return J.branch(x.branch())(x.coord() - y.coord());
}

double phase_cost(const Junction& J, Phase kind, double tau, const Point& p) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw DomainError("phase_cost: tau must lie in [0, 1]");
  }
  const double L0 = J.idle_cost();
  if (kind == Phase::Entry) {
    if (p.is_junction()) return 0.0;
    if (tau == 0.0) return kInf;
    return tau * J.branch(p.branch())(-p.coord() / tau) - tau * L0;
  }
  if (p.is_junction()) return L0;
  if (tau == 1.0) return kInf;
  const double rest = 1.0 - tau;
  return rest * J.branch(p.branch())(p.coord() / rest) + tau * L0;
}

double solve_tau(const Junction& J, int j, double y, int i, double x) {
  J.branch(j);
  J.branch(i);
  if (!(y >= 0.0 && x >= 0.0) || !std::isfinite(y) || !std::isfinite(x)) {
    throw DomainError("solve_tau: coordinates must be finite and nonnegative");
  }
  return tau_split(J, j, y, i, x).tau;
}

double d_implicit(const Junction& J, const Point& y, const Point& x) {
  double best = kInf;
  bool any = false;
  std::optional<UndefinedTauError> undefined;
  for (auto [j, i] : pairings(J, y, x)) {
    try {
      const auto s = tau_split(J, j, y.coord(), i, x.coord());
      best = std::min(best, implicit_value(J, j, y.coord(), i, x.coord(), s));
      any = true;
    } catch (const UndefinedTauError& e) {
      undefined = e;
    }
  }
  if (!any) throw *undefined;
  return best;
}

bool in_idle_triangle(const Junction& J, int j, double y, int i, double x) {
  if (J.in_i0(i) || J.in_i0(j)) return false;
  return x / J.xi_plus(i) - y / J.xi_minus(j) < 1.0;
}

std::optional<double> d_linear(const Junction& J, int j, double y, int i,
                               double x) {
  if (!in_idle_triangle(J, j, y, i, x)) return std::nullopt;
  return -J.branch(j).slope(J.xi_minus(j)) * y +
         J.branch(i).slope(J.xi_plus(i)) * x + J.idle_cost();
}

ActionResult junction_action(const Junction& J, int j, double y, int i,
                             double x) {
  ActionResult r;
  r.entry_branch = j;
  r.exit_branch = i;
  if (auto lin = d_linear(J, j, y, i, x)) {
    r.value = *lin;
    r.regime = Regime::Linear;
    r.tau1 = y == 0.0 ? 0.0 : -y / J.xi_minus(j);
    r.tau2 = 1.0 - x / J.xi_plus(i);
    return r;
  }
  const auto s = tau_split(J, j, y, i, x);
  r.value = implicit_value(J, j, y, i, x, s);
  r.regime = Regime::Implicit;
  r.tau1 = r.tau2 = s.tau;
  return r;
}

ActionResult reduced_action(const Junction& J, int j, double y, int i,
                            double x) {
  if (i != j) return junction_action(J, j, y, i, x);
  ActionResult straight = straight_result(J, i, y, x);
  if (J.in_i0(i)) return straight;
  ActionResult through = junction_action(J, j, y, i, x);
  const double tol = 1e-12 * std::max(1.0, std::abs(through.value));
  return straight.value <= through.value + tol ? straight : through;
}

Gradient junction_gradient(const Junction& J, int j, double y, int i,
                           double x) {
  double xi_x = 0.0;
  double xi_y = 0.0;
  if ((y == 0.0 && x == 0.0) || in_idle_triangle(J, j, y, i, x)) {
    xi_x = J.xi_plus(i);
    xi_y = J.xi_minus(j);
  } else if (y == 0.0) {
    xi_x = std::max(x, J.xi_plus(i));
    xi_y = J.k_inverse(j, J.k(i, xi_x), Side::Minus);
  } else if (x == 0.0) {
    xi_y = -std::max(y, -J.xi_minus(j));
    xi_x = J.k_inverse(i, J.k(j, xi_y), Side::Plus);
  } else {
    const auto s = interior_tau(J, j, y, i, x);
    xi_y = -y / s.tau;
    xi_x = x / s.rest;
  }
  return {-J.branch(j).slope(xi_y), J.branch(i).slope(xi_x)};
}

GradientResult reduced_gradient(const Junction& J, int j, double y, int i,
                                double x) {
  const ActionResult r = reduced_action(J, j, y, i, x);
  const bool straight = r.regime == Regime::Straight;
  const Gradient g = straight ? straight_gradient(J, i, y, x)
                              : junction_gradient(J, j, y, i, x);
  GradientResult out{g.d_y, g.d_x, true, std::nullopt};
  if (i != j || J.in_i0(i)) return out;

  bool kink = std::hypot(y + J.xi_minus(j), x) <= kKinkTolerance ||
              std::hypot(y, x - J.xi_plus(i)) <= kKinkTolerance;
  if (!kink && y > 0.0 && x > 0.0) {
    const double through = junction_action(J, j, y, i, x).value;
    kink = std::abs(through - J.branch(i)(x - y)) <= kKinkTolerance;
  }
  if (kink) {
    out.smooth = false;
    out.alternate = straight ? junction_gradient(J, j, y, i, x)
                             : straight_gradient(J, i, y, x);
  }
  return out;
}

ActionResult d_junction(const Junction& J, const Point& y, const Point& x) {
  return best_over_pairings(J, y, x, [&](int j, double yc, int i, double xc) {
    return junction_action(J, j, yc, i, xc);
  });
}

ActionResult d0(const Junction& J, const Point& y, const Point& x) {
  if (y.is_junction() && x.is_junction()) {
    ActionResult r;
    r.value = J.idle_cost();
    r.regime = Regime::StayAtJunction;
    r.tau1 = 0.0;
    r.tau2 = 1.0;
    r.entry_branch = r.exit_branch = J.i0().front();
    return r;
  }
  return best_over_pairings(J, y, x, [&](int j, double yc, int i, double xc) {
    return reduced_action(J, j, yc, i, xc);
  });
}

GradientResult d0_gradient(const Junction& J, const Point& y, const Point& x) {
  const ActionResult r = d0(J, y, x);
  return reduced_gradient(J, r.entry_branch, y.coord(), r.exit_branch,
                          x.coord());
}

ActionResult action(const Junction& J, double s, const Point& y, double t,
                    const Point& x) {
  if (!std::isfinite(s) || !std::isfinite(t)) {
    throw DomainError("action: times must be finite");
  }
  if (s > t) throw DomainError("action: start time after end time");
  if (s == t) {
    ActionResult r;
    r.value = y == x ? 0.0 : kInf;
    r.regime = Regime::Straight;
    r.tau1 = r.tau2 = kNaN;
    r.entry_branch = y.branch();
    r.exit_branch = x.branch();
    return r;
  }
  const double h = t - s;
  ActionResult r = d0(J, scaled(y, 1.0 / h), scaled(x, 1.0 / h));
  r.value *= h;
  if (r.regime != Regime::Straight) {
    r.tau1 = s + r.tau1 * h;
    r.tau2 = s + r.tau2 * h;
  }
  return r;
}

}  // namespace junction_hj
