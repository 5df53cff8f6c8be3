#include "junction_hj/verify.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "junction_hj/minimal_action.hpp"

namespace junction_hj::verify {

namespace {

/// min of a convex function on [lo, hi] by Brent's method.
template <class F>
double convex_min(F&& f, double lo, double hi) {
  std::uintmax_t iterations = 500;
  return boost::math::tools::brent_find_minima(
             f, lo, hi, std::numeric_limits<double>::digits / 2, iterations)
      .second;
}

std::vector<std::pair<int, int>> all_pairings(const Junction& J) {
  std::vector<std::pair<int, int>> out;
  for (int j = 1; j <= J.size(); ++j) {
    for (int i = 1; i <= J.size(); ++i) out.emplace_back(j, i);
  }
  return out;
}

double positive_uniform(Rng& rng, double box) {
  std::uniform_real_distribution<double> u(0.0, box);
  double v = 0.0;
  while (v == 0.0) v = u(rng);
  return v;
}

std::string summary(const CheckResult& r) {
  std::ostringstream os;
  os.precision(3);
  os << r.checked << " checks, " << r.failures << " failures, worst "
     << std::scientific << r.worst;
  return os.str();
}

CheckResult finish(CheckResult r) {
  r.passed = r.failures == 0 && r.checked > 0;
  if (r.detail.empty()) r.detail = summary(r);
  return r;
}

}  // namespace

void CheckResult::record(double error, double tol) {
  ++checked;
  if (!(error <= tol)) ++failures;
  if (std::isnan(error)) {
    worst = error;
  } else if (!std::isnan(worst)) {
    worst = std::max(worst, error);
  }
}

CheckResult conjugate_involution(const Junction& J, int probes, double tol) {
  CheckResult r{"conjugate-involution"};
  for (int l = 1; l <= J.size(); ++l) {
    const Lagrangian& L = J.branch(l);
    auto H = [&](double p) {
      return -convex_min([&](double q) { return L(q) - p * q; }, -20.0, 20.0);
    };
    const double p_lo = L.slope(-10.0);
    const double p_hi = L.slope(10.0);
    for (int k = 0; k < probes; ++k) {
      const double q = probes == 1 ? 0.0 : -5.0 + 10.0 * k / (probes - 1);
      const double back =
          -convex_min([&](double p) { return H(p) - p * q; }, p_lo, p_hi);
      r.record(std::abs(back - L(q)), tol);
    }
  }
  return finish(r);
}

CheckResult k_identities(const Junction& J, int samples, Rng& rng, double tol,
                         double fd_slack) {
  CheckResult r{"k-identities"};
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  const double g = J.gamma();
  const double L0 = J.idle_cost();
  constexpr double h = 1e-5;
  std::size_t bound_failures = 0;
  std::size_t inverse_failures = 0;
  for (int l = 1; l <= J.size(); ++l) {
    const Lagrangian& L = J.branch(l);
    for (int s = 0; s < samples; ++s) {
      const double xi = dist(rng);
      r.record(std::abs(J.k(l, xi) + hamiltonian(L, L.slope(xi)) + L0), tol);

      const double dk = (J.k(l, xi + h) - J.k(l, xi - h)) / (2.0 * h);
      const bool ok = xi < 0.0 ? dk >= g * std::abs(xi) - fd_slack
                               : dk <= -g * std::abs(xi) + fd_slack;
      if (!ok) ++bound_failures;

      const Side side = xi < 0.0 ? Side::Minus : Side::Plus;
      const double back = J.k_inverse(l, J.k(l, xi), side);
      if (!(std::abs(back - xi) <= 1e-10 * std::max(1.0, std::abs(xi)))) {
        ++inverse_failures;
      }
    }
  }
  r.failures += bound_failures + inverse_failures;
  r = finish(r);
  std::ostringstream os;
  os << r.detail << " (K' sign-bound failures " << bound_failures
     << ", inverse round-trip failures " << inverse_failures << ")";
  r.detail = os.str();
  return r;
}

CheckResult oracle_equivalence(const Junction& J, int samples,
                               const OracleConfig& cfg, double tol, Rng& rng,
                               double box) {
  CheckResult r{"oracle-equivalence"};
  std::uniform_real_distribution<double> u(0.0, box);
  const auto pairs = all_pairings(J);
  std::size_t above_oracle = 0;
  for (int s = 0; s < samples; ++s) {
    const auto [j, i] = pairs[s % pairs.size()];
    const double y = u(rng);
    const double x = u(rng);
    const double closed = junction_action(J, j, y, i, x).value;
    const double oracle = brute_force_junction_pair(J, j, y, i, x, cfg);
    r.record(std::abs(closed - oracle), tol);
    if (closed > oracle + 1e-9) ++above_oracle;
  }
  r.failures += above_oracle;
  r = finish(r);
  r.detail += ", closed form above oracle: " + std::to_string(above_oracle);
  return r;
}

CheckResult coercivity(const Junction& J, int samples, Rng& rng, double tol,
                       double box) {
  CheckResult r{"coercivity"};
  std::uniform_real_distribution<double> u(0.0, box);
  std::uniform_int_distribution<int> branch(1, J.size());
  for (int s = 0; s < samples; ++s) {
    const Point y = Point::on(branch(rng), u(rng));
    const Point x = Point::on(branch(rng), u(rng));
    const double d = distance(y, x);
    const double bound = 0.25 * J.gamma() * d * d - J.c0();
    r.record(std::max(0.0, bound - d0(J, y, x).value), tol);
  }
  return finish(r);
}

CheckResult c1_matching(const Junction& J, int points, double tol) {
  CheckResult r{"c1-matching"};
  constexpr double eps = 1e-9;
  std::size_t misplaced = 0;
  for (const auto& [j, i] : all_pairings(J)) {
    if (J.in_i0(j) || J.in_i0(i)) continue;
    const double xm = J.xi_minus(j);
    const double xp = J.xi_plus(i);
    // Hypotenuse x / xp - y / xm = 1 with unit normal pointing outward.
    const double ny = -1.0 / xm;
    const double nx = 1.0 / xp;
    const double norm = std::hypot(ny, nx);
    for (int k = 0; k < points; ++k) {
      const double s = (k + 0.5) / points;
      const double yb = -xm * s;
      const double xb = xp * (1.0 - s);
      const double yi = yb - eps * ny / norm, xi = xb - eps * nx / norm;
      const double yo = yb + eps * ny / norm, xo = xb + eps * nx / norm;
      if (!in_idle_triangle(J, j, yi, i, xi) || in_idle_triangle(J, j, yo, i, xo)) {
        ++misplaced;
        continue;
      }
      const Gradient in = junction_gradient(J, j, yi, i, xi);
      const Gradient out = junction_gradient(J, j, yo, i, xo);
      r.record(std::max(std::abs(in.d_y - out.d_y), std::abs(in.d_x - out.d_x)),
               tol);
    }
  }
  r.failures += misplaced;
  r = finish(r);
  if (r.checked == 0) {
    r.passed = true;
    r.detail = "no pairing with both branches outside I0; nothing to check";
  }
  return r;
}

CheckResult interior_identities(const Junction& J, int samples, Rng& rng,
                                double tol, double box) {
  CheckResult r{"interior-identities"};
  const auto pairs = all_pairings(J);
  std::size_t skipped = 0;
  for (int s = 0; s < samples; ++s) {
    const auto [j, i] = pairs[s % pairs.size()];
    const double y = positive_uniform(rng, box);
    const double x = positive_uniform(rng, box);
    const GradientResult g = reduced_gradient(J, j, y, i, x);
    if (!g.smooth) {
      ++skipped;
      continue;
    }
    const double D = reduced_action(J, j, y, i, x).value;
    const double base = D - x * g.d_x - y * g.d_y;
    r.record(std::abs(base + hamiltonian(J.branch(i), g.d_x)), tol);
    r.record(std::abs(base + hamiltonian(J.branch(j), -g.d_y)), tol);
  }
  r = finish(r);
  r.detail += ", skipped non-smooth: " + std::to_string(skipped);
  return r;
}

CheckResult edge_values(const Junction& J, int samples, Rng& rng, double tol,
                        double box) {
  CheckResult r{"edge-values"};
  const double L0 = J.idle_cost();
  for (const auto& [j, i] : all_pairings(J)) {
    const bool same_active = i == j && !J.in_i0(i);
    for (int s = 0; s < samples; ++s) {
      const double x = positive_uniform(rng, box);
      if (!(same_active && std::abs(x - J.xi_plus(i)) < 1e-6)) {
        const double D = reduced_action(J, j, 0.0, i, x).value;
        const GradientResult g = reduced_gradient(J, j, 0.0, i, x);
        r.record(std::abs(D - x * g.d_x - (L0 + J.k(i, std::max(x, J.xi_plus(i))))),
                 tol);
      }
      const double y = positive_uniform(rng, box);
      if (!(same_active && std::abs(y + J.xi_minus(j)) < 1e-6)) {
        const double D = reduced_action(J, j, y, i, 0.0).value;
        const GradientResult g = reduced_gradient(J, j, y, i, 0.0);
        r.record(std::abs(D - y * g.d_y -
                          (L0 + J.k(j, -std::max(y, -J.xi_minus(j))))),
                 tol);
      }
    }
  }
  return finish(r);
}

CheckResult edge_junction_conditions(const Junction& J, int samples, Rng& rng,
                                     double tol, double box) {
  CheckResult r{"edge-junction-conditions"};
  const int N = J.size();
  // Exit-edge points (y at the junction, x on branch i).
  for (int i = 1; i <= N; ++i) {
    for (int s = 0; s < samples; ++s) {
      const double x = positive_uniform(rng, box);
      if (!J.in_i0(i) && std::abs(x - J.xi_plus(i)) < 1e-6) continue;
      double rhs = -std::numeric_limits<double>::infinity();
      for (int k = 1; k <= N; ++k) {
        const double p = -reduced_gradient(J, k, 0.0, i, x).d_y;
        rhs = std::max(rhs, N == 1 ? hamiltonian(J.branch(k), p)
                                   : h_minus(J.branch(k), p));
      }
      rhs = -rhs;
      for (int j = 1; j <= N; ++j) {
        const double D = reduced_action(J, j, 0.0, i, x).value;
        const double gx = reduced_gradient(J, j, 0.0, i, x).d_x;
        r.record(std::abs(D - x * gx - rhs), tol);
      }
    }
  }
  // Entry-edge points (y on branch j, x at the junction).
  for (int j = 1; j <= N; ++j) {
    for (int s = 0; s < samples; ++s) {
      const double y = positive_uniform(rng, box);
      if (!J.in_i0(j) && std::abs(y + J.xi_minus(j)) < 1e-6) continue;
      double rhs = -std::numeric_limits<double>::infinity();
      for (int k = 1; k <= N; ++k) {
        const double p = reduced_gradient(J, j, y, k, 0.0).d_x;
        rhs = std::max(rhs, h_minus(J.branch(k), p));
      }
      rhs = -rhs;
      for (int i = 1; i <= N; ++i) {
        const double D = reduced_action(J, j, y, i, 0.0).value;
        const double gy = reduced_gradient(J, j, y, i, 0.0).d_y;
        r.record(std::abs(D - y * gy - rhs), tol);
      }
    }
  }
  return finish(r);
}

CheckResult time_bound(const GridSolution& sol) {
  CheckResult r{"time-bound"};
  const TimeBoundReport rep = check_time_bound(sol);
  r.checked = rep.checked;
  r.failures = rep.violations;
  r.worst = rep.worst_ratio;
  r = finish(r);
  std::ostringstream os;
  os << rep.checked << " nodes, " << rep.violations
     << " violations, max |u - u0| / (C t) = " << rep.worst_ratio;
  r.detail = os.str();
  return r;
}

}  // namespace junction_hj::verify
