#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <utility>

#include "junction_hj/hopf_lax.hpp"
#include "junction_hj/junction.hpp"
#include "junction_hj/oracle.hpp"

namespace junction_hj::verify {

/// Outcome of one property check over a batch of samples.
struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t checked = 0;
  std::size_t failures = 0;
  double worst = 0.0;  ///< largest error (or violation) observed
  std::string detail;

  explicit CheckResult(std::string n = {}) : name(std::move(n)) {}
  void record(double error, double tol);
};

using Rng = std::mt19937_64;

/// (L*)* = L on q in [-5, 5], both conjugations done numerically by Brent
/// minimization over a fixed slope window.
CheckResult conjugate_involution(const Junction& J, int probes, double tol);

/// K_l(xi) + H_l(L_l'(xi)) + L0(0) = 0 at random xi in [-5, 5]; the sign
/// bounds on K_l' by centered differences (h = 1e-5); and k_inverse
/// inverting K_l on each side.
CheckResult k_identities(const Junction& J, int samples, Rng& rng, double tol,
                         double fd_slack);

/// |junction_action - brute_force_junction_pair| <= tol and closed form <=
/// oracle + 1e-9 at random (y, x) in [0, box]^2, cycling over all pairings.
CheckResult oracle_equivalence(const Junction& J, int samples,
                               const OracleConfig& cfg, double tol, Rng& rng,
                               double box = 2.0);

/// d0(y, x) >= gamma/4 d(y, x)^2 - C0 - tol at random point pairs with
/// coordinates in [0, box].
CheckResult coercivity(const Junction& J, int samples, Rng& rng, double tol,
                       double box = 4.0);

/// For every pairing with i, j outside I0: the linear-arm gradient just
/// inside the idling triangle and the implicit-arm gradient just outside
/// agree within tol at `points` places along its hypotenuse.
CheckResult c1_matching(const Junction& J, int points, double tol);

/// D0 - x D0_x - y D0_y + H_i(D0_x) = 0 and the same with H_j(-D0_y) at
/// random smooth interior points of every pairing.
CheckResult interior_identities(const Junction& J, int samples, Rng& rng,
                                double tol, double box = 2.0);

/// Values of D0 - x D0_x - y D0_y on the edges y = 0 and x = 0
/// (L0(0) + K(max(...)) forms), per pairing, away from the excluded points.
CheckResult edge_values(const Junction& J, int samples, Rng& rng, double tol,
                        double box = 2.0);

/// The junction-side conditions on the same edges: D0 - x D0_x - y D0_y
/// equals -max_k H_k^- of the one-sided slopes into each branch (-H_1 when
/// N = 1).
CheckResult edge_junction_conditions(const Junction& J, int samples, Rng& rng,
                                     double tol, double box = 2.0);

/// Zero violations of |u - u0| <= C t on a solved grid.
CheckResult time_bound(const GridSolution& sol);

}  // namespace junction_hj::verify
