#pragma once

#include <functional>
#include <vector>

#include "junction_hj/hopf_lax.hpp"
#include "junction_hj/junction.hpp"
#include "junction_hj/lagrangian.hpp"
#include "junction_hj/point.hpp"

namespace junction_hj {

/// Brute-force reference computations. They share no code with the closed
/// forms beyond evaluating the branch Lagrangians, and are meant to be slow
/// and obviously correct.
struct OracleConfig {
  int n_tau = 2000;     ///< grid points per entry/exit time axis
  int n_y = 2000;       ///< grid points per branch for space minimizations
  double radius = 4.0;  ///< space search radius
  int refine = 3;       ///< rounds of local grid shrinking

  /// Throws ValidationError unless counts >= 2, refine >= 0, radius > 0.
  void validate() const;
};

/// min over a (tau1 <= tau2) grid of the two-phase cost through the junction
/// for the fixed pairing (j, i).
double brute_force_junction_pair(const Junction& J, int j, double y, int i,
                                 double x, const OracleConfig& cfg);

/// brute_force_junction_pair minimized over pairings (all branches at a
/// junction endpoint).
double brute_force_junction(const Junction& J, const Point& y, const Point& x,
                            const OracleConfig& cfg);

/// min of brute_force_junction and the straight trajectory when admissible.
double brute_force_d0(const Junction& J, const Point& y, const Point& x,
                      const OracleConfig& cfg);

/// min over a dense per-branch y grid (n_y nodes on [0, radius] each, plus
/// the junction) of u0(y) + t brute_force_d0(y/t, x/t).
double brute_force_solve(const Junction& J, const InitialDatum& u0, double t,
                         const Point& x, const OracleConfig& cfg);

/// Classical Hopf-Lax on the real line: min over a Y grid (n_y nodes on
/// [X - radius, X + radius] plus `extra_nodes`) of u0(Y) + t Lambda((X-Y)/t),
/// followed by `refine` rounds of local grid shrinking.
double line_lax_oleinik(const Lagrangian& lambda,
                        const std::function<double(double)>& u0_line, double t,
                        double X, const OracleConfig& cfg,
                        const std::vector<double>& extra_nodes = {});

}  // namespace junction_hj
