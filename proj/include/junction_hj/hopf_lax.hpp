#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "junction_hj/junction.hpp"
#include "junction_hj/point.hpp"

namespace junction_hj {

/// Lipschitz initial condition u0 on the junction, optionally with the
/// breakpoints of a piecewise-linear representation (searched explicitly by
/// the minimizer, since kinks of u0 are where minimizers tend to sit).
class InitialDatum {
 public:
  using Function = std::function<double(const Point&)>;

  /// `breakpoints[b - 1]` lists coordinates on branch b.
  InitialDatum(Function eval, double lipschitz,
               std::vector<std::vector<double>> breakpoints = {});

  static InitialDatum zero();
  /// u0 = offset + slopes[b - 1] * x on branch b.
  static InitialDatum linear_per_branch(std::vector<double> slopes,
                                        double offset = 0.0);
  /// Per branch, (coord, value) nodes with strictly increasing coordinates
  /// starting at 0; all branches must agree at coordinate 0. Linear
  /// extension with the last slope beyond the final node.
  static InitialDatum piecewise_linear(
      std::vector<std::vector<std::pair<double, double>>> nodes);

  double operator()(const Point& p) const { return eval_(p); }
  double lipschitz() const { return lipschitz_; }
  std::span<const double> breakpoints(int branch) const;
  InitialDatum shifted(double c) const;

 private:
  Function eval_;
  double lipschitz_;
  std::vector<std::vector<double>> breakpoints_;
};

struct SolveOptions {
  int search_nodes = 512;        ///< grid nodes per branch inside the radius
  int max_refined_brackets = 8;  ///< local-minimum brackets polished by Brent
  double radius_safety = 1.5;
};

struct PointSolution {
  double value;
  Point argmin;
};

/// Radius around x outside which no minimizer of y -> u0(y) + D(0,y;t,x)
/// can lie, from the coercivity of D0.
double search_radius(const Junction& J, const InitialDatum& u0, double t,
                     const Point& x, const SolveOptions& opts = {});

/// inf over y of u0(y) + D(0, y; t, x). Ties go to the smallest branch id
/// (junction first), then the smallest coordinate. Throws DomainError for
/// t <= 0.
PointSolution solve_point(const Junction& J, const InitialDatum& u0, double t,
                          const Point& x, const SolveOptions& opts = {});

struct GridSpec {
  std::vector<double> times;
  /// One increasing list per branch, each starting at 0 (the junction).
  std::vector<std::vector<double>> coords;

  static GridSpec uniform(double t0, double t1, int nt, int branches,
                          double xmax, int nx);
};

struct GridSolution {
  std::vector<double> times;
  std::vector<std::vector<double>> coords;
  /// values[n][b - 1][k] = u(times[n], coords[b - 1][k] on branch b); k = 0
  /// is the junction point and carries the same value on every branch.
  std::vector<std::vector<std::vector<double>>> values;
  Junction junction;
  InitialDatum initial;

  double junction_value(std::size_t n) const { return values[n][0][0]; }
};

/// solve_point at every node; rows with t = 0 copy u0. Nodes are solved in
/// parallel (see thread_count()). Throws ValidationError for a malformed
/// grid.
GridSolution solve_grid(const Junction& J, const InitialDatum& u0,
                        const GridSpec& grid, const SolveOptions& opts = {});

struct DppReport {
  double max_defect = 0.0;
  std::size_t checked = 0;
  /// Nodes whose backward domain of dependence leaves the grid.
  std::size_t skipped = 0;
};

/// max over nodes x of row t of |u(t,x) - min_y (u(s,y) + D(s,y;t,x))|, the
/// inner minimum taken over the piecewise-linear interpolant of row s.
DppReport dpp_check(const Junction& J, const GridSolution& sol,
                    std::size_t s_index, std::size_t t_index);

enum class NodeKind { Smooth, Kink, Junction };

struct ResidualRecord {
  std::size_t time_index;
  int branch;  ///< 0 for the junction point
  std::size_t coord_index;
  double residual;
  NodeKind kind;
};

struct ResidualReport {
  std::size_t smooth_nodes = 0;
  std::size_t kink_nodes = 0;
  std::size_t junction_nodes = 0;
  double max_smooth = 0.0;
  double max_junction = 0.0;
  std::vector<ResidualRecord> records;
};

/// Finite-difference residual of u_t + H_i(u_x) = 0 on branches and
/// u_t + max_i H_i^-(u^i_x) = 0 at the junction, on rows 1 .. nt-2 (centered
/// in time). A node counts as smooth when its forward and backward
/// differences agree within smooth_factor * step in both space and time;
/// other nodes are recorded as kinks. Junction nodes use one-sided
/// differences into each branch and are classified by time smoothness only.
/// Throws ValidationError with fewer than 3 nodes in any direction.
ResidualReport residual_check(const Junction& J, const GridSolution& sol,
                              double smooth_factor = 10.0);

/// Constants of the bound |u(t,x) - u0(x)| <= C t.
struct TimeBound {
  double c2;  ///< C0 + L_u0^2 / gamma
  double m;   ///< max_i L_i(0)
  double c;   ///< max(c2, m)
};

TimeBound time_bound(const Junction& J, double lipschitz);

struct TimeBoundReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  ///< max |u - u0| / (C t) over t > 0
};

TimeBoundReport check_time_bound(const GridSolution& sol);

}  // namespace junction_hj
