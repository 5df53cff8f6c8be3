#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "junction_hj/errors.hpp"
#include "junction_hj/hopf_lax.hpp"
#include "junction_hj/minimal_action.hpp"
#include "junction_hj/oracle.hpp"
#include "junction_hj/parallel.hpp"

namespace {

using namespace junction_hj;

double max_abs(const GridSolution& sol) {
  double m = 0.0;
  for (const auto& row : sol.values)
    for (const auto& br : row)
      for (double v : br) m = std::max(m, std::abs(v));
  return m;
}

// Half-line with L = q^2/2, u0(x) = x: u = x - t/2 when x >= t, and
// x^2/(2t) when the backward characteristic would leave the half-line.
double half_line_exact(double t, double x) {
  return x >= t ? x - 0.5 * t : x * x / (2.0 * t);
}

Junction half_line() { return Junction({Lagrangian::quadratic(0.5, 0.0, 0.0)}); }

TEST(InitialDatum, Builders) {
  const auto u = InitialDatum::linear_per_branch({0.3, -0.9}, 1.0);
  EXPECT_DOUBLE_EQ(u(Point::on(1, 2.0)), 1.6);
  EXPECT_DOUBLE_EQ(u(Point::on(2, 1.0)), 0.1);
  EXPECT_DOUBLE_EQ(u(Point::junction()), 1.0);
  EXPECT_DOUBLE_EQ(u.lipschitz(), 0.9);
  const auto pw = InitialDatum::piecewise_linear({{{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}}});
  EXPECT_DOUBLE_EQ(pw(Point::on(1, 0.5)), 0.5);
  EXPECT_DOUBLE_EQ(pw(Point::on(1, 1.5)), 0.5);
  EXPECT_DOUBLE_EQ(pw(Point::on(1, 3.0)), -1.0);  // linear extension
  EXPECT_DOUBLE_EQ(pw.lipschitz(), 1.0);
  // Interior nodes where the slope changes; 0 is the junction itself.
  ASSERT_EQ(pw.breakpoints(1).size(), 2u);
  EXPECT_DOUBLE_EQ(pw.breakpoints(1)[0], 1.0);
  EXPECT_DOUBLE_EQ(u.shifted(2.0)(Point::on(1, 1.0)), u(Point::on(1, 1.0)) + 2.0);
}

TEST(SolvePoint, ZeroDatumSymmetric) {
  const Junction S = fixtures::t2_sym();
  const auto u0 = InitialDatum::zero();
  EXPECT_NEAR(solve_point(S, u0, 1.0, Point::on(2, 0.5)).value, 0.0, 1e-12);
  EXPECT_NEAR(solve_point(S, u0, 0.3, Point::junction()).value, 0.0, 1e-12);
  EXPECT_NEAR(brute_force_solve(S, u0, 1.0, Point::on(1, 0.7), OracleConfig{}), 0.0, 1e-6);
}

TEST(SolvePoint, SmallTimeApproachesDatum) {
  const Junction A = fixtures::t2_asym();
  const auto u0 = InitialDatum::linear_per_branch({0.3, -0.2});
  const Point x = Point::on(2, 0.8);
  double prev = std::abs(solve_point(A, u0, 1e-1, x).value - u0(x));
  for (double t : {1e-2, 1e-3, 1e-4}) {
    const double gap = std::abs(solve_point(A, u0, t, x).value - u0(x));
    EXPECT_LE(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(SolvePoint, RiemannDatumMatchesBruteForce) {
  const Junction S = fixtures::t2_sym();
  const auto u0 = InitialDatum::linear_per_branch({0.3, -0.9});
  OracleConfig cfg;
  cfg.n_tau = 400;
  cfg.n_y = 1000;
  cfg.radius = 3.0;
  const double ref = brute_force_solve(S, u0, 0.5, Point::junction(), cfg);
  EXPECT_NEAR(solve_point(S, u0, 0.5, Point::junction()).value, ref, 2e-3);
  for (double c : {0.2, 0.6}) {
    for (int b = 1; b <= 2; ++b) {
      const Point x = Point::on(b, c);
      EXPECT_NEAR(solve_point(S, u0, 0.5, x).value,
                  brute_force_solve(S, u0, 0.5, x, cfg), 2e-3);
    }
  }
}

TEST(SolvePoint, HalfLineClosedForm) {
  const Junction J = half_line();
  const auto u0 = InitialDatum::linear_per_branch({1.0});
  for (double t : {0.25, 0.5, 1.0}) {
    for (double x : {0.0, 0.1, 0.3, 0.7, 1.5}) {
      const Point p = x == 0.0 ? Point::junction() : Point::on(1, x);
      EXPECT_NEAR(solve_point(J, u0, t, p).value, half_line_exact(t, x), 1e-9)
          << "t=" << t << " x=" << x;
    }
  }
}

TEST(SolvePoint, ArgminIsReported) {
  const Junction J = half_line();
  const auto u0 = InitialDatum::linear_per_branch({1.0});
  const auto s = solve_point(J, u0, 0.5, Point::on(1, 1.5));
  EXPECT_NEAR(s.argmin.coord(), 1.0, 1e-6);
  EXPECT_EQ(s.argmin.branch(), 1);
  EXPECT_THROW(solve_point(J, u0, 0.0, Point::on(1, 1.0)), DomainError);
}

TEST(SearchRadius, ContainsMinimizer) {
  const Junction A = fixtures::t2_asym();
  const auto u0 = InitialDatum::linear_per_branch({0.3, -0.2});
  for (double t : {0.1, 1.0}) {
    const Point x = Point::on(1, 0.5);
    const double R = search_radius(A, u0, t, x);
    EXPECT_GT(R, 0.0);
    EXPECT_LE(distance(solve_point(A, u0, t, x).argmin, x), R);
  }
}

TEST(SolveGrid, ZeroDatumIsZero) {
  const Junction S = fixtures::t2_sym();
  const GridSpec grid = GridSpec::uniform(0.0, 1.0, 5, 2, 2.0, 50);
  const GridSolution sol = solve_grid(S, InitialDatum::zero(), grid);
  ASSERT_EQ(sol.values.size(), 5u);
  ASSERT_EQ(sol.values[0].size(), 2u);
  ASSERT_EQ(sol.values[0][0].size(), 50u);
  EXPECT_LE(max_abs(sol), 1e-8);
  EXPECT_LE(dpp_check(S, sol, 2, 4).max_defect, 1e-8);
  EXPECT_EQ(dpp_check(S, sol, 3, 3).max_defect, 0.0);
  const auto res = residual_check(S, sol);
  EXPECT_LE(res.max_smooth, 1e-8);
  EXPECT_LE(res.max_junction, 1e-8);
}

TEST(SolveGrid, SingleInitialRowCopiesDatum) {
  const Junction A = fixtures::t2_asym();
  const auto u0 = InitialDatum::linear_per_branch({0.3, -0.2}, 0.1);
  GridSpec grid = GridSpec::uniform(0.0, 1.0, 2, 2, 1.0, 11);
  grid.times = {0.0};
  const GridSolution sol = solve_grid(A, u0, grid);
  for (int b = 1; b <= 2; ++b) {
    for (std::size_t k = 0; k < grid.coords[b - 1].size(); ++k) {
      const double c = grid.coords[b - 1][k];
      const Point p = c == 0.0 ? Point::junction() : Point::on(b, c);
      EXPECT_EQ(sol.values[0][b - 1][k], u0(p));
    }
  }
}

TEST(SolveGrid, ShiftAndComparison) {
  const Junction A = fixtures::t2_asym();
  const auto u0 = InitialDatum::linear_per_branch({0.3, -0.2});
  const GridSpec grid = GridSpec::uniform(0.0, 1.0, 3, 2, 1.5, 16);
  const GridSolution base = solve_grid(A, u0, grid);
  const GridSolution shifted = solve_grid(A, u0.shifted(-0.7), grid);
  const auto up = InitialDatum::linear_per_branch({0.5, -0.1}, 0.05);
  const GridSolution upper = solve_grid(A, up, grid);
  for (std::size_t n = 0; n < grid.times.size(); ++n)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t k = 0; k < grid.coords[b].size(); ++k) {
        EXPECT_NEAR(shifted.values[n][b][k], base.values[n][b][k] - 0.7, 1e-12);
        EXPECT_LE(base.values[n][b][k], upper.values[n][b][k]);
      }
}

TEST(SolveGrid, ThreadCountDoesNotChangeResults) {
  const Junction A = fixtures::t2_asym();
  const auto u0 = InitialDatum::linear_per_branch({0.3, -0.2});
  const GridSpec grid = GridSpec::uniform(0.0, 1.0, 3, 2, 1.5, 12);
  ::setenv("JUNCTION_HJ_THREADS", "1", 1);
  const GridSolution one = solve_grid(A, u0, grid);
  ::setenv("JUNCTION_HJ_THREADS", "3", 1);
  const GridSolution three = solve_grid(A, u0, grid);
  ::unsetenv("JUNCTION_HJ_THREADS");
  EXPECT_EQ(one.values, three.values);
}

TEST(SolveGrid, RejectsBadGrids) {
  const Junction A = fixtures::t2_asym();
  const auto u0 = InitialDatum::zero();
  GridSpec grid = GridSpec::uniform(0.0, 1.0, 3, 2, 1.0, 5);
  GridSpec wrong_branches = GridSpec::uniform(0.0, 1.0, 3, 3, 1.0, 5);
  EXPECT_THROW(solve_grid(A, u0, wrong_branches), ValidationError);
  GridSpec decreasing = grid;
  decreasing.times = {0.0, 0.5, 0.25};
  EXPECT_THROW(solve_grid(A, u0, decreasing), ValidationError);
  GridSpec no_junction = grid;
  no_junction.coords[0][0] = 0.1;
  EXPECT_THROW(solve_grid(A, u0, no_junction), ValidationError);
  EXPECT_THROW(GridSpec::uniform(0.0, 1.0, 0, 2, 1.0, 5), ValidationError);
}

TEST(Residual, HalfLineSmoothSolution) {
  const Junction J = half_line();
  const auto u0 = InitialDatum::linear_per_branch({1.0});
  const GridSpec grid = GridSpec::uniform(0.0, 1.0, 11, 1, 2.0, 41);
  const GridSolution sol = solve_grid(J, u0, grid);
  for (std::size_t n = 1; n < grid.times.size(); ++n)
    for (std::size_t k = 0; k < grid.coords[0].size(); ++k)
      EXPECT_NEAR(sol.values[n][0][k], half_line_exact(grid.times[n], grid.coords[0][k]), 1e-9);
  const auto rep = residual_check(J, sol);
  // u = x - t/2 only where x >= t; below that u = x^2/(2t), which is C^1 but
  // not C^2 across x = t, so difference stencils straddling the line carry
  // an O(h) truncation error. Nodes whose stencil stays in x >= t are exact.
  const double h = grid.coords[0][1];
  std::size_t linear_nodes = 0;
  for (const auto& r : rep.records) {
    if (r.branch != 1 || r.kind != NodeKind::Smooth) continue;
    const double x = grid.coords[0][r.coord_index];
    if (x - h < grid.times[r.time_index + 1]) continue;
    ++linear_nodes;
    EXPECT_LE(r.residual, 1e-6) << "t=" << grid.times[r.time_index] << " x=" << x;
  }
  EXPECT_GT(linear_nodes, 100u);
  EXPECT_LE(rep.max_smooth, 0.1);
  EXPECT_THROW(residual_check(J, solve_grid(J, u0, GridSpec::uniform(0.0, 1.0, 2, 1, 1.0, 5))),
               ValidationError);
}

TEST(TimeBound, ConstantsAndCheck) {
  const Junction A = fixtures::t2_asym();
  const TimeBound tb = time_bound(A, 0.3);
  EXPECT_NEAR(tb.c2, A.c0() + 0.09 / A.gamma(), 1e-15);
  // C2 = -min_{a>=0} (gamma a^2/4 - C0 - L a), by a grid search.
  const double c2_grid = -fixtures::grid_min(
      [&](double a) { return A.gamma() * a * a / 4.0 - A.c0() - 0.3 * a; }, 0.0, 10.0, 1000000);
  EXPECT_NEAR(tb.c2, c2_grid, 1e-9);
  EXPECT_DOUBLE_EQ(tb.m, 0.5);
  EXPECT_DOUBLE_EQ(tb.c, std::max(tb.c2, tb.m));
  const auto u0 = InitialDatum::linear_per_branch({0.3, -0.2});
  const auto rep = check_time_bound(solve_grid(A, u0, GridSpec::uniform(0.0, 1.0, 4, 2, 2.0, 11)));
  EXPECT_GT(rep.checked, 0u);
  EXPECT_EQ(rep.violations, 0u);
}

TEST(Parallel, PropagatesExceptions) {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), [&](std::size_t k) { hits[k] = 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, [](std::size_t k) {
                 if (k == 7) throw NumericalError("boom");
               }),
               NumericalError);
}

}  // namespace
