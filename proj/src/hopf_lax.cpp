#include "junction_hj/hopf_lax.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "junction_hj/errors.hpp"
#include "junction_hj/minimal_action.hpp"
#include "junction_hj/parallel.hpp"

namespace junction_hj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> linspace(double lo, double hi, int n) {
  if (n <= 1 || hi <= lo) return {lo};
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    out[k] = k == n - 1 ? hi : lo + (hi - lo) * k / (n - 1);
  }
  return out;
}

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

struct Candidate {
  double value = kInf;
  Point point;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.point.branch() != b.point.branch()) {
    return a.point.branch() < b.point.branch();
  }
  return a.point.coord() < b.point.coord();
}

/// Minimizes phi over the given per-branch coordinate lists (sorted; a 0
/// entry stands for the junction point), then polishes the lowest local
/// minimum brackets with Brent's method.
Candidate minimize_landscape(
    const std::function<double(const Point&)>& phi,
    const std::vector<std::vector<double>>& nodes, int max_brackets) {
  std::optional<double> at_junction;
  auto eval = [&](int b, double c) {
    if (c == 0.0) {
      if (!at_junction) at_junction = phi(Point::junction());
      return *at_junction;
    }
    return phi(Point::on(b, c));
  };

  struct Bracket {
    int branch;
    double lo;
    double hi;
    double value;
  };
  Candidate best;
  bool have_best = false;
  std::vector<Bracket> brackets;
  for (std::size_t bi = 0; bi < nodes.size(); ++bi) {
    const int b = static_cast<int>(bi) + 1;
    const auto& cs = nodes[bi];
    if (cs.empty()) continue;
    std::vector<double> vals(cs.size());
    for (std::size_t k = 0; k < cs.size(); ++k) {
      vals[k] = eval(b, cs[k]);
      Candidate c{vals[k], Point::on(b, cs[k])};
      if (!have_best || better(c, best)) {
        best = c;
        have_best = true;
      }
    }
    if (cs.size() < 2) continue;
    const std::size_t last = cs.size() - 1;
    for (std::size_t k = 0; k <= last; ++k) {
      if (!std::isfinite(vals[k])) continue;
      if (k > 0 && vals[k] > vals[k - 1]) continue;
      if (k < last && vals[k] > vals[k + 1]) continue;
      brackets.push_back({b, cs[k == 0 ? 0 : k - 1], cs[std::min(k + 1, last)],
                          vals[k]});
    }
  }
  std::stable_sort(brackets.begin(), brackets.end(),
                   [](const Bracket& a, const Bracket& b) {
                     return a.value < b.value;
                   });
  if (static_cast<int>(brackets.size()) > max_brackets) {
    brackets.resize(std::max(max_brackets, 0));
  }
  for (const auto& br : brackets) {
    std::uintmax_t iterations = 200;
    const auto r = boost::math::tools::brent_find_minima(
        [&](double c) { return eval(br.branch, std::max(c, 0.0)); }, br.lo,
        br.hi, std::numeric_limits<double>::digits / 2, iterations);
    Candidate c{r.second, Point::on(br.branch, std::max(r.first, 0.0))};
    if (better(c, best)) best = c;
  }
  return best;
}

void validate_grid(const Junction& J, const GridSpec& grid) {
  if (grid.times.empty()) throw ValidationError("grid: no time rows");
  for (std::size_t n = 0; n < grid.times.size(); ++n) {
    const double t = grid.times[n];
    if (!std::isfinite(t) || t < 0.0) {
      throw ValidationError("grid: times must be finite and nonnegative");
    }
    if (n > 0 && !(t > grid.times[n - 1])) {
      throw ValidationError("grid: times must be strictly increasing");
    }
  }
  if (static_cast<int>(grid.coords.size()) != J.size()) {
    throw ValidationError("grid: need one coordinate list per branch (" +
                          std::to_string(J.size()) + ")");
  }
  for (const auto& cs : grid.coords) {
    if (cs.empty() || cs.front() != 0.0) {
      throw ValidationError("grid: branch coordinates must start at 0");
    }
    for (std::size_t k = 1; k < cs.size(); ++k) {
      if (!std::isfinite(cs[k]) || !(cs[k] > cs[k - 1])) {
        throw ValidationError(
            "grid: branch coordinates must be finite and strictly increasing");
      }
    }
  }
}

/// Piecewise-linear interpolant of one solution row, +inf beyond the grid.
double interpolate_row(const GridSolution& sol, std::size_t n,
                       const Point& p) {
  const auto& row = sol.values[n];
  if (p.is_junction()) return row[0][0];
  const auto& cs = sol.coords[p.branch() - 1];
  const auto& us = row[p.branch() - 1];
  const double c = p.coord();
  if (c > cs.back()) return kInf;
  const auto it = std::upper_bound(cs.begin(), cs.end(), c);
  const std::size_t k = std::min<std::size_t>(it - cs.begin(), cs.size() - 1);
  if (cs[k] == c) return us[k];
  const double w = (c - cs[k - 1]) / (cs[k] - cs[k - 1]);
  return us[k - 1] + w * (us[k] - us[k - 1]);
}

}  // namespace

// ---- InitialDatum ----

InitialDatum::InitialDatum(Function eval, double lipschitz,
                           std::vector<std::vector<double>> breakpoints)
    : eval_(std::move(eval)),
      lipschitz_(lipschitz),
      breakpoints_(std::move(breakpoints)) {
  if (!eval_) throw ValidationError("initial datum needs an evaluator");
  if (!std::isfinite(lipschitz_) || lipschitz_ < 0.0) {
    throw ValidationError("initial datum Lipschitz constant must be >= 0");
  }
  for (auto& bp : breakpoints_) sort_unique(bp);
}

InitialDatum InitialDatum::zero() {
  return InitialDatum([](const Point&) { return 0.0; }, 0.0);
}

InitialDatum InitialDatum::linear_per_branch(std::vector<double> slopes,
                                             double offset) {
  double lip = 0.0;
  for (double s : slopes) {
    if (!std::isfinite(s)) throw ValidationError("initial slopes must be finite");
    lip = std::max(lip, std::abs(s));
  }
  auto eval = [slopes = std::move(slopes), offset](const Point& p) {
    if (p.is_junction()) return offset;
    if (p.branch() > static_cast<int>(slopes.size())) {
      throw DomainError("initial datum has no slope for branch " +
                        std::to_string(p.branch()));
    }
    return offset + slopes[p.branch() - 1] * p.coord();
  };
  return InitialDatum(std::move(eval), lip);
}

InitialDatum InitialDatum::piecewise_linear(
    std::vector<std::vector<std::pair<double, double>>> nodes) {
  double lip = 0.0;
  std::vector<std::vector<double>> breakpoints;
  std::optional<double> origin;
  for (const auto& branch : nodes) {
    if (branch.empty() || branch.front().first != 0.0) {
      throw ValidationError("piecewise-linear datum: each branch starts at 0");
    }
    if (origin && branch.front().second != *origin) {
      throw ValidationError(
          "piecewise-linear datum: branches disagree at the junction");
    }
    origin = branch.front().second;
    std::vector<double> bp;
    for (std::size_t k = 1; k < branch.size(); ++k) {
      const double dx = branch[k].first - branch[k - 1].first;
      if (!(dx > 0.0)) {
        throw ValidationError(
            "piecewise-linear datum: coordinates must increase");
      }
      lip = std::max(lip, std::abs(branch[k].second - branch[k - 1].second) / dx);
      bp.push_back(branch[k].first);
    }
    breakpoints.push_back(std::move(bp));
  }
  if (!std::isfinite(lip)) {
    throw ValidationError("piecewise-linear datum: values must be finite");
  }
  auto eval = [nodes = std::move(nodes)](const Point& p) {
    if (p.is_junction()) return nodes.front().front().second;
    if (p.branch() > static_cast<int>(nodes.size())) {
      throw DomainError("initial datum has no nodes for branch " +
                        std::to_string(p.branch()));
    }
    const auto& br = nodes[p.branch() - 1];
    const double c = p.coord();
    if (br.size() == 1) return br.front().second;
    auto it = std::upper_bound(
        br.begin(), br.end(), c,
        [](double v, const std::pair<double, double>& n) { return v < n.first; });
    std::size_t k = it - br.begin();
    k = std::clamp<std::size_t>(k, 1, br.size() - 1);
    const auto& a = br[k - 1];
    const auto& b = br[k];
    return a.second + (c - a.first) * (b.second - a.second) / (b.first - a.first);
  };
  return InitialDatum(std::move(eval), lip, std::move(breakpoints));
}

std::span<const double> InitialDatum::breakpoints(int branch) const {
  if (branch < 1 || branch > static_cast<int>(breakpoints_.size())) return {};
  return breakpoints_[branch - 1];
}

InitialDatum InitialDatum::shifted(double c) const {
  return InitialDatum([f = eval_, c](const Point& p) { return f(p) + c; },
                      lipschitz_, breakpoints_);
}

// ---- Pointwise solver ----

double search_radius(const Junction& J, const InitialDatum& u0, double t,
                     const Point& x, const SolveOptions& opts) {
  // Minimizers satisfy gamma d^2 / (4t) - L d - C0 t <= D(0,x;t,x).
  const double L = u0.lipschitz();
  const double B =
      std::max(0.0, J.c0() * t + action(J, 0.0, x, t, x).value);
  const double R = (L + std::sqrt(L * L + J.gamma() * B / t)) * 2.0 * t /
                   J.gamma();
  return R * opts.radius_safety;
}

PointSolution solve_point(const Junction& J, const InitialDatum& u0, double t,
                          const Point& x, const SolveOptions& opts) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("solve_point: t must be positive and finite");
  }
  if (!x.is_junction()) J.branch(x.branch());
  const double R = search_radius(J, u0, t, x, opts);
  const double xc = x.coord();
  std::vector<std::vector<double>> nodes(J.size());
  for (int b = 1; b <= J.size(); ++b) {
    double lo = 0.0;
    double hi = 0.0;
    if (x.is_junction()) {
      hi = R;
    } else if (b == x.branch()) {
      lo = std::max(0.0, xc - R);
      hi = xc + R;
    } else if (R > xc) {
      hi = R - xc;
    } else {
      continue;
    }
    auto& cs = nodes[b - 1];
    cs = linspace(lo, hi, opts.search_nodes);
    if (lo == 0.0) cs.push_back(0.0);
    if (b == x.branch()) cs.push_back(xc);
    for (double c : u0.breakpoints(b)) {
      if (c >= lo && c <= hi) cs.push_back(c);
    }
    sort_unique(cs);
  }
  auto phi = [&](const Point& y) {
    return u0(y) + action(J, 0.0, y, t, x).value;
  };
  const Candidate best = minimize_landscape(phi, nodes, opts.max_refined_brackets);
  return {best.value, best.point};
}

// ---- Grid solver ----

GridSpec GridSpec::uniform(double t0, double t1, int nt, int branches,
                           double xmax, int nx) {
  if (nt < 1 || nx < 2 || branches < 1) {
    throw ValidationError("uniform grid needs nt >= 1, nx >= 2, branches >= 1");
  }
  if (!(xmax > 0.0)) throw ValidationError("uniform grid needs xmax > 0");
  if (nt > 1 && !(t1 > t0)) throw ValidationError("uniform grid needs t1 > t0");
  GridSpec g;
  g.times = linspace(t0, t1, nt);
  g.coords.assign(branches, linspace(0.0, xmax, nx));
  return g;
}

GridSolution solve_grid(const Junction& J, const InitialDatum& u0,
                        const GridSpec& grid, const SolveOptions& opts) {
  validate_grid(J, grid);
  GridSolution sol{grid.times, grid.coords, {}, J, u0};
  const std::size_t nt = grid.times.size();
  sol.values.resize(nt);
  struct Task {
    std::size_t n;
    int branch;  // 0 = junction
    std::size_t k;
  };
  std::vector<Task> tasks;
  for (std::size_t n = 0; n < nt; ++n) {
    sol.values[n].resize(J.size());
    for (int b = 1; b <= J.size(); ++b) {
      sol.values[n][b - 1].assign(grid.coords[b - 1].size(), 0.0);
    }
    tasks.push_back({n, kJunction, 0});
    for (int b = 1; b <= J.size(); ++b) {
      for (std::size_t k = 1; k < grid.coords[b - 1].size(); ++k) {
        tasks.push_back({n, b, k});
      }
    }
  }
  parallel_for(tasks.size(), [&](std::size_t idx) {
    const Task& task = tasks[idx];
    const double t = grid.times[task.n];
    const Point x = task.branch == kJunction
                        ? Point::junction()
                        : Point::on(task.branch,
                                    grid.coords[task.branch - 1][task.k]);
    const double u = t == 0.0 ? u0(x) : solve_point(J, u0, t, x, opts).value;
    if (task.branch == kJunction) {
      for (int b = 1; b <= J.size(); ++b) sol.values[task.n][b - 1][0] = u;
    } else {
      sol.values[task.n][task.branch - 1][task.k] = u;
    }
  });
  return sol;
}

// ---- Verification ----

DppReport dpp_check(const Junction& J, const GridSolution& sol,
                    std::size_t s_index, std::size_t t_index) {
  const std::size_t nt = sol.times.size();
  if (s_index >= nt || t_index >= nt || s_index > t_index) {
    throw DomainError("dpp_check: need row indices s <= t within the grid");
  }
  DppReport report;
  std::size_t nodes = 1;
  for (const auto& cs : sol.coords) nodes += cs.size() - 1;
  if (s_index == t_index) {
    report.checked = nodes;
    return report;
  }
  const double s = sol.times[s_index];
  const double t = sol.times[t_index];
  const double h = t - s;

  // Speed bound for optimal trajectories: conjugate velocities over the
  // range of slopes present in row s, and the idling thresholds xi.
  double p_lo = kInf, p_hi = -kInf, max_step = 0.0;
  for (int b = 1; b <= J.size(); ++b) {
    const auto& cs = sol.coords[b - 1];
    const auto& us = sol.values[s_index][b - 1];
    for (std::size_t k = 1; k < cs.size(); ++k) {
      const double p = (us[k] - us[k - 1]) / (cs[k] - cs[k - 1]);
      p_lo = std::min(p_lo, p);
      p_hi = std::max(p_hi, p);
      max_step = std::max(max_step, cs[k] - cs[k - 1]);
    }
  }
  double speed = 0.0;
  for (int b = 1; b <= J.size(); ++b) {
    const Lagrangian& L = J.branch(b);
    if (p_lo <= p_hi) {
      speed = std::max({speed, std::abs(conjugate(L, p_lo).q_star),
                        std::abs(conjugate(L, p_hi).q_star)});
    }
    speed = std::max({speed, J.xi_plus(b), -J.xi_minus(b)});
  }
  const double margin = 1.05 * h * speed + max_step;

  struct Task {
    int branch;
    std::size_t k;
  };
  std::vector<Task> tasks{{kJunction, 0}};
  for (int b = 1; b <= J.size(); ++b) {
    for (std::size_t k = 1; k < sol.coords[b - 1].size(); ++k) {
      tasks.push_back({b, k});
    }
  }
  std::vector<double> defects(tasks.size(), -1.0);
  parallel_for(tasks.size(), [&](std::size_t idx) {
    const Task& task = tasks[idx];
    const Point x = task.branch == kJunction
                        ? Point::junction()
                        : Point::on(task.branch,
                                    sol.coords[task.branch - 1][task.k]);
    const double xc = x.coord();
    std::vector<std::vector<double>> nodes(J.size());
    for (int b = 1; b <= J.size(); ++b) {
      const auto& cs = sol.coords[b - 1];
      const bool own = !x.is_junction() && b == x.branch();
      const double lo = own ? std::max(0.0, xc - margin) : 0.0;
      const double hi = own ? xc + margin : margin - xc;
      if (hi > cs.back()) return;  // dependence domain leaves the grid
      if (hi < 0.0) continue;
      for (double c : cs) {
        if (c >= lo && c <= hi) nodes[b - 1].push_back(c);
      }
      if (nodes[b - 1].empty() || nodes[b - 1].front() > lo) {
        nodes[b - 1].push_back(lo);
      }
      if (nodes[b - 1].back() < hi) nodes[b - 1].push_back(hi);
      sort_unique(nodes[b - 1]);
    }
    auto phi = [&](const Point& y) {
      return interpolate_row(sol, s_index, y) + action(J, s, y, t, x).value;
    };
    const Candidate best = minimize_landscape(phi, nodes, 8);
    const double u = task.branch == kJunction
                         ? sol.junction_value(t_index)
                         : sol.values[t_index][task.branch - 1][task.k];
    defects[idx] = std::abs(u - best.value);
  });
  for (double d : defects) {
    if (d < 0.0) {
      ++report.skipped;
    } else {
      ++report.checked;
      report.max_defect = std::max(report.max_defect, d);
    }
  }
  return report;
}

ResidualReport residual_check(const Junction& J, const GridSolution& sol,
                              double smooth_factor) {
  const std::size_t nt = sol.times.size();
  if (nt < 3) throw ValidationError("residual_check: need at least 3 time rows");
  for (const auto& cs : sol.coords) {
    if (cs.size() < 3) {
      throw ValidationError("residual_check: need at least 3 nodes per branch");
    }
  }
  ResidualReport report;
  for (std::size_t n = 1; n + 1 < nt; ++n) {
    const double dt_minus = sol.times[n] - sol.times[n - 1];
    const double dt_plus = sol.times[n + 1] - sol.times[n];
    const double dt = std::max(dt_minus, dt_plus);
    auto time_derivative = [&](double before, double now, double after,
                               bool& smooth) {
      const double back = (now - before) / dt_minus;
      const double fwd = (after - now) / dt_plus;
      smooth = std::abs(fwd - back) <= smooth_factor * dt;
      return (after - before) / (dt_minus + dt_plus);
    };

    // Junction point.
    {
      bool smooth_t = true;
      const double ut = time_derivative(sol.junction_value(n - 1),
                                        sol.junction_value(n),
                                        sol.junction_value(n + 1), smooth_t);
      double hmax = -kInf;
      for (int b = 1; b <= J.size(); ++b) {
        const auto& cs = sol.coords[b - 1];
        const auto& us = sol.values[n][b - 1];
        const double p = (us[1] - us[0]) / cs[1];
        hmax = std::max(hmax, h_minus(J.branch(b), p));
      }
      const double r = std::abs(ut + hmax);
      const NodeKind kind = smooth_t ? NodeKind::Junction : NodeKind::Kink;
      report.records.push_back({n, kJunction, 0, r, kind});
      if (smooth_t) {
        ++report.junction_nodes;
        report.max_junction = std::max(report.max_junction, r);
      } else {
        ++report.kink_nodes;
      }
    }

    for (int b = 1; b <= J.size(); ++b) {
      const auto& cs = sol.coords[b - 1];
      const Lagrangian& L = J.branch(b);
      for (std::size_t k = 1; k + 1 < cs.size(); ++k) {
        const auto& row = sol.values[n][b - 1];
        const double dx_minus = cs[k] - cs[k - 1];
        const double dx_plus = cs[k + 1] - cs[k];
        const double back = (row[k] - row[k - 1]) / dx_minus;
        const double fwd = (row[k + 1] - row[k]) / dx_plus;
        const bool smooth_x =
            std::abs(fwd - back) <= smooth_factor * std::max(dx_minus, dx_plus);
        bool smooth_t = true;
        const double ut = time_derivative(sol.values[n - 1][b - 1][k], row[k],
                                          sol.values[n + 1][b - 1][k], smooth_t);
        const double ux = (row[k + 1] - row[k - 1]) / (dx_minus + dx_plus);
        const double r = std::abs(ut + hamiltonian(L, ux));
        const bool smooth = smooth_x && smooth_t;
        report.records.push_back(
            {n, b, k, r, smooth ? NodeKind::Smooth : NodeKind::Kink});
        if (smooth) {
          ++report.smooth_nodes;
          report.max_smooth = std::max(report.max_smooth, r);
        } else {
          ++report.kink_nodes;
        }
      }
    }
  }
  return report;
}

TimeBound time_bound(const Junction& J, double lipschitz) {
  // -min_{a >= 0} (gamma a^2 / 4 - C0 - L a) = C0 + L^2 / gamma.
  const double c2 = J.c0() + lipschitz * lipschitz / J.gamma();
  const double m = J.max_idle_cost();
  return {c2, m, std::max(c2, m)};
}

TimeBoundReport check_time_bound(const GridSolution& sol) {
  const TimeBound tb = time_bound(sol.junction, sol.initial.lipschitz());
  TimeBoundReport report;
  for (std::size_t n = 0; n < sol.times.size(); ++n) {
    const double t = sol.times[n];
    for (std::size_t bi = 0; bi < sol.coords.size(); ++bi) {
      const auto& cs = sol.coords[bi];
      for (std::size_t k = bi == 0 ? 0 : 1; k < cs.size(); ++k) {
        const Point x = Point::on(static_cast<int>(bi) + 1, cs[k]);
        const double u0 = sol.initial(x);
        const double u = sol.values[n][bi][k];
        ++report.checked;
        if (u > u0 + tb.c * t || u < u0 - tb.c * t) ++report.violations;
        if (t > 0.0 && tb.c > 0.0) {
          report.worst_ratio =
              std::max(report.worst_ratio, std::abs(u - u0) / (tb.c * t));
        }
      }
    }
  }
  return report;
}

}  // namespace junction_hj
