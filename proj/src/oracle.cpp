#include "junction_hj/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "junction_hj/errors.hpp"

namespace junction_hj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    out[k] = k == n - 1 ? hi : lo + (hi - lo) * k / (n - 1);
  }
  return out;
}

double idle_cost(const Junction& J) {
  double L0 = kInf;
  for (int l = 1; l <= J.size(); ++l) L0 = std::min(L0, J.branch(l)(0.0));
  return L0;
}

struct TwoPhase {
  const Lagrangian& Lj;
  const Lagrangian& Li;
  double y;
  double x;
  double L0;

  double entry(double tau) const {
    if (y == 0.0) return 0.0;
    if (tau <= 0.0) return kInf;
    return tau * Lj(-y / tau) - tau * L0;
  }
  double exit(double tau) const {
    if (x == 0.0) return L0;
    if (tau >= 1.0) return kInf;
    return (1.0 - tau) * Li(x / (1.0 - tau)) + tau * L0;
  }
};

struct GridMin {
  double value = kInf;
  double tau1 = 0.0;
  double tau2 = 1.0;
};

/// min over (a, b) in ta x tb with a <= b of entry(a) + exit(b). Both lists
/// sorted; the constraint makes this a running minimum over entry times.
GridMin constrained_min(const TwoPhase& c, const std::vector<double>& ta,
                        const std::vector<double>& tb) {
  std::vector<double> ea(ta.size());
  for (std::size_t k = 0; k < ta.size(); ++k) ea[k] = c.entry(ta[k]);
  GridMin best;
  double run = kInf;
  double run_tau = 0.0;
  std::size_t ia = 0;
  for (double b : tb) {
    while (ia < ta.size() && ta[ia] <= b) {
      if (ea[ia] < run) {
        run = ea[ia];
        run_tau = ta[ia];
      }
      ++ia;
    }
    if (run == kInf) continue;
    const double v = run + c.exit(b);
    if (v < best.value) best = {v, run_tau, b};
  }
  return best;
}

}  // namespace

void OracleConfig::validate() const {
  if (n_tau < 2 || n_y < 2) throw ValidationError("oracle grid counts must be >= 2");
  if (refine < 0) throw ValidationError("oracle refinement rounds must be >= 0");
  if (!(radius > 0.0)) throw ValidationError("oracle radius must be > 0");
}

double brute_force_junction_pair(const Junction& J, int j, double y, int i,
                                 double x, const OracleConfig& cfg) {
  cfg.validate();
  const TwoPhase c{J.branch(j), J.branch(i), y, x, idle_cost(J)};
  std::vector<double> ta = grid(0.0, 1.0, cfg.n_tau);
  GridMin best = constrained_min(c, ta, ta);
  double h = 1.0 / (cfg.n_tau - 1);
  for (int round = 0; round < cfg.refine; ++round) {
    std::vector<double> ga, gb;
    if (std::abs(best.tau1 - best.tau2) <= 4.0 * h) {
      // Keep the diagonal tau1 = tau2 on the grid.
      const double lo = std::max(0.0, std::min(best.tau1, best.tau2) - 2.0 * h);
      const double hi = std::min(1.0, std::max(best.tau1, best.tau2) + 2.0 * h);
      ga = gb = grid(lo, hi, cfg.n_tau);
    } else {
      ga = grid(std::max(0.0, best.tau1 - 2.0 * h),
                std::min(1.0, best.tau1 + 2.0 * h), cfg.n_tau);
      gb = grid(std::max(0.0, best.tau2 - 2.0 * h),
                std::min(1.0, best.tau2 + 2.0 * h), cfg.n_tau);
    }
    const GridMin r = constrained_min(c, ga, gb);
    if (r.value <= best.value) best = r;
    h = std::max(ga.back() - ga.front(), gb.back() - gb.front()) /
        (cfg.n_tau - 1);
  }
  return best.value;
}

double brute_force_junction(const Junction& J, const Point& y, const Point& x,
                            const OracleConfig& cfg) {
  double best = kInf;
  for (int j = 1; j <= J.size(); ++j) {
    if (!y.is_junction() && j != y.branch()) continue;
    for (int i = 1; i <= J.size(); ++i) {
      if (!x.is_junction() && i != x.branch()) continue;
      best = std::min(best,
                      brute_force_junction_pair(J, j, y.coord(), i, x.coord(), cfg));
    }
  }
  return best;
}

double brute_force_d0(const Junction& J, const Point& y, const Point& x,
                      const OracleConfig& cfg) {
  double straight = kInf;
  if (y.is_junction() && x.is_junction()) {
    straight = idle_cost(J);
  } else if (y.is_junction()) {
    straight = J.branch(x.branch())(x.coord());
  } else if (x.is_junction()) {
    straight = J.branch(y.branch())(-y.coord());
  } else if (y.branch() == x.branch()) {
    straight = J.branch(x.branch())(x.coord() - y.coord());
  }
  return std::min(straight, brute_force_junction(J, y, x, cfg));
}

double brute_force_solve(const Junction& J, const InitialDatum& u0, double t,
                         const Point& x, const OracleConfig& cfg) {
  cfg.validate();
  if (!(t > 0.0)) throw DomainError("brute_force_solve: t must be positive");
  const Point xs = scaled(x, 1.0 / t);
  auto cost = [&](const Point& y) {
    return u0(y) + t * brute_force_d0(J, scaled(y, 1.0 / t), xs, cfg);
  };
  double best = cost(Point::junction());
  const std::vector<double> ys = grid(0.0, cfg.radius, cfg.n_y);
  for (int b = 1; b <= J.size(); ++b) {
    for (std::size_t k = 1; k < ys.size(); ++k) {
      best = std::min(best, cost(Point::on(b, ys[k])));
    }
  }
  return best;
}

double line_lax_oleinik(const Lagrangian& lambda,
                        const std::function<double(double)>& u0_line, double t,
                        double X, const OracleConfig& cfg,
                        const std::vector<double>& extra_nodes) {
  cfg.validate();
  if (!(t > 0.0)) throw DomainError("line_lax_oleinik: t must be positive");
  auto cost = [&](double Y) { return u0_line(Y) + t * lambda((X - Y) / t); };
  double best = kInf;
  double arg = X;
  auto scan = [&](const std::vector<double>& ys) {
    for (double Y : ys) {
      const double v = cost(Y);
      if (v < best) {
        best = v;
        arg = Y;
      }
    }
  };
  scan(grid(X - cfg.radius, X + cfg.radius, cfg.n_y));
  std::vector<double> extra;
  for (double Y : extra_nodes) {
    if (std::abs(Y - X) <= cfg.radius) extra.push_back(Y);
  }
  scan(extra);
  double h = 2.0 * cfg.radius / (cfg.n_y - 1);
  for (int round = 0; round < cfg.refine; ++round) {
    scan(grid(arg - 2.0 * h, arg + 2.0 * h, cfg.n_y));
    h = 4.0 * h / (cfg.n_y - 1);
  }
  return best;
}

}  // namespace junction_hj
