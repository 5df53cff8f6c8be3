#include "junction_hj/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "junction_hj/errors.hpp"
#include "roots.hpp"

namespace junction_hj {

namespace {

void check_concavity(const Flux& f) {
  const double rc = f.critical_density();
  const double rmax = f.max_density();
  constexpr int kProbe = 200;
  for (int k = 0; k < kProbe; ++k) {
    const double r0 = rmax * k / kProbe;
    const double r1 = rmax * (k + 1) / kProbe;
    const double tol = 1e-12 * (1.0 + std::abs(f(r0)));
    if (f.derivative(r1) > f.derivative(r0) + 1e-12 * (1.0 + std::abs(f.derivative(r0)))) {
      throw ValidationError("flux is not concave near rho = " + std::to_string(r0));
    }
    if (r1 <= rc && f(r1) < f(r0) - tol) {
      throw ValidationError("flux decreases below its critical density");
    }
    if (r0 >= rc && f(r1) > f(r0) + tol) {
      throw ValidationError("flux increases above its critical density");
    }
  }
}

std::vector<Road> concatenate(std::vector<Road> incoming,
                              std::vector<Road> outgoing) {
  auto check_side = [](const std::vector<Road>& side, const char* name) {
    if (side.empty()) {
      throw ValidationError(std::string("traffic scenario needs at least one ") +
                            name + " road");
    }
    double sum = 0.0;
    for (const auto& r : side) {
      if (!(r.gamma > 0.0 && r.gamma <= 1.0)) {
        throw ValidationError(std::string(name) +
                              " turning fraction must lie in (0, 1]");
      }
      sum += r.gamma;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw ValidationError(std::string(name) +
                            " turning fractions must sum to 1, got " +
                            std::to_string(sum));
    }
  };
  check_side(incoming, "incoming");
  check_side(outgoing, "outgoing");
  std::vector<Road> roads;
  for (auto& r : incoming) {
    r.direction = RoadDirection::Incoming;
    roads.push_back(std::move(r));
  }
  for (auto& r : outgoing) {
    r.direction = RoadDirection::Outgoing;
    roads.push_back(std::move(r));
  }
  for (const auto& r : roads) check_concavity(r.flux);
  return roads;
}

Junction build_traffic_junction(const std::vector<Road>& roads) {
  std::vector<Lagrangian> ls;
  ls.reserve(roads.size());
  for (const auto& r : roads) ls.push_back(road_lagrangian(r));
  return Junction(std::move(ls));
}

}  // namespace

Flux Flux::lwr(double vmax, double rhomax) {
  if (!(vmax > 0.0 && rhomax > 0.0) || !std::isfinite(vmax) ||
      !std::isfinite(rhomax)) {
    throw ValidationError("LWR flux needs finite vmax > 0 and rhomax > 0");
  }
  Flux f;
  f.lwr_ = LwrParameters{vmax, rhomax};
  f.rho_c_ = 0.5 * rhomax;
  f.rhomax_ = rhomax;
  f.curvature_bound_ = 2.0 * vmax / rhomax;
  return f;
}

Flux Flux::custom(Function fn, Function df, double rho_c, double rhomax,
                  double curvature_bound) {
  if (!fn || !df) throw ValidationError("custom flux needs f and f'");
  if (!(rhomax > 0.0 && rho_c > 0.0 && rho_c < rhomax)) {
    throw ValidationError("custom flux needs 0 < rho_c < rhomax");
  }
  if (!(curvature_bound > 0.0) || !std::isfinite(curvature_bound)) {
    throw ValidationError("custom flux needs a finite curvature bound > 0");
  }
  Flux f;
  f.f_ = std::move(fn);
  f.df_ = std::move(df);
  f.rho_c_ = rho_c;
  f.rhomax_ = rhomax;
  f.curvature_bound_ = curvature_bound;
  return f;
}

double Flux::operator()(double rho) const {
  if (lwr_) return rho * lwr_->vmax * (1.0 - rho / lwr_->rhomax);
  return f_(rho);
}

double Flux::derivative(double rho) const {
  if (lwr_) return lwr_->vmax * (1.0 - 2.0 * rho / lwr_->rhomax);
  return df_(rho);
}

TrafficScenario::TrafficScenario(std::vector<Road> incoming,
                                 std::vector<Road> outgoing)
    : roads_(concatenate(std::move(incoming), std::move(outgoing))),
      m_(0),
      junction_(build_traffic_junction(roads_)) {
  for (const auto& r : roads_) {
    if (r.direction == RoadDirection::Incoming) ++m_;
  }
}

const Road& TrafficScenario::road(int k) const {
  if (k < 1 || k > road_count()) {
    throw DomainError("road id " + std::to_string(k) + " out of range");
  }
  return roads_[k - 1];
}

Lagrangian road_lagrangian(const Road& road) {
  const double g = road.gamma;
  const bool in = road.direction == RoadDirection::Incoming;
  if (const auto& p = road.flux.lwr_parameters()) {
    // H(p) = -+vmax p + vmax g p^2 / rhomax, so L(q) = rhomax (q -+ (-vmax))^2
    // / (4 vmax g).
    const double a = p->rhomax / (4.0 * p->vmax * g);
    return Lagrangian::quadratic(a, in ? -p->vmax : p->vmax, 0.0);
  }
  // H'(p) = -f'(g p) (incoming) or f'(-g p) (outgoing); H'' <= g kappa.
  const Flux flux = road.flux;
  auto h_slope = [flux, g, in](double p) {
    return in ? -flux.derivative(g * p) : flux.derivative(-g * p);
  };
  auto h_value = [flux, g, in](double p) {
    return -flux(in ? g * p : -g * p) / g;
  };
  auto maximizer = [h_slope](double q) {
    return detail::root_from_origin(
        [&](double p) { return h_slope(p) - q; },
        h_slope(0.0) < q ? 1.0 : -1.0, "road Lagrangian");
  };
  auto value = [maximizer, h_value](double q) {
    const double p = maximizer(q);
    return p * q - h_value(p);
  };
  return Lagrangian::from_functions(value, maximizer,
                                    1.0 / (g * flux.curvature_bound()));
}

double road_hamiltonian(const Road& road, double p) {
  const double g = road.gamma;
  if (road.direction == RoadDirection::Incoming) return -road.flux(g * p) / g;
  return -road.flux(-g * p) / g;
}

DemandSupply demand_supply(const Road& road, double rho) {
  const Flux& f = road.flux;
  if (!(rho >= 0.0 && rho <= f.max_density())) {
    throw DomainError("density " + std::to_string(rho) +
                      " outside [0, rhomax]");
  }
  const double peak = f(f.critical_density());
  if (rho <= f.critical_density()) return {f(rho), peak};
  return {peak, f(rho)};
}

double junction_flux(const TrafficScenario& sc, std::span<const double> rho_in,
                     std::span<const double> rho_out) {
  if (static_cast<int>(rho_in.size()) != sc.incoming_count() ||
      static_cast<int>(rho_out.size()) != sc.outgoing_count()) {
    throw DomainError("junction_flux: need one density per road");
  }
  double flux = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= sc.road_count(); ++k) {
    const Road& r = sc.road(k);
    const bool in = k <= sc.incoming_count();
    const double rho = in ? rho_in[k - 1] : rho_out[k - 1 - sc.incoming_count()];
    const DemandSupply ds = demand_supply(r, rho);
    flux = std::min(flux, (in ? ds.demand : ds.supply) / r.gamma);
  }
  return flux;
}

InitialDatum riemann_u0(const TrafficScenario& sc,
                        std::span<const double> rho_in,
                        std::span<const double> rho_out) {
  if (static_cast<int>(rho_in.size()) != sc.incoming_count() ||
      static_cast<int>(rho_out.size()) != sc.outgoing_count()) {
    throw DomainError("riemann_u0: need one density per road");
  }
  std::vector<double> slopes;
  for (int k = 1; k <= sc.road_count(); ++k) {
    const Road& r = sc.road(k);
    const bool in = k <= sc.incoming_count();
    const double rho = in ? rho_in[k - 1] : rho_out[k - 1 - sc.incoming_count()];
    demand_supply(r, rho);  // range check
    slopes.push_back((in ? rho : -rho) / r.gamma);
  }
  return InitialDatum::linear_per_branch(std::move(slopes));
}

DensityField density_field(const TrafficScenario& sc, const GridSolution& sol) {
  if (static_cast<int>(sol.coords.size()) != sc.road_count()) {
    throw DomainError("density_field: grid has " +
                      std::to_string(sol.coords.size()) + " branches, scenario " +
                      std::to_string(sc.road_count()) + " roads");
  }
  DensityField out;
  out.times = sol.times;
  const int roads = sc.road_count();
  out.positions.resize(roads);
  for (int k = 1; k <= roads; ++k) {
    const auto& cs = sol.coords[k - 1];
    if (cs.size() < 2) throw DomainError("density_field: need >= 2 nodes per road");
    auto& xs = out.positions[k - 1];
    const bool in = sc.road(k).direction == RoadDirection::Incoming;
    for (std::size_t idx = 0; idx < cs.size(); ++idx) {
      xs.push_back(in ? -cs[cs.size() - 1 - idx] : cs[idx]);
    }
  }
  out.rho.resize(sol.times.size());
  for (std::size_t n = 0; n < sol.times.size(); ++n) {
    out.rho[n].resize(roads);
    for (int k = 1; k <= roads; ++k) {
      const Road& r = sc.road(k);
      const bool in = r.direction == RoadDirection::Incoming;
      const auto& cs = sol.coords[k - 1];
      const auto& us = sol.values[n][k - 1];
      const std::size_t last = cs.size() - 1;
      std::vector<double> by_coord(cs.size());
      for (std::size_t i = 0; i <= last; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i == last ? last : i + 1;
        const double ux = (us[hi] - us[lo]) / (cs[hi] - cs[lo]);
        double rho = in ? r.gamma * ux : -r.gamma * ux;
        const double rmax = r.flux.max_density();
        if (rho < 0.0 || rho > rmax) {
          const double clamped = std::clamp(rho, 0.0, rmax);
          out.max_overshoot = std::max(out.max_overshoot, std::abs(rho - clamped));
          ++out.clamped;
          rho = clamped;
        }
        by_coord[i] = rho;
      }
      if (in) std::reverse(by_coord.begin(), by_coord.end());
      out.rho[n][k - 1] = std::move(by_coord);
    }
  }
  return out;
}

std::vector<std::pair<double, double>> junction_flux_series(
    const GridSolution& sol) {
  const std::size_t nt = sol.times.size();
  std::vector<std::pair<double, double>> out;
  if (nt < 2) return out;
  for (std::size_t n = 0; n < nt; ++n) {
    const std::size_t lo = n == 0 ? 0 : n - 1;
    const std::size_t hi = n + 1 == nt ? n : n + 1;
    out.emplace_back(sol.times[n],
                     (sol.junction_value(hi) - sol.junction_value(lo)) /
                         (sol.times[hi] - sol.times[lo]));
  }
  return out;
}

}  // namespace junction_hj
