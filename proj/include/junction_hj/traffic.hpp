#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "junction_hj/hopf_lax.hpp"
#include "junction_hj/junction.hpp"

namespace junction_hj {

enum class RoadDirection { Incoming, Outgoing };

struct LwrParameters {
  double vmax;
  double rhomax;
};

/// Concave flux rho -> f(rho) on [0, rhomax] with a unique maximizer rho_c.
class Flux {
 public:
  using Function = std::function<double(double)>;

  /// f(rho) = rho vmax (1 - rho / rhomax).
  static Flux lwr(double vmax, double rhomax);

  /// A general concave flux. `f` and `df` must be defined on the whole real
  /// line (the Hamiltonian evaluates them outside [0, rhomax]);
  /// `curvature_bound` is an upper bound on -f''.
  static Flux custom(Function f, Function df, double rho_c, double rhomax,
                     double curvature_bound);

  double operator()(double rho) const;
  double derivative(double rho) const;
  double critical_density() const { return rho_c_; }
  double max_density() const { return rhomax_; }
  double curvature_bound() const { return curvature_bound_; }
  const std::optional<LwrParameters>& lwr_parameters() const { return lwr_; }

 private:
  Flux() = default;

  std::optional<LwrParameters> lwr_;
  Function f_;
  Function df_;
  double rho_c_ = 0.0;
  double rhomax_ = 0.0;
  double curvature_bound_ = 0.0;
};

struct Road {
  RoadDirection direction;
  double gamma;  ///< turning fraction in (0, 1]
  Flux flux;
};

struct DemandSupply {
  double demand;
  double supply;
};

/// m incoming roads (branches 1..m) and n outgoing roads (branches
/// m+1..m+n) meeting at one junction.
class TrafficScenario {
 public:
  /// Throws ValidationError when a side is empty, a turning fraction lies
  /// outside (0, 1], the fractions of a side do not sum to 1 within 1e-12,
  /// or a flux fails its concavity probe.
  TrafficScenario(std::vector<Road> incoming, std::vector<Road> outgoing);

  int incoming_count() const { return m_; }
  int outgoing_count() const { return static_cast<int>(roads_.size()) - m_; }
  int road_count() const { return static_cast<int>(roads_.size()); }
  /// Road for branch id k in 1..m+n.
  const Road& road(int k) const;
  const Junction& junction() const { return junction_; }

 private:
  std::vector<Road> roads_;
  int m_;
  Junction junction_;
};

/// Lagrangian of a road: the conjugate of its Hamiltonian. Closed form for
/// LWR fluxes, numerical conjugation otherwise.
Lagrangian road_lagrangian(const Road& road);

/// Incoming: -f(gamma p) / gamma. Outgoing: -f(-gamma p) / gamma.
double road_hamiltonian(const Road& road, double p);

inline Junction traffic_junction(std::vector<Road> incoming,
                                 std::vector<Road> outgoing) {
  return TrafficScenario(std::move(incoming), std::move(outgoing)).junction();
}

/// Lebacque demand and supply at density rho. Throws DomainError for rho
/// outside [0, rhomax].
DemandSupply demand_supply(const Road& road, double rho);

/// min over incoming roads of D / gamma and over outgoing roads of S / gamma.
double junction_flux(const TrafficScenario& sc, std::span<const double> rho_in,
                     std::span<const double> rho_out);

/// u0 = (rho / gamma) x on incoming branches and -(rho / gamma) x on
/// outgoing branches, from one constant density per road.
InitialDatum riemann_u0(const TrafficScenario& sc,
                        std::span<const double> rho_in,
                        std::span<const double> rho_out);

/// Densities recovered from a gridded solution, in road coordinates X
/// (negative on incoming roads), X ascending.
struct DensityField {
  std::vector<double> times;
  std::vector<std::vector<double>> positions;        ///< [road k-1][idx]
  std::vector<std::vector<std::vector<double>>> rho;  ///< [n][road k-1][idx]
  std::size_t clamped = 0;       ///< nodes pulled back into [0, rhomax]
  double max_overshoot = 0.0;    ///< largest distance clamped away
};

DensityField density_field(const TrafficScenario& sc, const GridSolution& sol);

/// (t, u_t(t, 0)) per time row: the car flux through the junction.
/// Centered differences inside, one-sided at the first and last rows.
std::vector<std::pair<double, double>> junction_flux_series(
    const GridSolution& sol);

}  // namespace junction_hj
