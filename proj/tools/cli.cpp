#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "junction_hj/errors.hpp"
#include "junction_hj/hopf_lax.hpp"
#include "junction_hj/minimal_action.hpp"
#include "junction_hj/oracle.hpp"
#include "junction_hj/traffic.hpp"
#include "junction_hj/verify.hpp"
#include "scenario.hpp"

namespace junction_hj::cli {

namespace {

using nlohmann::json;

json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string format(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << content;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

const GridSpec& require_grid(const Scenario& sc) {
  if (!sc.grid) throw ValidationError("scenario has no 'grid' section");
  return *sc.grid;
}

std::string solution_csv(const GridSolution& sol) {
  std::ostringstream os;
  os << "t,branch,x,u\n";
  for (std::size_t n = 0; n < sol.times.size(); ++n) {
    const std::string t = format(sol.times[n]);
    os << t << ",0,0," << format(sol.junction_value(n)) << '\n';
    for (std::size_t b = 0; b < sol.coords.size(); ++b) {
      for (std::size_t k = 1; k < sol.coords[b].size(); ++k) {
        os << t << ',' << b + 1 << ',' << format(sol.coords[b][k]) << ','
           << format(sol.values[n][b][k]) << '\n';
      }
    }
  }
  return os.str();
}

std::string flux_path_for(const std::string& out) {
  const std::string ext = ".csv";
  if (out.size() > ext.size() &&
      out.compare(out.size() - ext.size(), ext.size(), ext) == 0) {
    return out.substr(0, out.size() - ext.size()) + "_flux.csv";
  }
  return out + "_flux.csv";
}

struct VerifySettings {
  std::string suite = "all";
  int samples = 100;
  std::uint64_t seed = 20240611;
  int n_tau = 2000;
  int refine = 3;
  double oracle_tol = 1e-5;
  double identity_tol = 1e-8;
  double k_tol = 1e-10;
  double c1_tol = 1e-6;
  double dpp_tol = 2e-3;
  double residual_tol = 5e-2;
  double flux_tol = 1e-2;
};

GridSpec verification_grid(const Scenario& sc) {
  if (sc.grid) return *sc.grid;
  return GridSpec::uniform(0.0, 1.0, 3, sc.junction.size(), 2.0, 21);
}

/// A strictly larger datum: u0 plus a positive piecewise-linear bump per
/// branch.
InitialDatum raised(const InitialDatum& u0, int branches, verify::Rng& rng) {
  std::uniform_real_distribution<double> bump(0.01, 0.5);
  std::vector<std::vector<std::pair<double, double>>> nodes(branches);
  const double at0 = bump(rng);
  for (auto& br : nodes) {
    br = {{0.0, at0}, {0.5, bump(rng)}, {1.0, bump(rng)}, {2.0, bump(rng)}};
    br.push_back({3.0, br.back().second});
  }
  const InitialDatum g = InitialDatum::piecewise_linear(nodes);
  std::vector<std::vector<double>> bps(branches);
  for (int b = 1; b <= branches; ++b) {
    for (double c : u0.breakpoints(b)) bps[b - 1].push_back(c);
    for (double c : g.breakpoints(b)) bps[b - 1].push_back(c);
  }
  return InitialDatum([u0, g](const Point& p) { return u0(p) + g(p); },
                      u0.lipschitz() + g.lipschitz(), std::move(bps));
}

std::vector<verify::CheckResult> run_suite(const std::string& name,
                                           const Scenario& sc,
                                           const VerifySettings& vs) {
  const Junction& J = sc.junction;
  verify::Rng rng(vs.seed);
  std::vector<verify::CheckResult> out;
  if (name == "conjugation") {
    out.push_back(verify::conjugate_involution(J, vs.samples, 1e-9));
  } else if (name == "k-identities") {
    out.push_back(verify::k_identities(J, vs.samples, rng, vs.k_tol, 1e-3));
  } else if (name == "oracle") {
    OracleConfig cfg;
    cfg.n_tau = vs.n_tau;
    cfg.refine = vs.refine;
    out.push_back(verify::oracle_equivalence(J, vs.samples, cfg, vs.oracle_tol, rng));
  } else if (name == "coercivity") {
    out.push_back(verify::coercivity(J, vs.samples * 100, rng, 1e-12));
  } else if (name == "c1-matching") {
    out.push_back(verify::c1_matching(J, std::max(vs.samples / 2, 1), vs.c1_tol));
  } else if (name == "pde-identities") {
    out.push_back(verify::interior_identities(J, vs.samples, rng, vs.identity_tol));
    out.push_back(verify::edge_values(J, std::max(vs.samples / 2, 1), rng,
                                      vs.identity_tol));
    out.push_back(verify::edge_junction_conditions(
        J, std::max(vs.samples / 2, 1), rng, vs.identity_tol));
  } else if (name == "hopf-lax") {
    const GridSpec grid = verification_grid(sc);
    const GridSolution base = solve_grid(J, sc.initial, grid);
    const double c = 0.375;
    const GridSolution shifted = solve_grid(J, sc.initial.shifted(c), grid);
    verify::CheckResult shift{"shift-equivariance"};
    verify::CheckResult order{"comparison"};
    const GridSolution upper =
        solve_grid(J, raised(sc.initial, J.size(), rng), grid);
    for (std::size_t n = 0; n < grid.times.size(); ++n) {
      for (std::size_t b = 0; b < grid.coords.size(); ++b) {
        for (std::size_t k = 0; k < grid.coords[b].size(); ++k) {
          const double u = base.values[n][b][k];
          shift.record(std::abs(shifted.values[n][b][k] - (u + c)), 1e-12);
          order.record(std::max(0.0, u - upper.values[n][b][k]), 0.0);
        }
      }
    }
    for (auto* r : {&shift, &order}) {
      r->passed = r->failures == 0;
      r->detail = std::to_string(r->checked) + " nodes, " +
                  std::to_string(r->failures) + " failures, worst " +
                  format(r->worst);
      out.push_back(*r);
    }
  } else if (name == "time-bound") {
    out.push_back(verify::time_bound(solve_grid(J, sc.initial, verification_grid(sc))));
  } else if (name == "dpp") {
    const GridSpec grid = verification_grid(sc);
    const GridSolution sol = solve_grid(J, sc.initial, grid);
    const std::size_t last = grid.times.size() - 1;
    verify::CheckResult r{"dpp"};
    if (last >= 2) {
      const DppReport rep = dpp_check(J, sol, last / 2, last);
      r.checked = rep.checked;
      r.worst = rep.max_defect;
      r.failures = rep.max_defect <= vs.dpp_tol ? 0 : 1;
      r.passed = r.failures == 0 && rep.checked > 0;
      r.detail = std::to_string(rep.checked) + " nodes (" +
                 std::to_string(rep.skipped) + " skipped), max defect " +
                 format(rep.max_defect);
    } else {
      r.detail = "grid needs at least 3 time rows; nothing to check";
    }
    out.push_back(r);
  } else if (name == "residual") {
    const GridSpec grid = verification_grid(sc);
    verify::CheckResult r{"residual"};
    if (grid.times.size() >= 3) {
      const ResidualReport rep =
          residual_check(J, solve_grid(J, sc.initial, grid));
      r.checked = rep.smooth_nodes + rep.junction_nodes;
      r.worst = std::max(rep.max_smooth, rep.max_junction);
      r.failures = r.worst <= vs.residual_tol ? 0 : 1;
      r.passed = r.failures == 0;
      r.detail = std::to_string(rep.smooth_nodes) + " smooth, " +
                 std::to_string(rep.junction_nodes) + " junction, " +
                 std::to_string(rep.kink_nodes) + " kink nodes; max residual " +
                 format(r.worst);
    } else {
      r.detail = "grid needs at least 3 time rows; nothing to check";
    }
    out.push_back(r);
  } else if (name == "traffic") {
    verify::CheckResult r{"junction-flux"};
    if (sc.traffic && sc.riemann) {
      const double expected =
          junction_flux(*sc.traffic, sc.riemann->incoming, sc.riemann->outgoing);
      constexpr double h = 1e-3;
      for (double t : {0.2, 0.4, 0.6, 0.8, 1.0}) {
        const double up = solve_point(J, sc.initial, t + h, Point::junction()).value;
        const double down = solve_point(J, sc.initial, t - h, Point::junction()).value;
        r.record(std::abs((up - down) / (2.0 * h) - expected), vs.flux_tol);
      }
      r.passed = r.failures == 0;
      r.detail = "expected flux " + format(expected) + ", worst deviation " +
                 format(r.worst);
    } else {
      r.detail = "scenario has no Riemann traffic data; nothing to check";
    }
    out.push_back(r);
  } else {
    throw ValidationError("unknown verify suite '" + name + "'");
  }
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "conjugation", "k-identities", "oracle",   "coercivity",
      "c1-matching", "pde-identities", "hopf-lax", "time-bound",
      "dpp",         "residual",     "traffic"};
  return names;
}

int run_verify(const Scenario& sc, const VerifySettings& vs, std::ostream& out) {
  std::vector<std::string> suites;
  if (vs.suite == "all") {
    suites = suite_names();
  } else {
    suites = {vs.suite};
  }
  bool ok = true;
  for (const auto& s : suites) {
    for (const auto& r : run_suite(s, sc, vs)) {
      out << (r.passed ? "PASS " : "FAIL ") << s << '/' << r.name << ": "
          << r.detail << '\n';
      ok = ok && r.passed;
    }
  }
  out << (ok ? "verify: all suites passed\n" : "verify: FAILED\n");
  return ok ? kExitOk : kExitFailure;
}

json action_json(const ActionResult& r) {
  json j;
  j["value"] = number_or_null(r.value);
  j["regime"] = to_string(r.regime);
  j["tau1"] = number_or_null(r.tau1);
  j["tau2"] = number_or_null(r.tau2);
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Hamilton-Jacobi equations on a junction: minimal action, "
               "Hopf-Lax solutions and traffic flux",
               "junction-hj"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string from = "0:0", to = "0:0";
  double t0 = 0.0, t1 = 1.0;
  std::string out_path, flux_out;
  SolveOptions solve_opts;
  VerifySettings vs;
  OracleConfig oc;

  auto add_scenario = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario_path, "Scenario JSON file")
        ->required();
  };
  auto add_solver_flags = [&](CLI::App* sub) {
    sub->add_option("--search-nodes", solve_opts.search_nodes,
                    "Grid nodes per branch in the Hopf-Lax search")
        ->check(CLI::PositiveNumber);
    sub->add_option("--brackets", solve_opts.max_refined_brackets,
                    "Local-minimum brackets refined per point");
    sub->add_option("--radius-safety", solve_opts.radius_safety,
                    "Factor applied to the coercivity search radius");
  };
  auto add_endpoints = [&](CLI::App* sub) {
    sub->add_option("--from", from, "Start point B:COORD")->required();
    sub->add_option("--to", to, "End point B:COORD")->required();
    sub->add_option("--t0", t0, "Start time");
    sub->add_option("--t1", t1, "End time");
  };

  auto* action_cmd = app.add_subcommand("action", "Minimal action D(t0,from;t1,to)");
  add_scenario(action_cmd);
  add_endpoints(action_cmd);

  auto* solve_cmd = app.add_subcommand("solve", "Hopf-Lax solution on the scenario grid");
  add_scenario(solve_cmd);
  solve_cmd->add_option("--out", out_path, "Output CSV (t,branch,x,u)")->required();
  add_solver_flags(solve_cmd);

  auto* traffic_cmd = app.add_subcommand("traffic", "Densities and junction flux");
  add_scenario(traffic_cmd);
  traffic_cmd->add_option("--out", out_path, "Output CSV (t,road,X,rho)")->required();
  traffic_cmd->add_option("--flux-out", flux_out,
                          "Flux CSV (t,junction_flux); default <out>_flux.csv");
  add_solver_flags(traffic_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Run invariant suites");
  add_scenario(verify_cmd);
  verify_cmd->add_option("--suite", vs.suite, "Suite name or 'all'");
  verify_cmd->add_option("--samples", vs.samples, "Random samples per suite")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", vs.seed, "Random seed");
  verify_cmd->add_option("--n-tau", vs.n_tau, "Oracle time-grid size");
  verify_cmd->add_option("--refine", vs.refine, "Oracle refinement rounds");
  verify_cmd->add_option("--oracle-tol", vs.oracle_tol, "Closed form vs oracle");
  verify_cmd->add_option("--identity-tol", vs.identity_tol, "PDE identities");
  verify_cmd->add_option("--k-tol", vs.k_tol, "K identity residual");
  verify_cmd->add_option("--c1-tol", vs.c1_tol, "Gradient matching");
  verify_cmd->add_option("--dpp-tol", vs.dpp_tol, "Dynamic programming defect");
  verify_cmd->add_option("--residual-tol", vs.residual_tol, "PDE residual");
  verify_cmd->add_option("--flux-tol", vs.flux_tol, "Junction flux deviation");

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force references");
  oracle_cmd->require_subcommand(1);
  auto add_oracle_flags = [&](CLI::App* sub) {
    sub->add_option("--n-tau", oc.n_tau, "Time-grid points per axis");
    sub->add_option("--n-y", oc.n_y, "Space-grid points per branch");
    sub->add_option("--radius", oc.radius, "Space search radius");
    sub->add_option("--refine", oc.refine, "Local refinement rounds");
  };
  auto* oracle_action = oracle_cmd->add_subcommand("action", "Brute-force minimal action");
  add_scenario(oracle_action);
  add_endpoints(oracle_action);
  add_oracle_flags(oracle_action);
  auto* oracle_solve = oracle_cmd->add_subcommand("solve", "Brute-force Hopf-Lax grid");
  add_scenario(oracle_solve);
  oracle_solve->add_option("--out", out_path, "Output CSV (t,branch,x,u)")->required();
  add_oracle_flags(oracle_solve);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const Scenario sc = load_scenario(scenario_path);
    const Junction& J = sc.junction;

    if (*action_cmd) {
      const ActionResult r = action(J, t0, parse_point(from), t1, parse_point(to));
      out << action_json(r).dump() << '\n';
      return kExitOk;
    }
    if (*solve_cmd) {
      const GridSolution sol = solve_grid(J, sc.initial, require_grid(sc), solve_opts);
      write_file(out_path, solution_csv(sol));
      return kExitOk;
    }
    if (*traffic_cmd) {
      if (!sc.traffic) throw ValidationError("scenario has no 'traffic' section");
      const GridSolution sol = solve_grid(J, sc.initial, require_grid(sc), solve_opts);
      const DensityField field = density_field(*sc.traffic, sol);
      std::ostringstream csv;
      csv << "t,road,X,rho\n";
      for (std::size_t n = 0; n < field.times.size(); ++n) {
        for (std::size_t k = 0; k < field.positions.size(); ++k) {
          for (std::size_t i = 0; i < field.positions[k].size(); ++i) {
            csv << format(field.times[n]) << ',' << k + 1 << ','
                << format(field.positions[k][i]) << ','
                << format(field.rho[n][k][i]) << '\n';
          }
        }
      }
      write_file(out_path, csv.str());
      std::ostringstream fcsv;
      fcsv << "t,junction_flux\n";
      for (const auto& [t, f] : junction_flux_series(sol)) {
        fcsv << format(t) << ',' << format(f) << '\n';
      }
      write_file(flux_out.empty() ? flux_path_for(out_path) : flux_out, fcsv.str());
      if (field.clamped > 0) {
        err << "note: " << field.clamped
            << " density samples clamped to [0, rhomax], largest overshoot "
            << format(field.max_overshoot) << '\n';
      }
      if (sc.riemann) {
        out << "lebacque_flux,"
            << format(junction_flux(*sc.traffic, sc.riemann->incoming,
                                    sc.riemann->outgoing))
            << '\n';
      }
      return kExitOk;
    }
    if (*verify_cmd) return run_verify(sc, vs, out);
    if (*oracle_action) {
      oc.validate();
      const Point y = parse_point(from);
      const Point x = parse_point(to);
      if (!(t1 > t0)) throw DomainError("oracle action needs t1 > t0");
      const double h = t1 - t0;
      const double v = h * brute_force_d0(J, scaled(y, 1.0 / h), scaled(x, 1.0 / h), oc);
      json j;
      j["value"] = number_or_null(v);
      out << j.dump() << '\n';
      return kExitOk;
    }
    if (*oracle_solve) {
      const GridSpec& grid = require_grid(sc);
      GridSolution sol{grid.times, grid.coords, {}, J, sc.initial};
      sol.values.resize(grid.times.size());
      for (std::size_t n = 0; n < grid.times.size(); ++n) {
        const double t = grid.times[n];
        auto u_at = [&](const Point& x) {
          return t == 0.0 ? sc.initial(x) : brute_force_solve(J, sc.initial, t, x, oc);
        };
        const double uj = u_at(Point::junction());
        sol.values[n].resize(J.size());
        for (int b = 1; b <= J.size(); ++b) {
          auto& row = sol.values[n][b - 1];
          row.assign(grid.coords[b - 1].size(), uj);
          for (std::size_t k = 1; k < row.size(); ++k) {
            row[k] = u_at(Point::on(b, grid.coords[b - 1][k]));
          }
        }
      }
      write_file(out_path, solution_csv(sol));
      return kExitOk;
    }
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ValidationError& e) {
    err << "invalid scenario: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace junction_hj::cli
