#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "junction_hj/errors.hpp"

namespace junction_hj::cli {

namespace {

using nlohmann::json;

double number(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number()) {
    throw ValidationError(where + ": missing numeric field '" + key + "'");
  }
  return obj.at(key).get<double>();
}

std::vector<double> numbers(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ValidationError(where + ": expected an array");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) throw ValidationError(where + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Lagrangian parse_lagrangian(const json& b, std::size_t idx) {
  const std::string where = "branches[" + std::to_string(idx) + "].lagrangian";
  if (!b.is_object() || !b.contains("lagrangian")) {
    throw ValidationError("branches[" + std::to_string(idx) +
                          "]: missing 'lagrangian'");
  }
  const json& l = b.at("lagrangian");
  const std::string type = l.value("type", "quadratic");
  if (type != "quadratic") {
    throw ValidationError(where + ": unsupported type '" + type + "'");
  }
  const double a = number(l, "a", where);
  const double bb = number(l, "b", where);
  const double c = number(l, "c", where);
  if (l.contains("gamma")) {
    return Lagrangian::quadratic(a, bb, c, number(l, "gamma", where));
  }
  return Lagrangian::quadratic(a, bb, c);
}

std::vector<Road> parse_roads(const json& side, const std::string& where) {
  if (!side.is_array()) throw ValidationError(where + ": expected an array");
  std::vector<Road> roads;
  for (std::size_t k = 0; k < side.size(); ++k) {
    const std::string w = where + "[" + std::to_string(k) + "]";
    const json& r = side[k];
    roads.push_back(Road{RoadDirection::Incoming, number(r, "gamma", w),
                         Flux::lwr(number(r, "vmax", w), number(r, "rhomax", w))});
  }
  return roads;
}

GridSpec parse_grid(const json& g, int branches) {
  if (!g.is_object() || !g.contains("t") || !g.contains("x_per_branch")) {
    throw ValidationError("grid: needs 't' and 'x_per_branch'");
  }
  const auto t = numbers(g.at("t"), "grid.t");
  const auto x = numbers(g.at("x_per_branch"), "grid.x_per_branch");
  if (t.size() != 3) throw ValidationError("grid.t must be [t0, t1, nt]");
  if (x.size() != 2) throw ValidationError("grid.x_per_branch must be [xmax, nx]");
  if (t[2] < 2 || x[1] < 2 || t[2] != std::floor(t[2]) ||
      x[1] != std::floor(x[1])) {
    throw ValidationError("grid counts must be integers >= 2");
  }
  return GridSpec::uniform(t[0], t[1], static_cast<int>(t[2]), branches, x[0],
                           static_cast<int>(x[1]));
}

}  // namespace

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) throw ValidationError("scenario must be a JSON object");
  const bool has_branches = doc.contains("branches");
  const bool has_traffic = doc.contains("traffic");
  if (has_branches == has_traffic) {
    throw ValidationError(
        "scenario needs exactly one of 'branches' or 'traffic'");
  }

  std::optional<TrafficScenario> traffic;
  std::optional<Junction> junction;
  if (has_branches) {
    const json& bs = doc.at("branches");
    if (!bs.is_array()) throw ValidationError("branches: expected an array");
    std::vector<Lagrangian> ls;
    for (std::size_t k = 0; k < bs.size(); ++k) {
      ls.push_back(parse_lagrangian(bs[k], k));
    }
    junction.emplace(std::move(ls));
  } else {
    const json& t = doc.at("traffic");
    if (!t.is_object() || !t.contains("incoming") || !t.contains("outgoing")) {
      throw ValidationError("traffic: needs 'incoming' and 'outgoing'");
    }
    traffic.emplace(parse_roads(t.at("incoming"), "traffic.incoming"),
                    parse_roads(t.at("outgoing"), "traffic.outgoing"));
    junction.emplace(traffic->junction());
  }

  InitialDatum initial = InitialDatum::zero();
  std::optional<RiemannDensities> riemann;
  if (doc.contains("initial")) {
    const json& in = doc.at("initial");
    const std::string type = in.is_object() ? in.value("type", "") : "";
    if (type == "zero") {
      // default
    } else if (type == "linear_per_branch") {
      if (!in.contains("slopes")) {
        throw ValidationError("initial: linear_per_branch needs 'slopes'");
      }
      auto slopes = numbers(in.at("slopes"), "initial.slopes");
      if (static_cast<int>(slopes.size()) != junction->size()) {
        throw ValidationError("initial.slopes: need one slope per branch");
      }
      initial = InitialDatum::linear_per_branch(std::move(slopes),
                                                in.value("offset", 0.0));
    } else if (type == "riemann") {
      if (!traffic) {
        throw ValidationError("initial: riemann data needs a traffic scenario");
      }
      if (!in.contains("incoming") || !in.contains("outgoing")) {
        throw ValidationError("initial: riemann needs 'incoming' and 'outgoing'");
      }
      riemann = RiemannDensities{numbers(in.at("incoming"), "initial.incoming"),
                                 numbers(in.at("outgoing"), "initial.outgoing")};
      try {
        initial = riemann_u0(*traffic, riemann->incoming, riemann->outgoing);
      } catch (const DomainError& e) {
        throw ValidationError(std::string("initial: ") + e.what());
      }
    } else {
      throw ValidationError("initial: unknown type '" + type + "'");
    }
  }

  std::optional<GridSpec> grid;
  if (doc.contains("grid")) grid = parse_grid(doc.at("grid"), junction->size());

  return Scenario{std::move(*junction), std::move(traffic), std::move(initial),
                  std::move(riemann), std::move(grid)};
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("scenario '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_scenario(doc);
}

}  // namespace junction_hj::cli
