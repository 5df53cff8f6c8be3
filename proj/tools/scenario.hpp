#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "junction_hj/hopf_lax.hpp"
#include "junction_hj/junction.hpp"
#include "junction_hj/traffic.hpp"

namespace junction_hj::cli {

struct RiemannDensities {
  std::vector<double> incoming;
  std::vector<double> outgoing;
};

/// A parsed scenario file. Exactly one of "branches" / "traffic" defines the
/// junction; "initial" defaults to u0 = 0.
struct Scenario {
  Junction junction;
  std::optional<TrafficScenario> traffic;
  InitialDatum initial;
  std::optional<RiemannDensities> riemann;
  std::optional<GridSpec> grid;
};

/// Throws ValidationError naming the offending field.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

}  // namespace junction_hj::cli
