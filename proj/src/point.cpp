#include "junction_hj/point.hpp"

#include <cmath>
#include <sstream>

#include "junction_hj/errors.hpp"

namespace junction_hj {

Point Point::on(int branch, double coord) {
  if (!std::isfinite(coord) || coord < 0.0) {
    throw DomainError("point coordinate must be finite and nonnegative");
  }
  if (branch < 0) {
    throw DomainError("branch id must be nonnegative");
  }
  if (coord == 0.0 || branch == kJunction) {
    if (coord != 0.0) {
      throw DomainError("the junction point has coordinate 0");
    }
    return Point{};
  }
  return Point{branch, coord};
}

double distance(const Point& a, const Point& b) {
  if (a.is_junction() || b.is_junction() || a.branch() == b.branch()) {
    if (a.is_junction()) return b.coord();
    if (b.is_junction()) return a.coord();
    return std::abs(a.coord() - b.coord());
  }
  return a.coord() + b.coord();
}

Point scaled(const Point& p, double factor) {
  if (p.is_junction()) return p;
  return Point::on(p.branch(), p.coord() * factor);
}

Point parse_point(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw DomainError("point must be written B:COORD, got '" + text + "'");
  }
  try {
    std::size_t used_b = 0;
    std::size_t used_c = 0;
    const std::string b = text.substr(0, colon);
    const std::string c = text.substr(colon + 1);
    const int branch = std::stoi(b, &used_b);
    const double coord = std::stod(c, &used_c);
    if (used_b != b.size() || used_c != c.size()) {
      throw std::invalid_argument(text);
    }
    return Point::on(coord == 0.0 ? kJunction : branch, coord);
  } catch (const std::logic_error&) {
    throw DomainError("point must be written B:COORD, got '" + text + "'");
  }
}

std::string to_string(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << p.branch() << ':' << p.coord();
  return os.str();
}

}  // namespace junction_hj
