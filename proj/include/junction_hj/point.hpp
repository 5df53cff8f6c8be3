#pragma once

#include <string>

namespace junction_hj {

/// Branch id reserved for the junction point.
inline constexpr int kJunction = 0;

/// A location on the junction: a branch id in 1..N and the distance from the
/// junction point along that branch. Coordinate 0 is always stored as the
/// junction point, whatever branch was requested.
class Point {
 public:
  Point() = default;

  static Point junction() { return Point{}; }

  /// Throws DomainError for a negative or non-finite coordinate or a negative
  /// branch id.
  static Point on(int branch, double coord);

  int branch() const { return branch_; }
  double coord() const { return coord_; }
  bool is_junction() const { return branch_ == kJunction; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  Point(int branch, double coord) : branch_(branch), coord_(coord) {}

  int branch_ = kJunction;
  double coord_ = 0.0;
};

/// Geodesic distance on the junction.
double distance(const Point& a, const Point& b);

/// Point with its coordinate multiplied by `factor` (> 0).
Point scaled(const Point& p, double factor);

/// "B:COORD" (e.g. "2:0.5", "0:0" for the junction point).
Point parse_point(const std::string& text);

std::string to_string(const Point& p);

}  // namespace junction_hj
