// Points of the Riemann sphere: finite rationals and infinity.
#pragma once

#include <cstdint>
#include <string>

#include "gtr/rational.hpp"

namespace gtr {

struct Point {
  bool infinite = false;
  Rational value;  // meaningful only when finite

  static Point finite(const Rational& v) { return Point{false, v}; }
  static Point infinity() { return Point{true, Rational(0)}; }

  /// Finite points ascending, then infinity.
  friend bool operator<(const Point& a, const Point& b) {
    if (a.infinite != b.infinite) return b.infinite;
    if (a.infinite) return false;
    return a.value < b.value;
  }
  friend bool operator==(const Point& a, const Point& b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }

  /// "inf" or the canonical fraction.
  std::string str() const { return infinite ? "inf" : value.get_str(); }
};

/// Parses "inf", "oo", "infinity" or a rational literal.
Point parse_point(const std::string& text);

/// Process-wide interning of points to small ids (1-based, thread-safe).
std::uint8_t point_id(const Point& p);
const Point& point_of(std::uint8_t id);

}  // namespace gtr
