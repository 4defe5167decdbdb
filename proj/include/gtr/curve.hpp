// Genus-0 spectral curves: the forms dx, dy, the key set and point classification.
#pragma once

#include <string>
#include <vector>

#include "gtr/forms.hpp"

namespace gtr {

struct SpectralCurve {
  OneForm dx, dy;
  std::vector<Point> keys;  // sorted, unique
  std::string label;
};

struct PointClassification {
  Point point;
  int r = 0, s = 0;
  bool special = false;
};

PointClassification classify(const SpectralCurve& c, const Point& q);

/// All special points, sorted. Throws IrrationalSpecialPoint if one is not rational.
std::vector<PointClassification> special_points(const SpectralCurve& c);

/// Zeros and poles of dx and dy plus infinity (all rational), sorted.
std::vector<Point> critical_points(const SpectralCurve& c);

/// Builds a curve and checks that all keys are special.
SpectralCurve make_curve(const RationalFunction& dx, const RationalFunction& dy, std::vector<Point> keys,
                         std::string label = {});

/// dx and dy swapped, keys replaced by the remaining special points.
SpectralCurve dual_curve(const SpectralCurve& c);

/// dx = z^{r-1} dz, dy = z^{s-1} dz with key 0; labelled like "(z^2/2, z^-1)".
SpectralCurve monomial_curve(int r, int s);

/// Parses `dx = <expr> dz; dy = <expr> dz; keys = [..]`.
SpectralCurve parse_curve(const std::string& text);
/// Parses a rational expression in z.
RationalFunction parse_expression(const std::string& text);

/// Canonical text of the curve; stable across runs.
std::string curve_text(const SpectralCurve& c);
/// FNV-1a of curve_text, as 16 hex digits.
std::string curve_hash(const SpectralCurve& c);

}  // namespace gtr
