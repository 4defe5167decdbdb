#include "doctest.h"
#include "gtr/duality.hpp"

using namespace gtr;

namespace {

RationalFunction rf(const std::string& s) { return parse_expression(s); }

}  // namespace

TEST_CASE("closed formula matches the recursion") {
  SpectralCurve airy = parse_curve("dx = z dz; dy = dz; keys = [0]");
  GeneralizedTR e(airy);
  for (auto [g, n] : {std::pair{0, 3}, {1, 1}, {1, 2}, {0, 4}, {2, 1}})
    CHECK(closed_form_trivial_dual(airy, g, n) == e.get(g, n));
  SpectralCurve two = parse_curve("dx = z + z^2 dz; dy = dz; keys = [-1, 0]");
  GeneralizedTR f(two);
  for (auto [g, n] : {std::pair{0, 3}, {1, 1}, {1, 2}}) CHECK(closed_form_trivial_dual(two, g, n) == f.get(g, n));
}

TEST_CASE("closed formula preconditions") {
  CHECK_THROWS_WITH_AS(closed_form_trivial_dual(parse_curve("dx = z - 1 dz; dy = z + 1 dz; keys = [1]"), 0, 3),
                       doctest::Contains("NotTrivialDual"), Error);
  CHECK_THROWS_AS(closed_form_trivial_dual(parse_curve("dx = z dz; dy = dz; keys = [0]"), 0, 2), Error);
}

TEST_CASE("zhat coefficients") {
  ZHat a = z_hat(rf("1"), 3);
  CHECK(a.c[0] == rf("z"));
  CHECK(a.c[1] == rf("1/2"));
  CHECK(a.c[2].is_zero());
  CHECK(a.c[3].is_zero());
  // y = z^2: d_y = (1/(2z)) d_z.
  ZHat b = z_hat(rf("2 z"), 3);
  CHECK(b.c[1] == rf("1/(4 z)"));
  CHECK(b.c[2] == rf("-1/(32 z^3)"));
  CHECK(b.c[3] == rf("1/(128 z^5)"));
}

TEST_CASE("log shift") {
  SpectralCurve c = parse_curve("dx = z - 2/(z - 1) dz; dy = dz; keys = [-1, 2]");
  auto s = log_shift(c, 4);
  REQUIRE(s.size() == 2);
  CHECK(s.at(2) == rf("-1/48 / (z - 1)^2"));
  CHECK(s.at(4) == rf("7/7680 / (z - 1)^4"));
  CHECK(log_shift(parse_curve("dx = z dz; dy = dz; keys = [0]"), 4).empty());
}

TEST_CASE("dual of a curve with a simple pole of dx") {
  // Every special point is a key, so the duals come from the log shift alone:
  // omega^vee = hbar^{-1} (xhat - x) dy.
  SpectralCurve c = parse_curve("dx = z - 2/(z - 1) dz; dy = dz; keys = [-1, 2]");
  Cells omega = generalized_tr(c, 2);
  Cells vee = xy_dual(c, omega, 2);
  PoleIndex b1{Point::finite(1), 1};
  for (const auto& [gn, w] : vee) {
    if (gn == std::pair{1, 1}) {
      CHECK(w.sorted_terms().size() == 1);
      CHECK(w.coefficient({b1}) == Rational(1, 48));
    } else {
      CHECK(w.is_zero());
    }
  }
}

TEST_CASE("trivial duals and round trip") {
  SpectralCurve airy = parse_curve("dx = z dz; dy = dz; keys = [0]");
  Cells omega = generalized_tr(airy, 2);
  Cells vee = xy_dual(airy, omega, 2);
  for (const auto& [gn, w] : vee) CHECK(w.is_zero());
  CHECK(xy_inverse(airy, vee, 2) == omega);
}

TEST_CASE("mixed curve") {
  SpectralCurve c = parse_curve("dx = z - 1 dz; dy = z + 1 dz; keys = [1]");
  Cells omega = generalized_tr(c, 2);
  LadderResult lr = xy_ladder(c, omega, 2);
  CHECK(lr.stray.empty());
  CHECK(lr.omega == generalized_tr(dual_curve(c), 2));
  for (const auto& [gn, w] : lr.omega) {
    auto s = w.support();
    CHECK((s.empty() || s == std::vector<Point>{Point::finite(-1)}));
  }
  CHECK(xy_inverse(c, lr.omega, 2) == omega);
}

TEST_CASE("wrong input has a non-holomorphic dual") {
  SpectralCurve airy = parse_curve("dx = z dz; dy = dz; keys = [0]");
  Cells omega = generalized_tr(airy, 1);
  coeff_scale(omega.at({1, 1}).tensor(), Rational(2));
  CHECK_THROWS_WITH_AS(xy_dual(airy, omega, 1), doctest::Contains("NonHolomorphicDual"), Error);
}
