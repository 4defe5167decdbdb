#include "doctest.h"
#include "gtr/ceo.hpp"

using namespace gtr;

namespace {

const Point kZero = Point::finite(0);

}  // namespace

TEST_CASE("deck transformation") {
  SpectralCurve c = parse_curve("dx = z + z^2 dz; dy = dz; keys = [-1, 0]");
  DeckJet d = deck(c, kZero, 6);
  CHECK(d.sigma.coeff(1) == -1);
  CHECK(d.sigma.coeff(2) == Rational(-2, 3));
  // sigma is an involution and preserves x.
  ScalarJet twice = compose(d.sigma, d.sigma, 6);
  CHECK(twice.truncated(6) == ScalarJet::monomial(1, Rational(1), 6));
  ScalarJet x = local_expand(c.dx, kZero, 8).density.primitive();
  CHECK(compose(x, d.sigma, 6).truncated(6) == x.truncated(6));
}

TEST_CASE("deck at the second zero") {
  SpectralCurve c = parse_curve("dx = z + z^2 dz; dy = dz; keys = [-1, 0]");
  DeckJet d = deck(c, Point::finite(-1), 5);
  CHECK(d.sigma.coeff(1) == -1);
  CHECK(compose(d.sigma, d.sigma, 5).truncated(5) == ScalarJet::monomial(1, Rational(1), 5));
}

TEST_CASE("CEO recursion on Airy") {
  CEORecursion e(parse_curve("dx = z dz; dy = dz; keys = [0]"));
  PoleIndex b1{kZero, 1}, b3{kZero, 3};
  CHECK(e.get(0, 3).coefficient({b1, b1, b1}) == 1);
  CHECK(e.get(1, 1).coefficient({b3}) == Rational(1, 24));
}

TEST_CASE("classical and generalized engines agree") {
  for (const char* text : {"dx = z dz; dy = dz; keys = [0]", "dx = z + z^2 dz; dy = dz; keys = [-1, 0]",
                           "dx = z dz; dy = 1 + z dz; keys = [0]"}) {
    SpectralCurve c = parse_curve(text);
    CHECK(ceo_all(c, 3) == generalized_tr(c, 3));
  }
}

TEST_CASE("CEO hypotheses") {
  CHECK_THROWS_WITH_AS(check_ceo_admissible(parse_curve("dx = z^2 dz; dy = dz; keys = [0]")), doctest::Contains("NotSimpleZero"),
                       Error);
  CHECK_THROWS_WITH_AS(check_ceo_admissible(parse_curve("dx = z dz; dy = -1/z^2 dz; keys = [0]")),
                       doctest::Contains("HypothesisViolated"), Error);
  CHECK_NOTHROW(check_ceo_admissible(parse_curve("dx = z dz; dy = dz; keys = [0]")));
}
