#include "doctest.h"
#include "gtr/gentr.hpp"
#include "testing.hpp"

using namespace gtr;
using gtr::testing::Gen;

namespace {

const Point kZero = Point::finite(0);

SpectralCurve airy() { return parse_curve("dx = z dz; dy = dz; keys = [0]"); }

PoleIndex b0(int k) { return PoleIndex{kZero, k}; }

}  // namespace

TEST_CASE("Airy cells") {
  GeneralizedTR e(airy());
  const MultiDifferential& w03 = e.get(0, 3);
  CHECK(w03.sorted_terms().size() == 1);
  CHECK(w03.coefficient({b0(1), b0(1), b0(1)}) == 1);
  const MultiDifferential& w11 = e.get(1, 1);
  CHECK(w11.sorted_terms().size() == 1);
  CHECK(w11.coefficient({b0(3)}) == Rational(1, 24));
  const MultiDifferential& w12 = e.get(1, 2);
  CHECK(w12.coefficient({b0(1), b0(5)}) == Rational(1, 8));
  CHECK(w12.coefficient({b0(5), b0(1)}) == Rational(1, 8));
  CHECK(w12.coefficient({b0(3), b0(3)}) == Rational(1, 24));
  CHECK(w12.sorted_terms().size() == 2);
}

TEST_CASE("Bessel-type curve") {
  GeneralizedTR e(parse_curve("dx = z dz; dy = -1/z^2 dz; keys = [0]"));
  CHECK(e.get(1, 1).coefficient({b0(1)}) == Rational(1, 8));
  CHECK(e.get(1, 1).sorted_terms().size() == 1);
  CHECK(e.get(0, 3).is_zero());
  CHECK(e.get(1, 2).coefficient({b0(1), b0(1)}) == Rational(1, 8));
}

TEST_CASE("no keys gives zero") {
  auto cells = generalized_tr(parse_curve("dx = dz; dy = dz; keys = []"), 4);
  CHECK(cells.size() == 10);  // chi = 1..4
  for (const auto& [gn, w] : cells) CHECK(w.is_zero());
}

TEST_CASE("unstable cells are not stored") {
  GeneralizedTR e(airy());
  CHECK_THROWS_AS(e.get(0, 2), Error);
  CHECK_THROWS_AS(e.get(0, 1), Error);
  CHECK(e.cell(0, 2, 0) == nullptr);
}

TEST_CASE("rescaling dx scales cells by alpha^(2-2g-n)") {
  Gen g;
  for (int i = 0; i < 3; ++i) {
    Rational alpha = g.nonzero_rational(5);
    Rational a = g.rational(3);
    // dx = z (1 + a z) dz, dy = dz, with keys at both zeros when a != 0.
    Polynomial X = Polynomial::z() + Polynomial::monomial(2, a);
    std::vector<Point> keys{kZero};
    if (sgn(a) != 0) keys.push_back(Point::finite(-1 / a));
    SpectralCurve c = make_curve(RationalFunction(X), RationalFunction(Polynomial(1)), keys);
    SpectralCurve s = make_curve(RationalFunction(X.scaled(alpha)), RationalFunction(Polynomial(1)), keys);
    auto w = generalized_tr(c, 2), v = generalized_tr(s, 2);
    for (const auto& [gn, cell] : w) {
      SpecTensor t = cell.tensor();
      Rational f = 1;
      int p = 2 - 2 * gn.first - gn.second;
      for (int j = 0; j < -p; ++j) f /= alpha;
      coeff_scale(t, f);
      CHECK(t == v.at(gn).tensor());
    }
  }
}

TEST_CASE("cells are symmetric on random polynomial dy") {
  Gen g;
  for (int i = 0; i < 4; ++i) {
    Polynomial Y(1);
    Y.add_term(1, g.rational(3));
    Y.add_term(2, g.rational(3));
    SpectralCurve c = make_curve(RationalFunction(Polynomial::z()), RationalFunction(Y), {kZero});
    for (const auto& [gn, w] : generalized_tr(c, 3)) CHECK(symmetry_defect(w) == 0);
  }
}

TEST_CASE("parallel evaluation and audit give the same bytes") {
  SpectralCurve c = parse_curve("dx = z + z^2 dz; dy = dz; keys = [-1, 0]");
  EngineOptions par;
  par.jobs = 3;
  EngineOptions audit;
  audit.audit = true;
  auto a = generalized_tr(c, 2), b = generalized_tr(c, 2, par), d = generalized_tr(c, 2, audit);
  CHECK(a == b);
  CHECK(a == d);
  for (const auto& [gn, w] : a) CHECK(to_json(w).dump() == to_json(b.at(gn)).dump());
}

TEST_CASE("a key at infinity") {
  // Airy written in w = 1/z: x = 1/(2 w^2), y = 1/w.
  GeneralizedTR e(parse_curve("dx = -z^-3 dz; dy = -z^-2 dz; keys = [inf]"));
  PoleIndex i3{Point::infinity(), 3};
  CHECK(e.get(1, 1).coefficient({i3}) == Rational(1, 24));
  PoleIndex i1{Point::infinity(), 1};
  CHECK(e.get(0, 3).coefficient({i1, i1, i1}) == 1);
}

TEST_CASE("W-series at a key") {
  GeneralizedTR e(airy());
  e.get(1, 1);
  std::vector<TensorJet> W = e.W_at(kZero, 0, 3, 20);
  // [u^0] W^{(0)}_2 is omega^{(0)}_3 expanded at 0: b_{0,1}(zeta) = -zeta^{-2} dzeta.
  REQUIRE(!W.empty());
  SpecTensor lead = W[0].coeff(-2);
  SlotKey k{};
  k[1] = make_index(kZero, 1);
  k[2] = make_index(kZero, 1);
  CHECK(lead.terms.at(k) == -1);
}

TEST_CASE("projection with output caps matches the full omega-bar jet") {
  for (const char* text : {"dx = z dz; dy = dz; keys = [0]", "dx = z dz; dy = -1/z^2 dz; keys = [0]",
                           "dx = z^2 dz; dy = 1 + z dz; keys = [0]"}) {
    GeneralizedTR e(parse_curve(text));
    for (auto [g, n] : {std::pair{0, 3}, {1, 1}, {0, 4}, {1, 2}, {2, 1}, {1, 3}}) {
      CAPTURE(text);
      CAPTURE(g);
      CAPTURE(n);
      SpecTensor full = principal_part(e.omega_bar(kZero, g, n, 48), kZero, 0);
      CHECK(full == e.get(g, n).tensor());
    }
  }
}
