#include "doctest.h"
#include "gtr/forms.hpp"
#include "testing.hpp"

using namespace gtr;
using gtr::testing::Gen;
using gtr::testing::q;

namespace {

const Point kZero = Point::finite(0);
const Point kInf = Point::infinity();

RationalFunction z() { return RationalFunction(Polynomial::z()); }

}  // namespace

TEST_CASE("local expansions") {
  FormJet a = local_expand(OneForm{z()}, kZero, 3);
  CHECK(a.density == ScalarJet::monomial(1, q(1)));
  FormJet b = local_expand(OneForm{z()}, kInf, 3);
  CHECK(b.density == ScalarJet::monomial(-3, q(-1)));
  FormJet c = local_expand(OneForm{RationalFunction(1) / z()}, kZero, 3);
  CHECK(c.density == ScalarJet::monomial(-1, q(1)));
  CHECK(form_valuation(OneForm{z()}, kInf) == -3);

  // 1/(1 - z) at 0
  FormJet d = local_expand(OneForm{RationalFunction(Polynomial(1), Polynomial(1) - Polynomial::z())}, kZero, 3);
  CHECK(d.density.trunc() == 3);
  CHECK(d.density.coeff(0) == 1);
  CHECK(d.density.coeff(2) == 1);
}

TEST_CASE("residues") {
  CHECK(residue_at(local_expand(OneForm{RationalFunction(1) / z()}, kZero, 2)) == 1);
  CHECK(residue_at(local_expand(OneForm{z().pow(3)}, kZero, 2)) == 0);
  CHECK(residue_at(local_expand(OneForm{RationalFunction(1) / z()}, kInf, 2)) == -1);
  ScalarJet hidden(-1);
  CHECK_THROWS_AS(residue_at(FormJet{kZero, hidden}), Error);
}

TEST_CASE("residue theorem on random forms") {
  Gen g;
  for (int i = 0; i < 200; ++i) {
    // Denominator with rational roots so every pole is visible.
    Polynomial den(1);
    int poles = static_cast<int>(g.integer(0, 3));
    for (int p = 0; p < poles; ++p) den *= Polynomial::z() - Polynomial(Rational(g.integer(-4, 4)));
    RationalFunction f(g.polynomial(3), den);
    if (f.is_zero()) continue;
    OneForm w{f};
    Rational total = residue_at(local_expand(w, kInf, 2));
    for (const auto& [root, mult] : rational_roots(f.den()).roots) total += residue_at(local_expand(w, Point::finite(root), 2));
    CHECK(total == 0);
  }
}

TEST_CASE("apply_inv_d") {
  FormJet dz{kZero, ScalarJet::monomial(0, q(1))};
  CHECK(apply_inv_d(FormJet{kZero, ScalarJet::monomial(1, q(1))}, dz).density == ScalarJet::monomial(0, q(1)));
  CHECK(apply_inv_d(dz, dz).density.empty());
  FormJet eta{kZero, ScalarJet::monomial(-2, q(1))};
  FormJet airy{kZero, ScalarJet::monomial(1, q(1))};
  CHECK(apply_inv_d(eta, airy).density == ScalarJet::monomial(-4, q(-3)));
}

TEST_CASE("exactness: d(eta/dmu) has no residue") {
  Gen g;
  for (int i = 0; i < 500; ++i) {
    ScalarJet eta = g.jet(static_cast<int>(g.integer(-6, 2)), 8);
    ScalarJet mu = g.jet(static_cast<int>(g.integer(-3, 3)), 10);
    FormJet r = apply_inv_d(FormJet{kZero, eta}, FormJet{kZero, mu});
    if (r.density.trunc() > -1) CHECK(residue_at(r) == 0);
  }
}

TEST_CASE("S-operator") {
  FormJet dz{kZero, ScalarJet::monomial(0, q(1))};
  FormJet eta{kZero, ScalarJet::monomial(-1, q(1))};
  GradedSeries<ScalarJet> s = s_operator(eta, dz, 5);
  REQUIRE(s.find(1, 1));
  CHECK(*s.find(1, 1) == eta.density);
  REQUIRE(s.find(3, 3));
  CHECK(*s.find(3, 3) == ScalarJet::monomial(-3, q(1, 12)));
  // Constants survive only at u^1.
  GradedSeries<ScalarJet> c = s_operator(FormJet{kZero, ScalarJet::monomial(0, q(5))}, dz, 5);
  CHECK(*c.find(1, 1) == ScalarJet::monomial(0, q(5)));
  CHECK(c.find(3, 3)->empty());

  // [u^1 hbar^1] is plain division by dmu for random inputs.
  Gen g;
  for (int i = 0; i < 50; ++i) {
    ScalarJet e = g.jet(static_cast<int>(g.integer(-4, 2)), 6);
    ScalarJet mu = ScalarJet::monomial(static_cast<int>(g.integer(-2, 2)), g.nonzero_rational());
    CHECK(*s_operator(FormJet{kZero, e}, FormJet{kZero, mu}, 3).find(1, 1) == divide(e, mu));
  }
}

TEST_CASE("pole basis jets") {
  // d(z^-3) at 0
  CHECK(pole_basis_jet(kZero, 3, kZero, 4) == ScalarJet::monomial(-4, q(-3)));
  // d(1/(z-1)) at 0 = -(1-z)^{-2}... = -1/(z-1)^2 dz
  ScalarJet b = pole_basis_jet(Point::finite(1), 1, kZero, 3);
  CHECK(b.coeff(0) == -1);
  CHECK(b.coeff(1) == -2);
  CHECK(b.coeff(2) == -3);
  // d(z^2) at infinity: 2z dz = -2 w^-3 dw
  CHECK(pole_basis_jet(kInf, 2, kInf, 4) == ScalarJet::monomial(-3, q(-2)));
  // d(z^-1) at infinity: -z^-2 dz = w^2 * w^-2 dw = dw
  CHECK(pole_basis_jet(kZero, 1, kInf, 4).coeff(0) == 1);
}
