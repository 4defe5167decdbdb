#include "doctest.h"
#include "gtr/multidiff.hpp"
#include "testing.hpp"

using namespace gtr;
using gtr::testing::Gen;
using gtr::testing::q;

namespace {

const Point kZero = Point::finite(0);

SpecTensor single(const Point& p, int k, const Rational& c = 1) {
  SpecTensor t;
  SlotKey key{};
  key[0] = make_index(p, k);
  t.add(key, c);
  return t;
}

}  // namespace

TEST_CASE("kernel expansion") {
  // B(z~, z) = -dz~ b_{0,1}(z) - z~ dz~ b_{0,2}(z) + O(z~^2)
  TensorJet b = kernel_jet(kZero, 2);
  CHECK(b.trunc() == 2);
  CHECK(b.coeff(0) == single(kZero, 1, -1));
  CHECK(b.coeff(1) == single(kZero, 2, -1));
}

TEST_CASE("kernel expansion resums to B") {
  // Sum over the expansion of -zeta^m b_{q,m+1}(z) evaluated at rational points with
  // |zeta| < |z - q| converges to 1/(zeta - (z-q))^2; compare partial sums exactly.
  Gen g;
  for (int i = 0; i < 50; ++i) {
    Rational qv = g.rational(3);
    Rational t = g.nonzero_rational(5);   // z - q
    Rational zeta = g.nonzero_rational(5);
    int order = 12;
    TensorJet b = kernel_jet(Point::finite(qv), order);
    Rational partial = 0;
    for (const auto& [m, ten] : b.terms())
      for (const auto& [key, c] : ten.terms) {
        int k = index_order(key[0]);
        // b_{q,k}(z)/dz = -k t^{-k-1}
        partial += c * pow(zeta, m) * Rational(-k) * pow(t, -k - 1);
      }
    // Closed form of the truncated geometric sum: sum_{m<N} (m+1) zeta^m t^{-m-2}
    Rational r = zeta / t, expect = 0;
    for (int m = 0; m < order; ++m) expect += Rational(m + 1) * pow(r, m) / (t * t);
    CHECK(partial == expect);
    if (abs(r) < Rational(1, 2)) {
      Rational exact = 1 / ((zeta - t) * (zeta - t));
      Rational err = abs(exact - partial);
      CHECK(err < Rational(1, 100));
    }
  }
}

TEST_CASE("slot expansion and substitution") {
  MultiDifferential w(0, 2);
  w.add({{kZero, 3}, {kZero, 1}}, q(1));
  TensorJet e = expand_slot(w, 0, kZero, 4);
  CHECK(e.is_exact());
  CHECK(e.coeff(-4) == single(kZero, 1, -3));

  // No pole at the expansion point: valuation >= 0.
  MultiDifferential v(0, 1);
  v.add({{Point::finite(2), 1}}, q(1));
  CHECK(expand_slot(v, 0, kZero, 4).valuation() >= 0);

  // B(sigma(z~), z) with sigma = -z~
  ScalarJet minus = ScalarJet::monomial(1, q(-1));
  TensorJet s = pull_back(kernel_jet(kZero, 2), minus, 2);
  CHECK(s.coeff(0) == single(kZero, 1, 1));
  CHECK(s.coeff(1) == single(kZero, 2, -1));
  // sigma = identity
  CHECK(pull_back(kernel_jet(kZero, 3), ScalarJet::monomial(1, q(1)), 3) == kernel_jet(kZero, 3));
  // b_{0,1} at sigma = 2 z~: -(2z~)^{-2} * 2 = -(1/2) z~^{-2}
  MultiDifferential u(0, 1);
  u.add({{kZero, 1}}, q(1));
  TensorJet sub = substitute_jet(u, 0, kZero, ScalarJet::monomial(1, q(2)), 4);
  CHECK(sub.coeff(-2).terms.begin()->second == q(-1, 2));
}

TEST_CASE("coefficients, symmetry and JSON") {
  MultiDifferential w(0, 3);
  w.add_symmetric({{kZero, 1}, {kZero, 1}, {kZero, 2}}, q(1, 3));
  CHECK(w.tensor().terms.size() == 3);
  CHECK(w.coefficient({{kZero, 2}, {kZero, 1}, {kZero, 1}}) == q(1, 3));
  CHECK(w.coefficient({{kZero, 5}, {kZero, 1}, {kZero, 1}}) == 0);
  CHECK(symmetry_defect(w) == 0);
  MultiDifferential a(0, 2);
  a.add({{kZero, 1}, {kZero, 2}}, q(1));
  CHECK(symmetry_defect(a) == 1);

  auto j = to_json(w);
  CHECK(j["terms"].size() == 3);
  CHECK(j["terms"][0]["coeff"] == "1/3");
  MultiDifferential back = multidiff_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back == w);
  CHECK(w.sorted_terms().size() == 1);
}

TEST_CASE("regularized kernel") {
  // x = z: vanishes identically.
  Bivariate flat = regularized_diagonal(ScalarJet::monomial(0, q(1)), 6);
  for (const auto& [k, v] : flat) CHECK(v.empty());
  // Airy: B~(z,z)/dz^2 = 1/(4 z^2).
  Bivariate airy = regularized_diagonal(ScalarJet::monomial(1, q(1)), 4);
  CHECK(airy.at({0, 0}) == ScalarJet::monomial(-2, q(1, 4)));
  // Symmetry in (s, t).
  for (const auto& [k, v] : airy) CHECK(v == airy.at({k.second, k.first}));
  // Against the direct expansion of 1/(s-t)^2 - X(s)X(t)/(x(z+s)-x(z+t))^2 at z = 1, x = z^3/3,
  // evaluated at the rational point z=1: the (1,0) and (2,0) coefficients from the jets at z=1.
  ScalarJet xd(12);
  xd.add_term(0, q(1));
  xd.add_term(1, q(2));
  xd.add_term(2, q(1));  // (1 + zeta)^2: x = z^3/3 around z = 1
  Bivariate g = regularized_diagonal(xd, 2);
  // Diagonal value is -S(x)/6 with S the Schwarzian; x' = z^2 at z = 1 gives 2/3.
  CHECK(g.at({0, 0}).coeff(0) == q(2, 3));
}
