// Meromorphic 1-forms on the sphere and their local calculus.
#pragma once

#include <vector>

#include "gtr/graded.hpp"
#include "gtr/jet.hpp"
#include "gtr/point.hpp"
#include "gtr/polynomial.hpp"

namespace gtr {

/// f(z) dz.
struct OneForm {
  RationalFunction density;
};

/// Local dzeta-density of a form at an anchor. The local coordinate is
/// zeta = z - q at finite q and w = 1/z at infinity.
struct FormJet {
  Point anchor;
  ScalarJet density;
};

/// Expansion of a function in the local coordinate at q. Results that are finite
/// Laurent polynomials come back exact; otherwise the truncation order is `order`.
ScalarJet local_function(const RationalFunction& f, const Point& q, int order);
FormJet local_expand(const OneForm& w, const Point& q, int order);

/// Leading exponent of f in the local coordinate at q.
int local_valuation(const RationalFunction& f, const Point& q);
/// Leading exponent of the density of w at q (this is r - 1 in the usual notation).
int form_valuation(const OneForm& w, const Point& q);

Rational residue_at(const FormJet& j);

/// d(eta / dmu).
FormJet apply_inv_d(const FormJet& eta, const FormJet& dmu);

/// [u^{2j}] of S(u) = (e^{u/2} - e^{-u/2}) / u, i.e. 1 / (2^{2j} (2j+1)!).
Rational s_coefficient(int j);
/// [u^{2j}] of 1 / S(u).
Rational inv_s_coefficient(int j);

/// Components u hbar S(u hbar d_mu) (eta / dmu) at (h, d) = (2j+1, 2j+1), j up to the cutoff.
GradedSeries<ScalarJet> s_operator(const FormJet& eta, const FormJet& dmu, int hcut);

/// dzeta-density at q of the pole basis form d((z-p)^{-k}) (d(z^k) when p is infinity).
ScalarJet pole_basis_jet(const Point& p, int k, const Point& q, int order);

/// Repeated derivative along dmu: returns g, D g, D^2 g, ... with D g = g' * inv_mu.
template <class C>
std::vector<LaurentJet<C>> mu_derivatives(const LaurentJet<C>& g, const ScalarJet& inv_mu, int count) {
  std::vector<LaurentJet<C>> out;
  out.reserve(count + 1);
  out.push_back(g);
  for (int i = 0; i < count; ++i) out.push_back(mul(out.back().derivative(), inv_mu));
  return out;
}

}  // namespace gtr
