#include "gtr/forms.hpp"

#include <cstdlib>
#include <mutex>

namespace gtr {

namespace {

ScalarJet poly_jet(const Polynomial& p) {
  ScalarJet j;
  for (const auto& [e, c] : p.terms()) j.add_term(e, c);
  return j;
}

// Numerator and denominator jets in the local coordinate, plus an extra shift.
struct LocalPair {
  ScalarJet num, den;
  int shift = 0;
};

LocalPair local_pair(const RationalFunction& f, const Point& q) {
  LocalPair lp;
  if (!q.infinite) {
    lp.num = poly_jet(f.num().shifted(q.value));
    lp.den = poly_jet(f.den().shifted(q.value));
  } else {
    int dn = f.num().degree(), dd = f.den().degree();
    lp.num = poly_jet(f.num().reversed(dn));
    lp.den = poly_jet(f.den().reversed(dd));
    lp.shift = dd - dn;
  }
  return lp;
}

}  // namespace

ScalarJet local_function(const RationalFunction& f, const Point& q, int order) {
  if (f.is_zero()) return ScalarJet();
  LocalPair lp = local_pair(f, q);
  if (lp.den.terms().size() == 1) return divide(lp.num, lp.den).shifted(lp.shift);
  return divide(lp.num, lp.den, order >= kExactOrder ? kExactOrder : order - lp.shift).shifted(lp.shift);
}

FormJet local_expand(const OneForm& w, const Point& q, int order) {
  if (!q.infinite) return FormJet{q, local_function(w.density, q, order)};
  // dz = -dw / w^2
  ScalarJet f = local_function(w.density, q, order >= kExactOrder ? order : order + 2);
  return FormJet{q, f.shifted(-2).scaled(Rational(-1))};
}

int local_valuation(const RationalFunction& f, const Point& q) {
  if (f.is_zero()) fail(ErrorKind::InvalidArgument, "valuation of zero");
  if (q.infinite) return f.den().degree() - f.num().degree();
  return f.num().shifted(q.value).low_degree() - f.den().shifted(q.value).low_degree();
}

int form_valuation(const OneForm& w, const Point& q) {
  return local_valuation(w.density, q) - (q.infinite ? 2 : 0);
}

Rational residue_at(const FormJet& j) { return j.density.coeff(-1); }

FormJet apply_inv_d(const FormJet& eta, const FormJet& dmu) {
  if (dmu.density.empty()) fail(ErrorKind::DivisionByZero, "apply_inv_d with zero dmu");
  return FormJet{eta.anchor, divide(eta.density, dmu.density).derivative()};
}

Rational s_coefficient(int j) {
  Integer den = factorial(static_cast<unsigned long>(2 * j + 1));
  den <<= static_cast<unsigned long>(2 * j);
  return Rational(Integer(1), den);
}

Rational inv_s_coefficient(int j) {
  static std::mutex mu;
  static std::vector<Rational> cache;
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<int>(cache.size()) <= j) {
    int n = static_cast<int>(cache.size());
    if (n == 0) {
      cache.push_back(Rational(1));
      continue;
    }
    Rational s = 0;
    for (int i = 1; i <= n; ++i) s += s_coefficient(i) * cache[n - i];
    cache.push_back(-s);
  }
  return cache[j];
}

GradedSeries<ScalarJet> s_operator(const FormJet& eta, const FormJet& dmu, int hcut) {
  GradedSeries<ScalarJet> out(hcut);
  if (hcut < 1) return out;
  int jmax = (hcut - 1) / 2;
  const ScalarJet& mu = dmu.density;
  ScalarJet inv_mu;
  if (!mu.is_exact() || mu.terms().size() == 1) {
    inv_mu = inverse(mu);
  } else {
    if (eta.density.is_exact()) fail(ErrorKind::PrecisionError, "s_operator on exact jets with a non-monomial dmu needs a truncated input");
    int v = mu.valuation();
    inv_mu = inverse(mu, eta.density.trunc() + 4 * (jmax + 1) * (std::abs(v) + 1) + 8);
  }
  auto ders = mu_derivatives(mul(eta.density, inv_mu), inv_mu, 2 * jmax);
  for (int j = 0; j <= jmax; ++j) out.add(2 * j + 1, 2 * j + 1, ders[2 * j].scaled(s_coefficient(j)));
  return out;
}

ScalarJet pole_basis_jet(const Point& p, int k, const Point& q, int order) {
  ScalarJet f;  // the function (z-p)^{-k} or z^k in the local coordinate
  if (p == q) {
    f = ScalarJet::monomial(-k, Rational(1));
  } else if (!q.infinite && p.infinite) {
    Polynomial base = Polynomial::z() + Polynomial(q.value);
    Polynomial pk(1);
    for (int i = 0; i < k; ++i) pk *= base;
    for (const auto& [e, c] : pk.terms()) f.add_term(e, c);
  } else if (!q.infinite) {
    // (c + zeta)^{-k} with c = q - p
    Rational c = q.value - p.value;
    Rational inv_c = 1 / c;
    ScalarJet s(order + 1);
    Rational t = pow(c, -k);
    for (int j = 0; j < order + 1; ++j) {
      s.add_term(j, t);
      t *= frac(-k - j, j + 1) * inv_c;
    }
    f = s;
  } else {
    // (1/w - p)^{-k} = w^k (1 - p w)^{-k}
    if (sgn(p.value) == 0) {
      f = ScalarJet::monomial(k, Rational(1));
    } else {
      ScalarJet s(order + 1);
      for (int j = 0; j + k < order + 1; ++j) s.add_term(j + k, binomial(Rational(-k), j) * pow(-p.value, j));
      f = s;
    }
  }
  return f.derivative();
}

}  // namespace gtr
