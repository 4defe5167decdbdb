#include "gtr/jet.hpp"

#include <sstream>
#include <vector>

namespace gtr {

namespace {

bool is_monomial(const ScalarJet& a) { return a.is_exact() && a.terms().size() == 1; }

}  // namespace

ScalarJet inverse(const ScalarJet& a, int cap) {
  if (a.empty()) fail(ErrorKind::DivisionByZero, "inverse of a jet with no known nonzero term");
  int v = a.valuation();
  if (is_monomial(a)) {
    ScalarJet r = ScalarJet::monomial(-v, 1 / a.terms().begin()->second);
    r.limit(cap);
    return r;
  }
  int t = a.is_exact() ? cap : std::min(a.trunc() - 2 * v, cap);
  if (t >= kExactOrder) fail(ErrorKind::PrecisionError, "inverse of an exact non-monomial jet needs an order cap");
  ScalarJet r(t);
  int n = t + v;  // number of unit-series coefficients
  if (n <= 0) return r;
  Rational inv0 = 1 / a.terms().begin()->second;
  std::vector<Rational> au(n), b(n);
  for (const auto& [e, c] : a.terms())
    if (e - v < n) au[e - v] = c;
  b[0] = inv0;
  for (int j = 1; j < n; ++j) {
    Rational s = 0;
    for (int i = 1; i <= j; ++i)
      if (sgn(au[i]) != 0) s += au[i] * b[j - i];
    b[j] = -inv0 * s;
  }
  for (int j = 0; j < n; ++j) r.add_term(j - v, b[j]);
  return r;
}

ScalarJet divide(const ScalarJet& a, const ScalarJet& b, int cap) {
  if (is_monomial(b)) return mul(a, inverse(b), cap);
  if (a.empty() && a.is_exact()) return a;
  int target = std::min(sat_add(a.trunc(), -b.valuation()), cap);
  int inv_cap = target >= kExactOrder ? kExactOrder : target - a.valuation();
  if (b.is_exact() && inv_cap >= kExactOrder)
    fail(ErrorKind::PrecisionError, "division by an exact non-monomial jet needs an order cap");
  return mul(a, inverse(b, inv_cap), cap);
}

ScalarJet power(const ScalarJet& a, int n, int cap) {
  if (n < 0) return power(inverse(a, cap >= kExactOrder ? cap : cap - (n + 1) * a.valuation()), -n, cap);
  ScalarJet acc = ScalarJet::monomial(0, Rational(1));
  ScalarJet base = a;
  while (n) {
    if (n & 1) acc = mul(acc, base, cap);
    n >>= 1;
    if (n) base = mul(base, base, cap);
  }
  return acc;
}

ScalarJet unit_power(const ScalarJet& a, const Rational& alpha, int cap) {
  if (a.valuation() < 0 || a.coeff(0) != 1) fail(ErrorKind::ValuationError, "unit_power needs constant term 1");
  ScalarJet eps = a;
  eps.add_term(0, Rational(-1));
  int t = std::min(a.trunc(), cap);
  if (t >= kExactOrder) {
    if (eps.empty()) return ScalarJet::monomial(0, Rational(1));
    if (alpha.get_den() == 1 && alpha >= 0) return power(a, static_cast<int>(alpha.get_num().get_si()), cap);
    fail(ErrorKind::PrecisionError, "unit_power of an exact jet needs an order cap");
  }
  ScalarJet r(t);
  r.add_term(0, Rational(1));
  if (eps.empty()) return r;
  int ve = eps.valuation();
  ScalarJet p = ScalarJet::monomial(0, Rational(1));
  for (unsigned long j = 1; static_cast<long>(ve) * j < t; ++j) {
    p = mul(p, eps, t);
    r += p.scaled(binomial(alpha, j));
  }
  r.limit(t);
  return r;
}

ScalarJet exp_jet(const ScalarJet& a, int cap) {
  if (a.empty()) {
    ScalarJet r(std::min(a.trunc(), cap));
    r.add_term(0, Rational(1));
    return r;
  }
  int v = a.valuation();
  if (v <= 0) fail(ErrorKind::ValuationError, "exp of a jet with non-positive valuation");
  int t = std::min(a.trunc(), cap);
  if (t >= kExactOrder) fail(ErrorKind::PrecisionError, "exp of an exact jet needs an order cap");
  ScalarJet r(t);
  r.add_term(0, Rational(1));
  ScalarJet p = ScalarJet::monomial(0, Rational(1));
  for (unsigned long j = 1; static_cast<long>(v) * j < t; ++j) {
    p = mul(p, a, t).scaled(Rational(1, static_cast<long>(j)));
    r += p;
  }
  r.limit(t);
  return r;
}

int compose_order(int outer_trunc, int emin, bool has_nonzero, const ScalarJet& inner, int cap) {
  int vi = inner.valuation();
  int t = cap;
  if (outer_trunc < kExactOrder) t = std::min(t, outer_trunc * vi);
  if (has_nonzero) {
    if (!inner.is_exact()) {
      t = std::min(t, emin * vi + inner.trunc() - vi);
    } else if (emin < 0 && !is_monomial(inner) && t >= kExactOrder) {
      fail(ErrorKind::PrecisionError, "composition with negative powers of an exact series needs an order cap");
    }
  }
  return t;
}

void compose_powers(const ScalarJet& inner, int emin, int emax, int cap, std::map<int, ScalarJet>& out) {
  int vi = inner.valuation();
  if (emax >= 1) {
    ScalarJet p = inner.truncated(cap);
    out[1] = p;
    for (int e = 2; e <= emax; ++e) {
      p = mul(p, inner, cap);
      out[e] = p;
    }
  }
  if (emin <= -1) {
    int k_max = -emin;
    int c = cap >= kExactOrder ? kExactOrder : cap + k_max * vi;
    ScalarJet inv = inverse(inner, c);
    ScalarJet p = inv;
    out[-1] = p.truncated(cap);
    for (int k = 2; k <= k_max; ++k) {
      p = mul(p, inv, c);
      out[-k] = p.truncated(cap);
    }
  }
}

ScalarJet reverse(const ScalarJet& a, int cap) {
  if (a.empty() || a.valuation() != 1) fail(ErrorKind::ValuationError, "reverse needs a valuation-1 jet");
  Rational c = a.terms().begin()->second;
  if (is_monomial(a)) {
    ScalarJet r = ScalarJet::monomial(1, 1 / c);
    r.limit(cap);
    return r;
  }
  int t = std::min(a.trunc(), cap);
  if (t >= kExactOrder) fail(ErrorKind::PrecisionError, "reverse of an exact non-linear jet needs an order cap");
  ScalarJet b(t);
  b.add_term(1, 1 / c);
  // Fix one coefficient at a time: [zeta^k] a(b) depends on b_k through c*b_k.
  for (int k = 2; k < t; ++k) {
    ScalarJet probe = b.truncated(k + 1);
    ScalarJet trial(k + 1);
    for (const auto& [e, v] : probe.terms()) trial.add_term(e, v);
    ScalarJet comp = compose(a.truncated(k + 1), trial, k + 1);
    Rational ek = comp.coeff(k);
    if (sgn(ek) != 0) b.add_term(k, -ek / c);
  }
  return b;
}

std::string jet_str(const ScalarJet& j, const std::string& var) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : j.terms()) {
    if (!first) os << " + ";
    os << "(" << c.get_str() << ")" << var << "^" << e;
    first = false;
  }
  if (!j.is_exact()) os << (first ? "" : " + ") << "O(" << var << "^" << j.trunc() << ")";
  if (first && j.is_exact()) os << "0";
  return os.str();
}

}  // namespace gtr
