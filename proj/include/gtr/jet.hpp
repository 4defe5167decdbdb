// Truncated Laurent series in one local variable, generic in the coefficient type.
//
// A jet stores the known terms below its truncation order T; every exponent >= T is
// unknown. Arithmetic propagates the tightest order that the inputs can justify.
#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <type_traits>
#include <utility>

#include "gtr/errors.hpp"
#include "gtr/rational.hpp"

namespace gtr {

/// Truncation order meaning "no unknown terms".
inline constexpr int kExactOrder = 1 << 28;

inline int sat_add(int a, int b) {
  if (a >= kExactOrder || b >= kExactOrder) return kExactOrder;
  long r = static_cast<long>(a) + b;
  if (r >= kExactOrder) return kExactOrder;
  return static_cast<int>(r);
}

inline int sat_mul(int a, int k) {
  if (a >= kExactOrder) return kExactOrder;
  long r = static_cast<long>(a) * k;
  if (r >= kExactOrder) return kExactOrder;
  return static_cast<int>(r);
}

// Coefficient protocol for Rational. Other coefficient types provide the same
// free functions in namespace gtr.
inline bool coeff_is_zero(const Rational& c) { return sgn(c) == 0; }
inline void coeff_fma(Rational& acc, const Rational& a, const Rational& b) { acc += a * b; }
inline void coeff_scale(Rational& c, const Rational& s) { c *= s; }
inline void coeff_add(Rational& acc, const Rational& c) { acc += c; }

template <class A, class B>
struct ProductOf;
template <>
struct ProductOf<Rational, Rational> {
  using type = Rational;
};

template <class C>
class LaurentJet {
 public:
  using Coeff = C;
  using Terms = std::map<int, C>;

  LaurentJet() = default;
  explicit LaurentJet(int trunc) : trunc_(trunc) {}

  static LaurentJet monomial(int e, C c, int trunc = kExactOrder) {
    LaurentJet j(trunc);
    j.add_term(e, std::move(c));
    return j;
  }

  int trunc() const { return trunc_; }
  bool is_exact() const { return trunc_ >= kExactOrder; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  /// Smallest stored exponent, or the truncation order when nothing is stored.
  int valuation() const { return terms_.empty() ? trunc_ : terms_.begin()->first; }
  int max_exponent() const { return terms_.empty() ? trunc_ - 1 : terms_.rbegin()->first; }

  const C* find(int e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? nullptr : &it->second;
  }

  C coeff(int e) const {
    if (e >= trunc_) fail(ErrorKind::PrecisionError, "coefficient " + std::to_string(e) + " hidden by truncation " + std::to_string(trunc_));
    const C* c = find(e);
    return c ? *c : C{};
  }

  void add_term(int e, const C& c) {
    if (e >= trunc_ || coeff_is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      coeff_add(it->second, c);
      if (coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  void add_term(int e, C&& c) {
    if (e >= trunc_ || coeff_is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, std::move(c));
    if (!inserted) {
      coeff_add(it->second, c);
      if (coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  /// Mutable slot for in-place accumulation; call prune() afterwards.
  C& slot(int e) { return terms_[e]; }
  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = (it->first >= trunc_ || coeff_is_zero(it->second)) ? terms_.erase(it) : std::next(it);
  }

  /// Lowers the truncation order to min(trunc, t) and drops hidden terms.
  void limit(int t) {
    if (t >= trunc_) return;
    trunc_ = t;
    terms_.erase(terms_.lower_bound(t), terms_.end());
  }
  LaurentJet truncated(int t) const {
    LaurentJet r = *this;
    r.limit(t);
    return r;
  }

  /// Multiplication by zeta^s.
  LaurentJet shifted(int s) const {
    LaurentJet r(sat_add(trunc_, s));
    for (const auto& [e, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), e + s, c);
    return r;
  }

  LaurentJet scaled(const Rational& s) const {
    if (sgn(s) == 0) return LaurentJet(trunc_);
    LaurentJet r = *this;
    for (auto& [e, c] : r.terms_) coeff_scale(c, s);
    return r;
  }

  LaurentJet operator-() const { return scaled(Rational(-1)); }

  LaurentJet& operator+=(const LaurentJet& o) {
    limit(o.trunc_);
    for (const auto& [e, c] : o.terms_) {
      if (e >= trunc_) break;
      add_term(e, c);
    }
    return *this;
  }
  LaurentJet& operator-=(const LaurentJet& o) { return *this += -o; }
  friend LaurentJet operator+(LaurentJet a, const LaurentJet& b) { return a += b; }
  friend LaurentJet operator-(LaurentJet a, const LaurentJet& b) { return a -= b; }

  /// d/dzeta.
  LaurentJet derivative() const {
    LaurentJet r(trunc_ >= kExactOrder ? kExactOrder : trunc_ - 1);
    for (const auto& [e, c] : terms_) {
      if (e == 0) continue;
      C v = c;
      coeff_scale(v, Rational(e));
      r.terms_.emplace_hint(r.terms_.end(), e - 1, std::move(v));
    }
    return r;
  }

  /// Termwise primitive vanishing at zeta = 0 (no constant term).
  LaurentJet primitive() const {
    LaurentJet r(sat_add(trunc_, 1));
    for (const auto& [e, c] : terms_) {
      if (e == -1) fail(ErrorKind::NonRationalPrimitive, "primitive of a jet with a residue term");
      C v = c;
      coeff_scale(v, Rational(1, e + 1));
      r.terms_.emplace_hint(r.terms_.end(), e + 1, std::move(v));
    }
    return r;
  }

  /// Equality of all coefficients known to both jets.
  bool agrees_with(const LaurentJet& o) const {
    int t = std::min(trunc_, o.trunc_);
    auto a = terms_.begin(), b = o.terms_.begin();
    while (true) {
      while (a != terms_.end() && a->first >= t) a = terms_.end();
      while (b != o.terms_.end() && b->first >= t) b = o.terms_.end();
      if (a == terms_.end() || b == o.terms_.end()) return a == terms_.end() && b == o.terms_.end();
      if (a->first != b->first || !(a->second == b->second)) return false;
      ++a;
      ++b;
    }
  }

  friend bool operator==(const LaurentJet& a, const LaurentJet& b) {
    return a.trunc_ == b.trunc_ && a.terms_ == b.terms_;
  }

 private:
  Terms terms_;
  int trunc_ = kExactOrder;
};

using ScalarJet = LaurentJet<Rational>;

/// Product with the tightest provable order: min(T_a + v_b, T_b + v_a), optionally capped.
template <class A, class B>
LaurentJet<typename ProductOf<A, B>::type> mul(const LaurentJet<A>& a, const LaurentJet<B>& b,
                                               int cap = kExactOrder) {
  using R = typename ProductOf<A, B>::type;
  int t = std::min({sat_add(a.trunc(), b.valuation()), sat_add(b.trunc(), a.valuation()), cap});
  LaurentJet<R> r(t);
  if (a.empty() || b.empty()) return r;
  for (const auto& [ea, ca] : a.terms()) {
    if (ea + b.valuation() >= t) break;
    for (const auto& [eb, cb] : b.terms()) {
      int e = ea + eb;
      if (e >= t) break;
      coeff_fma(r.slot(e), ca, cb);
    }
  }
  r.prune();
  return r;
}

template <class C>
LaurentJet<C> operator*(const LaurentJet<C>& a, const ScalarJet& b) {
  return mul(a, b);
}

/// Scalar-jet arithmetic.
ScalarJet inverse(const ScalarJet& a, int cap = kExactOrder);
ScalarJet divide(const ScalarJet& a, const ScalarJet& b, int cap = kExactOrder);
ScalarJet power(const ScalarJet& a, int n, int cap = kExactOrder);
/// (1 + eps)^alpha for a jet with constant term 1 and no negative exponents.
ScalarJet unit_power(const ScalarJet& a, const Rational& alpha, int cap = kExactOrder);
/// exp(a) for a jet with positive valuation.
ScalarJet exp_jet(const ScalarJet& a, int cap = kExactOrder);
/// Functional inverse of a valuation-1 jet.
ScalarJet reverse(const ScalarJet& a, int cap = kExactOrder);

/// Powers inner^e for the exponents needed by compose.
void compose_powers(const ScalarJet& inner, int emin, int emax, int cap, std::map<int, ScalarJet>& out);
int compose_order(int outer_trunc, int outer_min_nonzero_exp, bool has_nonzero, const ScalarJet& inner, int cap);

/// outer(inner(zeta)); inner must have positive valuation.
template <class C>
LaurentJet<C> compose(const LaurentJet<C>& outer, const ScalarJet& inner, int cap = kExactOrder) {
  int vi = inner.valuation();
  if (inner.empty() || vi <= 0) fail(ErrorKind::ValuationError, "compose needs an inner jet of positive valuation");
  int emin = 0, emax = 0;
  bool has_nonzero = false;
  for (const auto& [e, c] : outer.terms())
    if (e != 0) {
      if (!has_nonzero) emin = emax = e;
      emin = std::min(emin, e);
      emax = std::max(emax, e);
      has_nonzero = true;
    }
  int t = compose_order(outer.trunc(), emin, has_nonzero, inner, cap);
  LaurentJet<C> r(t);
  if (has_nonzero) {
    // Exponents with e*vi >= t cannot contribute.
    if (t < kExactOrder) emax = std::min(emax, (t - 1) / vi + 1);
    std::map<int, ScalarJet> pw;
    compose_powers(inner, std::min(emin, 0), std::max(emax, 0), t, pw);
    for (const auto& [e, c] : outer.terms()) {
      if (e == 0 || e > emax) continue;
      const ScalarJet& p = pw.at(e);
      for (const auto& [ep, cp] : p.terms()) {
        if (ep >= t) break;
        C v = c;
        coeff_scale(v, cp);
        r.add_term(ep, std::move(v));
      }
    }
  }
  if (const C* c0 = outer.find(0)) r.add_term(0, *c0);
  return r;
}

std::string jet_str(const ScalarJet& j, const std::string& var = "z");

}  // namespace gtr
