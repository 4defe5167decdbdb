#include "gtr/polynomial.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "gtr/errors.hpp"

namespace gtr {

Polynomial::Polynomial(const Rational& c) {
  if (sgn(c) != 0) terms_.emplace(0, c);
}

Polynomial Polynomial::monomial(int exponent, const Rational& c) {
  if (exponent < 0) fail(ErrorKind::InvalidArgument, "negative polynomial exponent");
  Polynomial p;
  p.add_term(exponent, c);
  return p;
}

int Polynomial::degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first; }
int Polynomial::low_degree() const { return terms_.empty() ? -1 : terms_.begin()->first; }

Rational Polynomial::coeff(int e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Polynomial::leading() const { return terms_.empty() ? Rational(0) : terms_.rbegin()->second; }

void Polynomial::add_term(int e, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  Polynomial r;
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_) r.add_term(e1 + e2, c1 * c2);
  *this = std::move(r);
  return *this;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  if (sgn(c) == 0) return {};
  Polynomial r = *this;
  for (auto& [e, v] : r.terms_) v *= c;
  return r;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return {};
  return scaled(1 / leading());
}

Polynomial Polynomial::derivative() const {
  Polynomial r;
  for (const auto& [e, c] : terms_)
    if (e > 0) r.add_term(e - 1, c * e);
  return r;
}

Rational Polynomial::eval(const Rational& x) const {
  Rational acc = 0;
  int prev = degree();
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    for (int k = it->first; k < prev; ++k) acc *= x;
    acc += it->second;
    prev = it->first;
  }
  for (int k = 0; k < prev; ++k) acc *= x;
  return acc;
}

Polynomial Polynomial::shifted(const Rational& a) const {
  // Horner in (z + a).
  Polynomial za = Polynomial::z() + Polynomial(a);
  Polynomial acc;
  int prev = degree();
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    for (int k = it->first; k < prev; ++k) acc *= za;
    acc += Polynomial(it->second);
    prev = it->first;
  }
  for (int k = 0; k < prev; ++k) acc *= za;
  return acc;
}

Polynomial Polynomial::reversed(int deg) const {
  Polynomial r;
  for (const auto& [e, c] : terms_) {
    if (e > deg) fail(ErrorKind::InvalidArgument, "reversal degree too small");
    r.add_term(deg - e, c);
  }
  return r;
}

std::string Polynomial::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    Rational c = it->second;
    int e = it->first;
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    Rational a = abs(c);
    if (e == 0 || a != 1) {
      bool frac = a.get_den() != 1;
      os << (frac && e != 0 ? "(" : "") << a.get_str() << (frac && e != 0 ? ")" : "");
      if (e != 0) os << "*";
    }
    if (e == 1) os << var;
    else if (e > 1) os << var << "^" << e;
    first = false;
  }
  return os.str();
}

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) fail(ErrorKind::DivisionByZero, "polynomial division by zero");
  Polynomial q, r = a;
  int db = b.degree();
  Rational lb = b.leading();
  while (!r.is_zero() && r.degree() >= db) {
    int shift = r.degree() - db;
    Rational c = r.leading() / lb;
    q.add_term(shift, c);
    for (const auto& [e, v] : b.terms()) r.add_term(e + shift, -c * v);
  }
  return {q, r};
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  Polynomial x = a, y = b;
  while (!y.is_zero()) {
    Polynomial r = divmod(x, y).second;
    x = std::move(y);
    y = r.monic();
  }
  return x.monic();
}

namespace {

// Positive divisors of |n| by trial division; n is expected to be modest.
std::vector<Integer> divisors(Integer n) {
  if (n < 0) n = -n;
  std::vector<std::pair<Integer, int>> fac;
  Integer m = n;
  for (Integer p = 2; p * p <= m; ++p) {
    if (p > 2000000) fail(ErrorKind::InvalidArgument, "coefficient too large for rational root search");
    int k = 0;
    while (m % p == 0) {
      m /= p;
      ++k;
    }
    if (k) fac.emplace_back(p, k);
  }
  if (m > 1) fac.emplace_back(m, 1);
  std::vector<Integer> divs{1};
  for (const auto& [p, k] : fac) {
    std::size_t base = divs.size();
    Integer pk = 1;
    for (int i = 1; i <= k; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
    }
  }
  return divs;
}

}  // namespace

RootList rational_roots(const Polynomial& p) {
  if (p.is_zero()) fail(ErrorKind::InvalidArgument, "rational_roots of the zero polynomial");
  RootList out;
  Polynomial rest = p.monic();
  // Root at 0.
  int low = rest.low_degree();
  if (low > 0) {
    out.roots.emplace_back(Rational(0), low);
    Polynomial shifted;
    for (const auto& [e, c] : rest.terms()) shifted.add_term(e - low, c);
    rest = shifted;
  }
  if (rest.degree() > 0) {
    // Clear denominators to an integer polynomial.
    Integer l = 1;
    for (const auto& [e, c] : rest.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    Integer a0 = Rational(rest.coeff(0) * l).get_num();
    Integer an = Rational(rest.leading() * l).get_num();
    std::set<Rational> candidates;
    for (const Integer& num : divisors(a0))
      for (const Integer& den : divisors(an)) {
        Rational c(num, den);
        c.canonicalize();
        candidates.insert(c);
        candidates.insert(-c);
      }
    for (const Rational& c : candidates) {
      int mult = 0;
      Polynomial lin = Polynomial::z() - Polynomial(c);
      while (rest.degree() > 0 && sgn(rest.eval(c)) == 0) {
        rest = divmod(rest, lin).first;
        ++mult;
      }
      if (mult) out.roots.emplace_back(c, mult);
    }
  }
  std::sort(out.roots.begin(), out.roots.end());
  out.residual = rest.monic();
  out.residual_degree = std::max(0, rest.degree());
  return out;
}

// ---- RationalFunction ----

RationalFunction::RationalFunction(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) fail(ErrorKind::DivisionByZero, "rational function with zero denominator");
  if (num.is_zero()) {
    num_ = Polynomial();
    den_ = Polynomial(1);
    return;
  }
  Polynomial g = gcd(num, den);
  Polynomial n = divmod(num, g).first, d = divmod(den, g).first;
  Rational lead = d.leading();
  num_ = n.scaled(1 / lead);
  den_ = d.scaled(1 / lead);
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) fail(ErrorKind::DivisionByZero, "rational function division by zero");
  return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction RationalFunction::pow(int e) const {
  if (e < 0) return RationalFunction(1) / pow(-e);
  RationalFunction acc(1), base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

RationalFunction RationalFunction::derivative() const {
  return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

Rational RationalFunction::eval(const Rational& x) const {
  Rational d = den_.eval(x);
  if (sgn(d) == 0) fail(ErrorKind::DivisionByZero, "evaluation at a pole");
  return num_.eval(x) / d;
}

std::string RationalFunction::str(const std::string& var) const {
  if (den_ == Polynomial(1)) return num_.str(var);
  return "(" + num_.str(var) + ")/(" + den_.str(var) + ")";
}

}  // namespace gtr
