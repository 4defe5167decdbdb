// Univariate polynomials and rational functions over Q.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gtr/rational.hpp"

namespace gtr {

class Polynomial {
 public:
  using Terms = std::map<int, Rational>;

  Polynomial() = default;
  Polynomial(const Rational& c);  // NOLINT: constants convert implicitly
  Polynomial(long c) : Polynomial(Rational(c)) {}
  static Polynomial monomial(int exponent, const Rational& c = 1);
  static Polynomial z() { return monomial(1); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // -1 for zero
  int low_degree() const;  // smallest exponent present, -1 for zero
  Rational coeff(int e) const;
  Rational leading() const;
  void add_term(int e, const Rational& c);

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  Polynomial scaled(const Rational& c) const;
  Polynomial monic() const;
  Polynomial derivative() const;
  Rational eval(const Rational& x) const;
  /// p(z + a)
  Polynomial shifted(const Rational& a) const;
  /// z^deg p(1/z)
  Polynomial reversed(int deg) const;

  std::string str(const std::string& var = "z") const;

 private:
  Terms terms_;
};

/// Quotient and remainder; throws DivisionByZero for b = 0.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);
/// Monic gcd (zero if both are zero).
Polynomial gcd(const Polynomial& a, const Polynomial& b);

struct RootList {
  std::vector<std::pair<Rational, int>> roots;  // ascending, with multiplicity
  int residual_degree = 0;                      // degree of the non-rational cofactor
  Polynomial residual;                          // that cofactor (monic)
};

/// All rational roots with exact multiplicities.
RootList rational_roots(const Polynomial& p);

class RationalFunction {
 public:
  RationalFunction() : num_(), den_(1) {}
  RationalFunction(const Polynomial& p) : num_(p), den_(1) {}  // NOLINT
  RationalFunction(const Rational& c) : num_(c), den_(1) {}    // NOLINT
  RationalFunction(long c) : RationalFunction(Rational(c)) {}  // NOLINT
  RationalFunction(const Polynomial& num, const Polynomial& den);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  RationalFunction pow(int e) const;
  RationalFunction derivative() const;
  /// Throws DivisionByZero at a pole.
  Rational eval(const Rational& x) const;

  std::string str(const std::string& var = "z") const;

 private:
  Polynomial num_, den_;
};

}  // namespace gtr
