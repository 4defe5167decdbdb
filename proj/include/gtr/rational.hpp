// Exact rational coefficients backed by GMP.
#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace gtr {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "p/q", "-p/q" (whitespace allowed around the number).
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& r);

Rational pow(const Rational& base, long exponent);
Integer factorial(unsigned long n);
Rational binomial(const Rational& top, unsigned long k);

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

/// n / d in canonical form.
inline Rational frac(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace gtr
