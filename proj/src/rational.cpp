#include "gtr/rational.hpp"

#include <cctype>

#include "gtr/errors.hpp"

namespace gtr {

const char* error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ValuationError: return "ValuationError";
    case ErrorKind::PrecisionError: return "PrecisionError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IrrationalSpecialPoint: return "IrrationalSpecialPoint";
    case ErrorKind::KeyNotSpecial: return "KeyNotSpecial";
    case ErrorKind::MissingDependency: return "MissingDependency";
    case ErrorKind::ResidueNonZero: return "ResidueNonZero";
    case ErrorKind::OrderDivergence: return "OrderDivergence";
    case ErrorKind::NotSimpleZero: return "NotSimpleZero";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::NonHolomorphicDual: return "NonHolomorphicDual";
    case ErrorKind::NotTrivialDual: return "NotTrivialDual";
    case ErrorKind::NonRationalPrimitive: return "NonRationalPrimitive";
    case ErrorKind::MultiPointUnsupported: return "MultiPointUnsupported";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail(ErrorKind::ParseError, "empty rational literal");
  if (s[0] == '+') s.erase(0, 1);
  std::size_t slash = s.find('/');
  auto digits_ok = [](const std::string& t, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && i < t.size() && t[i] == '-') ++i;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!digits_ok(s, true)) fail(ErrorKind::ParseError, "bad rational literal '" + std::string(text) + "'");
    return Rational(Integer(s));
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false))
    fail(ErrorKind::ParseError, "bad rational literal '" + std::string(text) + "'");
  Integer d(den);
  if (d == 0) fail(ErrorKind::DivisionByZero, "zero denominator in '" + std::string(text) + "'");
  Rational r(Integer(num), d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (sgn(base) == 0) fail(ErrorKind::DivisionByZero, "0 to a negative power");
    Rational inv = 1 / base;
    return pow(inv, -exponent);
  }
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  return Rational(num, den);
}

Integer factorial(unsigned long n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

Rational binomial(const Rational& top, unsigned long k) {
  Rational acc = 1;
  for (unsigned long i = 0; i < k; ++i) acc *= (top - Rational(static_cast<long>(i))) / Rational(static_cast<long>(i + 1));
  return acc;
}

}  // namespace gtr
