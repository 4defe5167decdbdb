#include "gtr/curve.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <set>

namespace gtr {

PointClassification classify(const SpectralCurve& c, const Point& q) {
  PointClassification pc;
  pc.point = q;
  pc.r = form_valuation(c.dx, q) + 1;
  pc.s = form_valuation(c.dy, q) + 1;
  pc.special = !((pc.r == 1 && pc.s == 1) || pc.r + pc.s <= 0);
  return pc;
}

namespace {

Polynomial squarefree(const Polynomial& p) {
  if (p.degree() <= 0) return Polynomial(1);
  return divmod(p, gcd(p, p.derivative())).first.monic();
}

// Refines a list of squarefree polynomials into pairwise coprime factors.
std::vector<Polynomial> coprime_base(const std::vector<Polynomial>& in) {
  std::vector<Polynomial> base;
  for (Polynomial p : in) {
    p = squarefree(p);
    std::vector<Polynomial> next;
    for (const Polynomial& q : base) {
      Polynomial g = gcd(p, q);
      if (g.degree() > 0) {
        Polynomial rest = divmod(q, g).first;
        next.push_back(g);
        if (rest.degree() > 0) next.push_back(rest.monic());
        p = divmod(p, g).first.monic();
      } else {
        next.push_back(q);
      }
    }
    if (p.degree() > 0) next.push_back(p);
    base = std::move(next);
  }
  return base;
}

int multiplicity(Polynomial p, const Polynomial& f) {
  int m = 0;
  while (p.degree() >= f.degree()) {
    auto [q, r] = divmod(p, f);
    if (!r.is_zero()) break;
    p = q;
    ++m;
  }
  return m;
}

void collect_roots(const Polynomial& p, std::set<Point>& pts, std::vector<Polynomial>& residuals) {
  if (p.degree() <= 0) return;
  RootList rl = rational_roots(p);
  for (const auto& [root, mult] : rl.roots) pts.insert(Point::finite(root));
  if (rl.residual_degree > 0) residuals.push_back(rl.residual);
}

}  // namespace

std::vector<Point> critical_points(const SpectralCurve& c) {
  std::set<Point> pts;
  std::vector<Polynomial> residuals;
  for (const OneForm* w : {&c.dx, &c.dy}) {
    collect_roots(w->density.num(), pts, residuals);
    collect_roots(w->density.den(), pts, residuals);
  }
  pts.insert(Point::infinity());
  return {pts.begin(), pts.end()};
}

std::vector<PointClassification> special_points(const SpectralCurve& c) {
  std::set<Point> pts;
  std::vector<Polynomial> residuals;
  for (const OneForm* w : {&c.dx, &c.dy}) {
    collect_roots(w->density.num(), pts, residuals);
    collect_roots(w->density.den(), pts, residuals);
  }
  // Irrational candidates: a common irreducible-enough factor has the same orders at all its roots.
  for (const Polynomial& f : coprime_base(residuals)) {
    int r = 1 + multiplicity(c.dx.density.num(), f) - multiplicity(c.dx.density.den(), f);
    int s = 1 + multiplicity(c.dy.density.num(), f) - multiplicity(c.dy.density.den(), f);
    if (!((r == 1 && s == 1) || r + s <= 0))
      fail(ErrorKind::IrrationalSpecialPoint, "special points at the roots of " + f.str());
  }
  pts.insert(Point::infinity());
  std::vector<PointClassification> out;
  for (const Point& p : pts) {
    PointClassification pc = classify(c, p);
    if (pc.special) out.push_back(pc);
  }
  return out;
}

SpectralCurve make_curve(const RationalFunction& dx, const RationalFunction& dy, std::vector<Point> keys,
                         std::string label) {
  if (dx.is_zero() || dy.is_zero()) fail(ErrorKind::InvalidArgument, "dx and dy must be nonzero");
  SpectralCurve c{OneForm{dx}, OneForm{dy}, {}, std::move(label)};
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  for (const Point& k : keys)
    if (!classify(c, k).special) fail(ErrorKind::KeyNotSpecial, "key " + k.str() + " is not a special point");
  c.keys = std::move(keys);
  return c;
}

SpectralCurve dual_curve(const SpectralCurve& c) {
  std::vector<Point> keys;
  for (const PointClassification& pc : special_points(c))
    if (!std::binary_search(c.keys.begin(), c.keys.end(), pc.point)) keys.push_back(pc.point);
  std::string label = c.label.empty() ? std::string() : "dual " + c.label;
  if (c.label.rfind("dual ", 0) == 0) label = c.label.substr(5);
  return make_curve(c.dy.density, c.dx.density, keys, label);
}

namespace {

std::string monomial_primitive(int r) {
  if (r == 0) return "log z";
  if (r == 1) return "z";
  if (r == -1) return "z^-1";
  return "z^" + std::to_string(r) + "/" + std::to_string(r < 0 ? -r : r);
}

}  // namespace

SpectralCurve monomial_curve(int r, int s) {
  auto mono = [](int e) {
    return e >= 0 ? RationalFunction(Polynomial::monomial(e)) : RationalFunction(Polynomial(1), Polynomial::monomial(-e));
  };
  return make_curve(mono(r - 1), mono(s - 1), {Point::finite(0)},
                    "(" + monomial_primitive(r) + ", " + monomial_primitive(s) + ")");
}

// ---- parsing ----

namespace {

struct Token {
  enum Kind { Num, Z, Dz, Inf, Ident, Op, End } kind;
  std::string text;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char ch = static_cast<unsigned char>(s[i]);
    if (std::isspace(ch)) {
      ++i;
    } else if (std::isdigit(ch)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Num, s.substr(i, j - i)});
      i = j;
    } else if (std::isalpha(ch)) {
      std::size_t j = i;
      while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
      std::string w = s.substr(i, j - i);
      if (w == "z") out.push_back({Token::Z, w});
      else if (w == "dz") out.push_back({Token::Dz, w});
      else if (w == "inf" || w == "oo" || w == "infinity") out.push_back({Token::Inf, w});
      else out.push_back({Token::Ident, w});
      i = j;
    } else if (std::string("+-*/^()").find(static_cast<char>(ch)) != std::string::npos) {
      out.push_back({Token::Op, std::string(1, static_cast<char>(ch))});
      ++i;
    } else {
      fail(ErrorKind::ParseError, std::string("unexpected character '") + static_cast<char>(ch) + "'");
    }
  }
  out.push_back({Token::End, ""});
  return out;
}

class ExprParser {
 public:
  explicit ExprParser(std::vector<Token> toks) : t_(std::move(toks)) {}

  // `<expr> dz`, optionally followed by "* f" or "/ f".
  RationalFunction parse_form() {
    RationalFunction f(1);
    if (peek().kind != Token::Dz) f = expr();
    if (peek().kind != Token::Dz) fail(ErrorKind::ParseError, "expected 'dz'");
    ++pos_;
    // trailing "* f" or "/ f" after dz
    while (is_op("*") || is_op("/")) {
      bool div = is_op("/");
      ++pos_;
      RationalFunction g = power();
      f = div ? f / g : f * g;
    }
    expect_end();
    return f;
  }

  RationalFunction parse_plain() {
    RationalFunction f = expr();
    expect_end();
    return f;
  }

 private:
  const Token& peek() const { return t_[pos_]; }
  bool is_op(const char* op) const { return peek().kind == Token::Op && peek().text == op; }
  void expect_end() {
    if (peek().kind != Token::End) fail(ErrorKind::ParseError, "unexpected token '" + peek().text + "'");
  }

  RationalFunction expr() {
    RationalFunction acc = term();
    while (is_op("+") || is_op("-")) {
      bool minus = is_op("-");
      ++pos_;
      RationalFunction t = term();
      acc = minus ? acc - t : acc + t;
    }
    return acc;
  }

  bool starts_factor() const {
    const Token& k = peek();
    return k.kind == Token::Num || k.kind == Token::Z || (k.kind == Token::Op && k.text == "(");
  }

  RationalFunction term() {
    RationalFunction acc = unary();
    while (true) {
      if (is_op("*") || is_op("/")) {
        bool div = is_op("/");
        ++pos_;
        RationalFunction f = unary();
        acc = div ? acc / f : acc * f;
      } else if (starts_factor()) {
        acc = acc * power();
      } else {
        return acc;
      }
    }
  }

  RationalFunction unary() {
    if (is_op("-")) {
      ++pos_;
      return -unary();
    }
    if (is_op("+")) {
      ++pos_;
      return unary();
    }
    return power();
  }

  RationalFunction power() {
    RationalFunction base = primary();
    if (is_op("^")) {
      ++pos_;
      bool neg = false;
      if (is_op("-") || is_op("+")) {
        neg = is_op("-");
        ++pos_;
      }
      if (peek().kind != Token::Num) fail(ErrorKind::ParseError, "exponent must be an integer");
      long e = std::stol(peek().text);
      ++pos_;
      if (e > 10000) fail(ErrorKind::ParseError, "exponent too large");
      base = base.pow(static_cast<int>(neg ? -e : e));
    }
    return base;
  }

  RationalFunction primary() {
    const Token& k = peek();
    if (k.kind == Token::Num) {
      ++pos_;
      return RationalFunction(Rational(Integer(k.text)));
    }
    if (k.kind == Token::Z) {
      ++pos_;
      return RationalFunction(Polynomial::z());
    }
    if (is_op("(")) {
      ++pos_;
      RationalFunction f = expr();
      if (!is_op(")")) fail(ErrorKind::ParseError, "missing ')'");
      ++pos_;
      return f;
    }
    fail(ErrorKind::ParseError, k.kind == Token::End ? "unexpected end of expression" : "unexpected token '" + k.text + "'");
  }

  std::vector<Token> t_;
  std::size_t pos_ = 0;
};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<Point> parse_keys(const std::string& v) {
  std::string s = trim(v);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') fail(ErrorKind::ParseError, "keys must be written as [p1, p2, ...]");
  s = s.substr(1, s.size() - 2);
  std::vector<Point> keys;
  if (trim(s).empty()) return keys;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = s.find(',', start);
    std::string item = trim(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (item.empty()) fail(ErrorKind::ParseError, "empty key entry");
    keys.push_back(parse_point(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return keys;
}

}  // namespace

RationalFunction parse_expression(const std::string& text) { return ExprParser(tokenize(text)).parse_plain(); }

SpectralCurve parse_curve(const std::string& text) {
  // Strip comments, then split statements on ';' and newlines.
  std::string clean;
  bool comment = false;
  for (char ch : text) {
    if (ch == '#') comment = true;
    if (ch == '\n') comment = false;
    if (!comment) clean.push_back(ch == '\n' ? ';' : ch);
  }
  bool have_dx = false, have_dy = false, have_keys = false;
  RationalFunction dx, dy;
  std::vector<Point> keys;
  std::string label;
  std::size_t start = 0;
  while (start <= clean.size()) {
    std::size_t semi = clean.find(';', start);
    std::string stmt = trim(clean.substr(start, semi == std::string::npos ? std::string::npos : semi - start));
    start = semi == std::string::npos ? clean.size() + 1 : semi + 1;
    if (stmt.empty()) continue;
    std::size_t eq = stmt.find('=');
    if (eq == std::string::npos) fail(ErrorKind::ParseError, "expected '=' in statement '" + stmt + "'");
    std::string lhs = trim(stmt.substr(0, eq)), rhs = trim(stmt.substr(eq + 1));
    if (lhs == "dx" || lhs == "dy") {
      RationalFunction f = ExprParser(tokenize(rhs)).parse_form();
      if (f.is_zero()) fail(ErrorKind::ParseError, lhs + " must be nonzero");
      (lhs == "dx" ? dx : dy) = f;
      (lhs == "dx" ? have_dx : have_dy) = true;
    } else if (lhs == "keys") {
      keys = parse_keys(rhs);
      have_keys = true;
    } else if (lhs == "label") {
      label = rhs;
    } else {
      fail(ErrorKind::ParseError, "unknown statement '" + lhs + "'");
    }
  }
  if (!have_dx || !have_dy || !have_keys) fail(ErrorKind::ParseError, "curve needs dx, dy and keys");
  SpectralCurve c{OneForm{dx}, OneForm{dy}, {}, label};
  special_points(c);  // rejects irrational special points
  return make_curve(dx, dy, keys, label);
}

std::string curve_text(const SpectralCurve& c) {
  std::string s = "dx = (" + c.dx.density.str() + ") dz; dy = (" + c.dy.density.str() + ") dz; keys = [";
  for (std::size_t i = 0; i < c.keys.size(); ++i) s += (i ? ", " : "") + c.keys[i].str();
  return s + "]";
}

std::string curve_hash(const SpectralCurve& c) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : curve_text(c)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gtr
