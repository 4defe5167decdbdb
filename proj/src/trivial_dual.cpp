#include <functional>
#include <numeric>

#include "gtr/duality.hpp"

namespace gtr {

namespace {

using Fn = RationalFunction;
// (hbar degree, v degree) -> coefficient function of z.
using HV = std::map<std::pair<int, int>, Fn>;

void hv_add(HV& a, int h, int v, const Fn& f) {
  if (f.is_zero()) return;
  auto [it, inserted] = a.emplace(std::make_pair(h, v), f);
  if (!inserted) {
    it->second = it->second + f;
    if (it->second.is_zero()) a.erase(it);
  }
}

HV hv_mul(const HV& a, const HV& b, int H) {
  HV r;
  for (const auto& [ka, fa] : a)
    for (const auto& [kb, fb] : b)
      if (ka.first + kb.first <= H) hv_add(r, ka.first + kb.first, ka.second + kb.second, fa * fb);
  return r;
}

HV hv_one() {
  HV r;
  r[{0, 0}] = Fn(1);
  return r;
}

HV hv_scaled(const HV& a, const Fn& f) {
  HV r;
  for (const auto& [k, g] : a) hv_add(r, k.first, k.second, g * f);
  return r;
}

// sum_m c_m e^m for a series e without an hbar^0 term.
HV hv_compose(const HV& e, const std::function<Rational(int)>& c, int H) {
  HV r, p = hv_one();
  for (int m = 0; m <= H; ++m) {
    if (m > 0) p = hv_mul(p, e, H);
    if (p.empty()) break;
    Rational cm = c(m);
    if (sgn(cm) != 0) {
      for (const auto& [k, g] : p) hv_add(r, k.first, k.second, g * Fn(cm));
    }
  }
  return r;
}

struct CurveFns {
  Fn X, Y;
  Fn dy_op(const Fn& f) const { return f.derivative() / Y; }
};

// D[m] = d_y^m z.
std::vector<Fn> y_derivatives_of_z(const CurveFns& cf, int count) {
  std::vector<Fn> D{Fn(Polynomial::z())};
  for (int m = 1; m <= count; ++m) D.push_back(m == 1 ? Fn(1) / cf.Y : cf.dy_op(D.back()));
  return D;
}

Rational half_power_over_factorial(int m) {
  Rational r(1);
  for (int i = 1; i <= m; ++i) r /= 2 * i;
  return r;
}

struct Pieces {
  HV P;                          // e^{v(S-1)x} sqrt(dz^+/dz dz^-/dz)
  std::vector<HV> plus, minus;   // powers of zhat^+ - z and zhat^- - z
  HV inv_gap;                    // (v hbar) / (zhat^+ - zhat^-)
};

Pieces pieces(const CurveFns& cf, int H, bool with_gap) {
  Pieces out;
  std::vector<Fn> D = y_derivatives_of_z(cf, H + 1);
  HV dp, dm;
  for (int m = 1; m <= H; ++m) {
    Fn c = D[m] * Fn(half_power_over_factorial(m));
    hv_add(dp, m, m, c);
    hv_add(dm, m, m, m % 2 ? -c : c);
  }
  out.plus.push_back(hv_one());
  out.minus.push_back(hv_one());
  for (int a = 1; a <= H; ++a) {
    out.plus.push_back(hv_mul(out.plus.back(), dp, H));
    out.minus.push_back(hv_mul(out.minus.back(), dm, H));
  }
  auto deriv = [](const HV& a) {
    HV r;
    for (const auto& [k, f] : a) hv_add(r, k.first, k.second, f.derivative());
    return r;
  };
  HV dpp = deriv(dp), dmp = deriv(dm);
  HV eps = dpp;
  for (const auto& [k, f] : dmp) hv_add(eps, k.first, k.second, f);
  for (const auto& [k, f] : hv_mul(dpp, dmp, H)) hv_add(eps, k.first, k.second, f);
  HV J = hv_compose(eps, [](int m) -> Rational { return binomial(Rational(1, 2), static_cast<unsigned long>(m)); }, H);
  // v (S(v hbar d_y) - 1) x = sum_j s_j v^{2j+1} hbar^{2j} d_y^{2j} x.
  HV E;
  Fn dyx = cf.X / cf.Y;
  for (int k = 1; k <= H; ++k) {
    if (k % 2 == 0) hv_add(E, k, k + 1, dyx * Fn(s_coefficient(k / 2)));
    dyx = cf.dy_op(dyx);
  }
  HV expE = hv_compose(E, [](int m) -> Rational { return Rational(1) / Rational(factorial(static_cast<unsigned long>(m))); }, H);
  out.P = hv_mul(expE, J, H);
  if (with_gap) {
    // zhat^+ - zhat^- = v hbar D1 (1 + rho).
    HV rho;
    for (int m = 3; m <= H + 1; m += 2)
      hv_add(rho, m - 1, m - 1, D[m] * cf.Y * Fn(2 * half_power_over_factorial(m)));
    HV inv = hv_compose(rho, [](int m) -> Rational { return Rational(m % 2 ? -1 : 1); }, H);
    out.inv_gap = hv_scaled(inv, cf.Y);
  }
  return out;
}

using PairMap = std::map<std::pair<int, int>, int>;  // (i < j) -> e for (z_i - z_j)^{-e}

struct State {
  Rational c;
  int h = 0;
  std::vector<PoleIndex> tag;
  std::vector<HV> U;
  PairMap pairs;
};

class ClosedForm {
 public:
  ClosedForm(const SpectralCurve& c, int n, int H) : c_(c), n_(n), H_(H) {
    cf_.X = c.dx.density;
    cf_.Y = c.dy.density;
  }

  std::map<std::vector<PoleIndex>, Rational> run() {
    if (n_ == 1) {
      Pieces pc = pieces(cf_, H_ + 1, true);
      HV G = hv_mul(pc.P, pc.inv_gap, H_ + 1);
      // Divide by v hbar; the v^{-1} part is not reached by [v^k], k >= 0.
      HV U;
      for (const auto& [k, f] : G)
        if (k.second >= 1 && k.first >= 1) hv_add(U, k.first - 1, k.second - 1, f);
      State s{Rational(-1), 0, {}, {U}, {}};
      process(s, 0);
    } else {
      Pieces pc = pieces(cf_, H_, false);
      std::vector<int> rest(n_ - 1);
      std::iota(rest.begin(), rest.end(), 1);
      // n-cycles: 0 -> rest[0] -> rest[1] -> ... -> 0.
      do {
        std::vector<int> sigma(n_), inv(n_);
        int cur = 0;
        for (int r : rest) {
          sigma[cur] = r;
          cur = r;
        }
        sigma[cur] = 0;
        for (int i = 0; i < n_; ++i) inv[sigma[i]] = i;
        std::vector<int> m(n_, 0), a(n_, 0);
        enumerate(pc, sigma, inv, m, a, 0, 0);
      } while (std::next_permutation(rest.begin(), rest.end()));
    }
    return std::move(out_);
  }

 private:
  void enumerate(const Pieces& pc, const std::vector<int>& sigma, const std::vector<int>& inv, std::vector<int>& m,
                 std::vector<int>& a, int i, int used) {
    if (i == n_) {
      State s;
      // (-1)^n from the output operator and (-1)^{n-1} from the cycle sum.
      s.c = Rational(-1);
      for (int j = 0; j < n_; ++j) {
        s.c *= binomial(Rational(m[j]), static_cast<unsigned long>(a[j]));
        if (a[j] % 2) s.c = -s.c;
        int p = j, q = sigma[j], e = m[j] + 1;
        if (p > q) {
          std::swap(p, q);
          if (e % 2) s.c = -s.c;
        }
        s.pairs[{p, q}] += e;
      }
      for (int j = 0; j < n_; ++j) {
        int b = m[inv[j]] - a[inv[j]];
        s.U.push_back(hv_mul(hv_mul(pc.P, pc.plus[a[j]], H_), pc.minus[b], H_));
      }
      process(s, 0);
      return;
    }
    for (m[i] = 0; used + m[i] <= H_; ++m[i])
      for (a[i] = 0; a[i] <= m[i]; ++a[i]) enumerate(pc, sigma, inv, m, a, i + 1, used + m[i]);
    m[i] = a[i] = 0;
  }

  // f |-> -d(f / dx) in variable i, acting on f times the pair factors.
  std::map<PairMap, Fn> op(const std::map<PairMap, Fn>& F, int i) const {
    std::map<PairMap, Fn> r;
    auto add = [&](const PairMap& p, const Fn& f) {
      if (f.is_zero()) return;
      auto [it, inserted] = r.emplace(p, f);
      if (!inserted) it->second = it->second + f;
    };
    for (const auto& [P, f] : F) {
      Fn t = f / cf_.X;
      add(P, -t.derivative());
      for (const auto& [ij, e] : P) {
        if (ij.first != i && ij.second != i) continue;
        PairMap Q = P;
        ++Q[ij];
        add(Q, -t * Fn(ij.first == i ? -e : e));
      }
    }
    return r;
  }

  void process(const State& s, int i) {
    for (const auto& [hk, f] : s.U[i]) {
      int h = s.h + hk.first;
      if (h > H_) continue;
      if (i == n_ - 1 && h != H_) continue;
      std::map<PairMap, Fn> F{{s.pairs, f}};
      for (int k = 0; k < hk.second; ++k) F = op(F, i);
      for (const auto& [P, g] : F)
        for (const Point& q : c_.keys) expand(s, i, h, P, g, q);
    }
  }

  // Principal part at q in variable i of g(z_i) dz_i times the pair factors P.
  void expand(const State& s, int i, int h, const PairMap& P, const Fn& g, const Point& q) {
    ScalarJet J = local_expand(OneForm{g}, q, 1).density;
    if (J.trunc() < 0) fail(ErrorKind::Internal, "closed form expansion too short");
    int v = J.valuation();
    if (v >= 0) return;
    struct Link {
      int j, e;
      Rational sign;
    };
    std::vector<Link> links;
    PairMap rest;
    int base = 0;
    for (const auto& [ij, e] : P) {
      if (ij.first == i) links.push_back({ij.second, e, Rational(1)});
      else if (ij.second == i) links.push_back({ij.first, e, Rational(e % 2 ? -1 : 1)});
      else rest[ij] = e;
      if (q.infinite && (ij.first == i || ij.second == i)) base += e;
    }
    int tmax = -1 - v - base;
    if (tmax < 0) return;
    Polynomial z = Polynomial::z();
    // Taylor degree t_l for each link; the factor for z_j is collected in `fac`.
    std::vector<int> t(links.size(), 0);
    std::function<void(std::size_t, int, Rational, std::vector<Fn>&)> rec = [&](std::size_t l, int deg, Rational coef,
                                                                              std::vector<Fn>& fac) {
      if (l == links.size()) {
        for (const auto& [ex, cval] : J.terms()) {
          int total = ex + deg + base;
          if (total >= 0) break;
          int k = -total - 1;
          State ns;
          ns.c = s.c * coef * cval;
          if (k > 0) ns.c *= Rational(-1, k);
          ns.h = h;
          ns.tag = s.tag;
          ns.tag.push_back(PoleIndex{q, k});
          ns.pairs = rest;
          ns.U = s.U;
          ns.U[i].clear();
          for (std::size_t m = 0; m < links.size(); ++m) ns.U[links[m].j] = hv_scaled(ns.U[links[m].j], fac[m]);
          finish(ns, i);
        }
        return;
      }
      const Link& L = links[l];
      for (int tt = 0; deg + tt <= tmax; ++tt) {
        Rational c;
        Fn f;
        if (!q.infinite) {
          // (zeta + q - z_j)^{-e}
          c = binomial(Rational(-L.e), static_cast<unsigned long>(tt));
          Polynomial d(1);
          for (int r = 0; r < L.e + tt; ++r) d *= Polynomial(q.value) - z;
          f = Fn(Polynomial(1), d);
        } else {
          // (1/w - z_j)^{-e} = w^e (1 - w z_j)^{-e}
          c = binomial(Rational(L.e + tt - 1), static_cast<unsigned long>(tt));
          f = Fn(Polynomial::monomial(tt));
        }
        fac[l] = f;
        rec(l + 1, deg + tt, coef * c * L.sign, fac);
      }
    };
    std::vector<Fn> fac(links.size());
    rec(0, 0, Rational(1), fac);
  }

  void finish(const State& s, int i) {
    if (i + 1 < n_) {
      process(s, i + 1);
      return;
    }
    auto [it, inserted] = out_.emplace(s.tag, s.c);
    if (!inserted) it->second += s.c;
  }

  const SpectralCurve& c_;
  CurveFns cf_;
  int n_, H_;
  std::map<std::vector<PoleIndex>, Rational> out_;
};

}  // namespace

ZHat z_hat(const RationalFunction& dy, int order) {
  CurveFns cf{RationalFunction(1), dy};
  std::vector<Fn> D = y_derivatives_of_z(cf, order);
  ZHat out;
  for (int m = 0; m <= order; ++m) out.c.push_back(m == 0 ? D[0] : D[m] * Fn(half_power_over_factorial(m)));
  return out;
}

std::map<int, RationalFunction> log_shift(const SpectralCurve& c, int hbar_max) {
  const Fn& X = c.dx.density;
  RootList roots = rational_roots(X.den());
  if (roots.residual_degree > 0) fail(ErrorKind::IrrationalSpecialPoint, "dx has poles at irrational points");
  CurveFns cf{X, c.dy.density};
  std::map<int, RationalFunction> out;
  Polynomial dden = X.den().derivative();
  for (const auto& [a, mult] : roots.roots) {
    if (mult != 1 || sgn(a) == 0) continue;
    Rational alpha = dden.eval(a) / X.num().eval(a);
    // d_y log(z - a), then further d_y's.
    Fn d = Fn(Polynomial(1), Polynomial::z() - Polynomial(a)) / cf.Y;
    Rational apow = alpha;  // alpha^{2j-1}
    for (int k = 1; k <= hbar_max; ++k) {
      if (k > 1) d = cf.dy_op(d);
      if (k % 2 == 0) {
        Fn term = d * Fn(inv_s_coefficient(k / 2) * apow);
        apow *= alpha * alpha;
        if (!term.is_zero()) out[k] = out.count(k) ? out[k] + term : term;
      }
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

MultiDifferential closed_form_trivial_dual(const SpectralCurve& c, int g, int n) {
  if (g == 0 && n == 2) fail(ErrorKind::InvalidArgument, "(0,2) is the kernel B, not a pole-basis tensor");
  if (g < 0 || n < 1 || 2 * g - 2 + n < 1) fail(ErrorKind::InvalidArgument, "only stable cells");
  for (const auto& sp : special_points(c))
    if (sp.special && !std::binary_search(c.keys.begin(), c.keys.end(), sp.point))
      fail(ErrorKind::NotTrivialDual, "special point " + sp.point.str() + " is not a key");
  ClosedForm cf(c, n, 2 * g - 2 + n);
  MultiDifferential w(g, n);
  for (const auto& [tag, coef] : cf.run()) {
    if (sgn(coef) == 0) continue;
    for (const PoleIndex& p : tag)
      if (p.k == 0) fail(ErrorKind::Internal, "closed form left a residue at " + p.q.str());
    w.add(tag, coef);
  }
  return w;
}

}  // namespace gtr
