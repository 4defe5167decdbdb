#include "gtr/verify.hpp"

#include <algorithm>
#include <numeric>

#include "gtr/ceo.hpp"

namespace gtr {

namespace {

using json = nlohmann::ordered_json;

json indices_json(const SlotKey& k, int from, int to) {
  json a = json::array();
  for (int i = from; i < to; ++i) {
    PoleIndex p = to_pole(k[i]);
    a.push_back(json::array({p.q.str(), p.k}));
  }
  return a;
}

json first_term(const SpecTensor& t, int from, int to) {
  if (t.empty()) return json();
  const auto& [k, c] = *t.terms.begin();
  return json{{"idx", indices_json(k, from, to)}, {"coeff", c.get_str()}};
}

VerificationReport make_report(const std::string& check, const SpectralCurve& c) {
  VerificationReport r;
  r.check = check;
  r.curve = c.label.empty() ? curve_text(c) : c.label;
  return r;
}

void not_applicable(VerificationReport& r, const std::string& why) {
  r.verdict = Verdict::NotApplicable;
  r.params["reason"] = why;
}

// Monomials zeta^e, e = -(m r + 1), with a nonzero spectator tensor.
std::vector<json> loop_failures(const SpectralCurve& c, const CellSource& cells, const Point& q, int g, int n,
                                int kmax, const Rational& y_shift, int order) {
  LocalContext ctx(c.dx, c.dy, q, order);
  WRequest req;
  req.g = g;
  req.a = n;
  for (int i = 0; i < n; ++i) req.pos_a.push_back(i + 1);
  req.require_same_chi = 2 * g - 1 + n >= 1;
  std::vector<TensorJet> W = build_W(ctx, cells, req);

  ScalarJet x = ctx.da().primitive();
  int r = x.valuation();
  Rational u0 = x.coeff(r);
  // x = u0 t^r; zeta as a series in t.
  ScalarJet t = unit_power(x.shifted(-r).scaled(1 / u0), Rational(1, r)).shifted(1);
  ScalarJet zeta = reverse(t);
  ScalarJet y = ctx.db().primitive();
  if (sgn(y_shift) != 0) y += ScalarJet::monomial(0, y_shift);

  std::vector<json> out;
  std::vector<ScalarJet> ypow{ScalarJet::monomial(0, Rational(1))};
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) ypow.push_back(mul(ypow.back(), y));
    TensorJet eta(kExactOrder);
    Rational f = 1;
    for (int j = 0; j <= k; ++j) {
      if (j > 0) f /= j;
      if (k - j >= static_cast<int>(W.size())) continue;
      eta += mul(W[k - j], ypow[j].scaled(f));
    }
    TensorJet et = pull_back(eta, zeta);
    if (et.trunc() < 0) fail(ErrorKind::PrecisionError, "loop expansion short of precision");
    for (const auto& [e, v] : et.terms()) {
      if (e >= 0) break;
      if ((-e - 1) % r != 0 || v.empty()) continue;
      out.push_back(json{{"g", g}, {"n", n}, {"k", k}, {"point", q.str()}, {"exponent", e},
                         {"term", first_term(v, 1, n + 1)}});
    }
  }
  return out;
}

}  // namespace

bool loop_applicable(const SpectralCurve& c, const Point& q) {
  if (std::find(c.keys.begin(), c.keys.end(), q) == c.keys.end()) return false;
  PointClassification p = classify(c, q);
  return p.r >= 2 && p.s == 1;
}

VerificationReport loop_check(const SpectralCurve& c, const CellSource& cells, const Point& q, int g, int n, int kmax,
                              const Rational& y_shift) {
  if (!loop_applicable(c, q))
    fail(ErrorKind::HypothesisViolated, "no loop equations at " + q.str() + ": need a key with r >= 2 and s = 1");
  if (g < 0 || n < 0 || 2 * g - 1 + n < 0) fail(ErrorKind::InvalidArgument, "loop_check needs 2g - 1 + n >= 0");
  if (n + 1 > kMaxSlots) fail(ErrorKind::InvalidArgument, "arity exceeds the slot limit");
  PointClassification p = classify(c, q);
  VerificationReport rep = make_report("loop", c);
  rep.params = json{{"point", q.str()}, {"g", g}, {"n", n}, {"kmax", kmax}, {"r", p.r}, {"y_shift", y_shift.get_str()}};
  int start = initial_order(g, n + 1, p.r, p.s) + p.r * (kmax + 1);
  auto bad = with_escalation(start, [&](int order) { return loop_failures(c, cells, q, g, n, kmax, y_shift, order); });
  for (auto& w : bad) rep.fail_with(std::move(w));
  return rep;
}

VerificationReport loop_suite(GeneralizedTR& e, int chi_max, int kmax) {
  const SpectralCurve& c = e.curve();
  VerificationReport rep = make_report("loop", c);
  rep.params = json{{"chi_max", chi_max}, {"kmax", kmax}};
  std::vector<Point> pts;
  for (const Point& q : c.keys)
    if (loop_applicable(c, q)) pts.push_back(q);
  if (pts.empty()) {
    not_applicable(rep, "no key with r >= 2 and dy regular and nonzero");
    return rep;
  }
  json checked = json::array(), levels = json::array();
  for (const Point& q : pts) {
    int r = classify(c, q).r;
    int K = kmax < 0 ? r : kmax;
    levels.push_back(json{{"point", q.str()}, {"r", r}, {"kmax", K}});
    for (int chi = 0; chi <= chi_max; ++chi)
      for (int g = 0; 2 * g - 1 <= chi; ++g) {
        int n = chi + 1 - 2 * g;
        if (n + 1 > kMaxSlots) continue;
        if (chi >= 1) e.get(g, n + 1);
        VerificationReport one = loop_check(c, e, q, g, n, K);
        checked.push_back(json::array({q.str(), g, n, K}));
        for (auto& w : one.witnesses) rep.fail_with(std::move(w));
      }
  }
  rep.params["points"] = levels;
  rep.params["checked"] = checked;
  return rep;
}

VerificationReport loop_negative_control(GeneralizedTR& e, const Point& q, int g, int n) {
  const SpectralCurve& c = e.curve();
  if (!loop_applicable(c, q)) fail(ErrorKind::HypothesisViolated, "no loop equations at " + q.str());
  if (2 * g - 1 + n < 1) fail(ErrorKind::InvalidArgument, "the negative control needs a stable cell");
  int r = classify(c, q).r;
  const MultiDifferential& w = e.get(g, n + 1);
  VerificationReport rep = make_report("loop_negative_control", c);
  rep.params = json{{"point", q.str()}, {"g", g}, {"n", n}};

  // One representative spectator tuple, and the pole orders to perturb in slot 0.
  std::vector<PoleIndex> rest;
  int kmax_pole = 0;
  bool have_rest = false;
  for (const auto& [k, v] : w.tensor().terms) {
    PoleIndex p0 = to_pole(k[0]);
    if (p0.q != q) continue;
    kmax_pole = std::max(kmax_pole, p0.k);
    if (!have_rest) {
      for (int i = 1; i <= n; ++i) rest.push_back(to_pole(k[i]));
      have_rest = true;
    }
  }
  if (!have_rest)
    for (int i = 0; i < n; ++i) rest.push_back(PoleIndex{q, 1});
  json runs = json::array();
  for (int k0 = 1; k0 <= kmax_pole + 1; ++k0) {
    MultiDifferential bumped = w;
    std::vector<PoleIndex> idx{PoleIndex{q, k0}};
    idx.insert(idx.end(), rest.begin(), rest.end());
    bumped.add_symmetric(idx, Rational(1));
    ReplacedCell cells(e, g, n + 1, bumped.tensor());
    VerificationReport one = loop_check(c, cells, q, g, n, r - 1);
    json run{{"perturbed", indices_json(make_key(idx), 0, n + 1)}, {"broken", !one.passed()}};
    runs.push_back(run);
    if (one.passed()) rep.fail_with(run);
  }
  rep.params["runs"] = runs;
  return rep;
}

VerificationReport symmetry_check(const SpectralCurve& c, const Cells& cells) {
  VerificationReport rep = make_report("symmetry", c);
  json checked = json::array();
  for (const auto& [gn, w] : cells) {
    checked.push_back(json::array({gn.first, gn.second}));
    Rational d = symmetry_defect(w);
    if (sgn(d) != 0) rep.fail_with(json{{"g", gn.first}, {"n", gn.second}, {"defect", d.get_str()}});
  }
  rep.params["cells"] = checked;
  return rep;
}

VerificationReport compare_engines(const SpectralCurve& c, int chi_max, const EngineOptions& opt) {
  VerificationReport rep = make_report("ceo", c);
  rep.params = json{{"chi_max", chi_max}};
  try {
    check_ceo_admissible(c);
  } catch (const Error& e) {
    not_applicable(rep, e.what());
    return rep;
  }
  Cells a = generalized_tr(c, chi_max, opt);
  Cells b = ceo_all(c, chi_max, opt);
  for (const auto& [gn, w] : a) {
    auto it = b.find(gn);
    if (it == b.end()) {
      rep.fail_with(json{{"g", gn.first}, {"n", gn.second}, {"missing", "ceo"}});
      continue;
    }
    if (w == it->second) continue;
    SpecTensor d = w.tensor();
    coeff_fma(d, it->second.tensor(), Rational(-1));
    rep.fail_with(json{{"g", gn.first}, {"n", gn.second}, {"difference", first_term(d, 0, gn.second)}});
  }
  return rep;
}

namespace {

bool trivial_dual_applies(const SpectralCurve& c) {
  for (const PointClassification& p : special_points(c))
    if (std::find(c.keys.begin(), c.keys.end(), p.point) == c.keys.end()) return false;
  return true;
}

void check_zero_cells(VerificationReport& rep, const Cells& cells) {
  for (const auto& [gn, w] : cells)
    if (!w.is_zero()) rep.fail_with(json{{"g", gn.first}, {"n", gn.second}, {"term", first_term(w.tensor(), 0, gn.second)}});
}

void compare_cells(VerificationReport& rep, const Cells& want, const Cells& got) {
  for (const auto& [gn, w] : want) {
    auto it = got.find(gn);
    MultiDifferential zero(gn.first, gn.second);
    const MultiDifferential& o = it == got.end() ? zero : it->second;
    if (w == o) continue;
    SpecTensor d = w.tensor();
    coeff_fma(d, o.tensor(), Rational(-1));
    rep.fail_with(json{{"g", gn.first}, {"n", gn.second}, {"difference", first_term(d, 0, gn.second)}});
  }
}

}  // namespace

VerificationReport dual_trivial_check(const SpectralCurve& c, const Cells& omega, int chi_max) {
  VerificationReport rep = make_report("dual_trivial", c);
  rep.params = json{{"chi_max", chi_max}};
  if (!trivial_dual_applies(c)) {
    not_applicable(rep, "some special point is not a key");
    return rep;
  }
  check_zero_cells(rep, xy_dual(c, omega, chi_max));
  return rep;
}

std::vector<VerificationReport> dual_checks(const SpectralCurve& c, const Cells& omega, int chi_max) {
  LadderResult lr = xy_ladder(c, omega, chi_max);
  SpectralCurve dc = dual_curve(c);
  std::vector<VerificationReport> out;

  VerificationReport hol = make_report("dual_holomorphic", c);
  hol.params = json{{"chi_max", chi_max}, {"grid_size", lr.grid_size}, {"checked_tuples", lr.checked_tuples}};
  for (const StrayPole& s : lr.stray)
    hol.fail_with(json{{"g", s.g}, {"n", s.n}, {"point", s.point.str()}, {"diagonal", s.at_grid}});
  out.push_back(hol);

  VerificationReport rec = make_report("dual_recursion", c);
  rec.params = json{{"chi_max", chi_max}, {"dual_curve", curve_text(dc)}};
  compare_cells(rec, generalized_tr(dc, chi_max), lr.omega);
  out.push_back(rec);

  VerificationReport rt = make_report("dual_roundtrip", c);
  rt.params = json{{"chi_max", chi_max}};
  if (!lr.stray.empty()) {
    not_applicable(rt, "the dual has stray poles");
  } else {
    compare_cells(rt, omega, xy_inverse(c, lr.omega, chi_max));
  }
  out.push_back(rt);

  VerificationReport triv = make_report("dual_trivial", c);
  triv.params = json{{"chi_max", chi_max}};
  if (trivial_dual_applies(c)) check_zero_cells(triv, lr.omega);
  else not_applicable(triv, "some special point is not a key");
  out.push_back(triv);
  return out;
}

// ---- determinantal identities ----

namespace {

void mp_add(MPoly& a, const MPoly& b, const Rational& s = 1) {
  for (const auto& [e, c] : b) {
    Rational v = c * s;
    if (sgn(v) == 0) continue;
    auto [it, ins] = a.emplace(e, v);
    if (!ins) {
      it->second += v;
      if (sgn(it->second) == 0) a.erase(it);
    }
  }
}

MPoly mp_mul(const MPoly& a, const MPoly& b) {
  MPoly r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      mp_add(r, MPoly{{e, ca * cb}});
    }
  return r;
}

MPoly mp_const(int nv, const Rational& c) {
  MPoly r;
  if (sgn(c) != 0) r[std::vector<int>(nv, 0)] = c;
  return r;
}

MPoly mp_var_power(int nv, int i, int e, const Rational& c = 1) {
  std::vector<int> ex(nv, 0);
  ex[i] = e;
  return MPoly{{ex, c}};
}

// a_i - a_j
MPoly mp_diff(int nv, int i, int j) {
  MPoly r = mp_var_power(nv, i, 1);
  mp_add(r, mp_var_power(nv, j, 1), Rational(-1));
  return r;
}

// p / (a_i - a_j); false when the division leaves a remainder.
bool mp_div_linear(const MPoly& p, int i, int j, MPoly& q) {
  std::map<int, MPoly> by;  // a_i-degree -> coefficient (a_i exponent zeroed)
  for (const auto& [e, c] : p) {
    std::vector<int> rest = e;
    rest[i] = 0;
    by[e[i]][rest] = c;
  }
  q.clear();
  if (by.empty()) return true;
  int D = by.rbegin()->first;
  // q_{d-1} = c_d + a_j q_d, remainder c_0 + a_j q_0.
  MPoly cur;
  for (int d = D; d >= 0; --d) {
    MPoly next;
    for (const auto& [e, c] : cur) {
      std::vector<int> f = e;
      ++f[j];
      next[f] = c;
    }
    auto it = by.find(d);
    if (it != by.end()) mp_add(next, it->second);
    if (d == 0) return next.empty();
    for (const auto& [e, c] : next) {
      std::vector<int> f = e;
      f[i] = d - 1;
      q[f] = c;
    }
    cur = std::move(next);
  }
  return true;
}

MPoly mp_rename(const MPoly& p, int nv, int to0, int to1) {
  MPoly r;
  for (const auto& [e, c] : p) {
    std::vector<int> f(nv, 0);
    f[to0] += e[0];
    f[to1] += e[1];
    mp_add(r, MPoly{{f, c}});
  }
  return r;
}

using MSeries = std::vector<MPoly>;

MSeries ms_mul(const MSeries& a, const MSeries& b, int hmax) {
  MSeries r(hmax + 1);
  for (int i = 0; i <= hmax && i < static_cast<int>(a.size()); ++i)
    for (int j = 0; i + j <= hmax && j < static_cast<int>(b.size()); ++j)
      if (!a[i].empty() && !b[j].empty()) mp_add(r[i + j], mp_mul(a[i], b[j]));
  return r;
}

std::string monomial_str(const std::vector<int>& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += "a" + std::to_string(i + 1);
    if (e[i] != 1) s += "^" + std::to_string(e[i]);
  }
  return s.empty() ? "1" : s;
}

// Density of a pole-basis tensor as a polynomial in the a-variables.
MPoly density_poly(const MultiDifferential& w, const Point& q) {
  int n = w.arity();
  MPoly r;
  for (const auto& [k, c] : w.tensor().terms) {
    std::vector<int> e(n);
    Rational v = c;
    for (int i = 0; i < n; ++i) {
      PoleIndex p = to_pole(k[i]);
      if (p.q != q) fail(ErrorKind::MultiPointUnsupported, "poles at more than one point");
      if (q.infinite) {
        e[i] = p.k - 1;
        v *= p.k;
      } else {
        e[i] = p.k + 1;
        v *= -p.k;
      }
    }
    mp_add(r, MPoly{{e, v}});
  }
  return r;
}

MultiDifferential poly_to_tensor(const MPoly& p, const Point& q, int g, int n) {
  MultiDifferential w(g, n);
  for (const auto& [e, c] : p) {
    std::vector<PoleIndex> idx;
    Rational v = c;
    for (int i = 0; i < n; ++i) {
      int k = q.infinite ? e[i] + 1 : e[i] - 1;
      if (k < 1) fail(ErrorKind::NonRationalPrimitive, "cyclic sum is not in the pole basis");
      v /= q.infinite ? k : -k;
      idx.push_back(PoleIndex{q, k});
    }
    w.add(idx, v);
  }
  return w;
}

// V^2 = prod_{i<j} (a_i - a_j)^2.
MPoly vandermonde_sq(int n) {
  MPoly v = mp_const(n, Rational(1));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      MPoly d = mp_diff(n, i, j);
      v = mp_mul(v, mp_mul(d, d));
    }
  return v;
}

// All n-cycles as sigma arrays.
std::vector<std::vector<int>> n_cycles(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> rest(n - 1);
  std::iota(rest.begin(), rest.end(), 1);
  do {
    std::vector<int> s(n);
    int cur = 0;
    for (int x : rest) {
      s[cur] = x;
      cur = x;
    }
    s[cur] = 0;
    out.push_back(s);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

// s P sum_sigma prod K(a_i, a_sigma(i)) V^2 / prod (a_sigma(i) - a_i) at hbar^h.
MPoly cyclic_numerator(const BAKernel& K, int n, int h) {
  int H = static_cast<int>(K.h.size()) - 1;
  if (h > H) fail(ErrorKind::InvalidArgument, "hbar order beyond the kernel");
  std::map<std::pair<int, int>, MSeries> kij;
  auto kernel = [&](int i, int j) -> const MSeries& {
    auto it = kij.find({i, j});
    if (it != kij.end()) return it->second;
    MSeries s(h + 1);
    for (int m = 0; m <= h; ++m) s[m] = mp_rename(K.h[m], n, i, j);
    return kij.emplace(std::make_pair(i, j), std::move(s)).first->second;
  };
  MPoly N;
  for (const auto& sigma : n_cycles(n)) {
    MSeries prod{mp_const(n, Rational(1))};
    for (int i = 0; i < n; ++i) prod = ms_mul(prod, kernel(i, sigma[i]), h);
    if (prod.size() <= static_cast<std::size_t>(h) || prod[h].empty()) continue;
    std::map<std::pair<int, int>, int> mult;
    int sign = 1;
    for (int i = 0; i < n; ++i) {
      mult[{std::min(i, sigma[i]), std::max(i, sigma[i])}]++;
      if (sigma[i] > i) sign = -sign;
    }
    MPoly cof = mp_const(n, Rational(sign));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        auto it = mult.find({i, j});
        int m = it == mult.end() ? 0 : it->second;
        for (int t = 0; t < 2 - m; ++t) cof = mp_mul(cof, mp_diff(n, i, j));
      }
    mp_add(N, mp_mul(prod[h], cof));
  }
  MPoly pref;
  if (K.q.infinite) {
    pref = mp_const(n, Rational(-1));
  } else {
    std::vector<int> e(n, 2);
    pref = MPoly{{e, Rational(n % 2 ? 1 : -1)}};
  }
  return mp_mul(pref, N);
}

MPoly divide_by_vandermonde_sq(MPoly p, int n) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int t = 0; t < 2; ++t) {
        MPoly q;
        if (!mp_div_linear(p, i, j, q))
          fail(ErrorKind::NonRationalPrimitive, "cyclic sum keeps a pole on a diagonal");
        p = std::move(q);
      }
  return p;
}

}  // namespace

BAKernel ba_kernel(const SpectralCurve& c, const Cells& cells, int hbar_max) {
  std::vector<Point> support;
  for (const auto& [gn, w] : cells)
    for (const Point& p : w.support())
      if (std::find(support.begin(), support.end(), p) == support.end()) support.push_back(p);
  if (support.size() > 1) fail(ErrorKind::MultiPointUnsupported, "differentials have poles at several points");
  BAKernel K;
  if (!support.empty()) K.q = support.front();
  else if (!c.keys.empty()) K.q = c.keys.front();
  else fail(ErrorKind::InvalidArgument, "curve without keys");

  // Exponent E = sum hbar^{2g-2+n} / n! I^{(g)}_n with I_n = sum c prod (a1^k - a2^k).
  MSeries E(hbar_max + 1);
  std::map<std::vector<int>, MPoly> prod_cache;
  for (const auto& [gn, w] : cells) {
    auto [g, n] = gn;
    int h = 2 * g - 2 + n;
    if (h < 1 || h > hbar_max) continue;
    Rational inv_fact = 1;
    for (int i = 2; i <= n; ++i) inv_fact /= i;
    for (const auto& [k, c] : w.tensor().terms) {
      std::vector<int> ks;
      for (int i = 0; i < n; ++i) ks.push_back(index_order(k[i]));
      std::sort(ks.begin(), ks.end());
      auto it = prod_cache.find(ks);
      if (it == prod_cache.end()) {
        MPoly p = mp_const(2, Rational(1));
        for (int kk : ks) {
          MPoly f = mp_var_power(2, 0, kk);
          mp_add(f, mp_var_power(2, 1, kk), Rational(-1));
          p = mp_mul(p, f);
        }
        it = prod_cache.emplace(ks, std::move(p)).first;
      }
      mp_add(E[h], it->second, c * inv_fact);
    }
  }
  // exp(E), E of hbar-valuation >= 1.
  K.h.assign(hbar_max + 1, MPoly());
  K.h[0] = mp_const(2, Rational(1));
  MSeries term = K.h;
  Rational inv_m = 1;
  for (int m = 1; m <= hbar_max; ++m) {
    term = ms_mul(term, E, hbar_max);
    inv_m /= m;
    for (int h = 0; h <= hbar_max; ++h) mp_add(K.h[h], term[h], inv_m);
  }
  return K;
}

MultiDifferential cyclic_sum(const BAKernel& k, int n, int h) {
  if (n < 2) fail(ErrorKind::InvalidArgument, "cyclic sums need n >= 2");
  if (n == 2 && h == 0) fail(ErrorKind::InvalidArgument, "the leading n = 2 term is the kernel B");
  MPoly p = divide_by_vandermonde_sq(cyclic_numerator(k, n, h), n);
  int g = (h + 2 - n) % 2 == 0 ? std::max(0, (h + 2 - n) / 2) : 0;
  return poly_to_tensor(p, k.q, g, n);
}

VerificationReport determinantal_check(const SpectralCurve& c, const Cells& cells, int nmax, int hbar_max) {
  VerificationReport rep = make_report("determinantal", c);
  rep.params = json{{"nmax", nmax}, {"hbar_max", hbar_max}};
  BAKernel K;
  try {
    K = ba_kernel(c, cells, hbar_max);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::MultiPointUnsupported) throw;
    not_applicable(rep, e.what());
    return rep;
  }
  rep.params["point"] = K.q.str();
  auto lhs = [&](int g, int n) -> MPoly {
    if (g < 0) return {};
    auto it = cells.find({g, n});
    if (it == cells.end()) return {};
    return density_poly(it->second, K.q);
  };
  auto report_diff = [&](int n, int h, const MPoly& want, const MPoly& got) {
    MPoly d = want;
    mp_add(d, got, Rational(-1));
    if (d.empty()) return;
    const auto& [e, v] = *d.begin();
    rep.fail_with(json{{"n", n}, {"h", h}, {"monomial", monomial_str(e)}, {"difference", v.get_str()}});
  };
  for (int n = 1; n <= nmax; ++n)
    for (int h = 0; h <= hbar_max; ++h) {
      int twice_g = h + 2 - n;
      int g = twice_g % 2 == 0 ? twice_g / 2 : -1;
      if (n == 1) {
        MPoly num = K.h[h];
        if (h == 0) mp_add(num, mp_const(2, Rational(1)), Rational(-1));
        MPoly q;
        if (!mp_div_linear(num, 1, 0, q)) {
          rep.fail_with(json{{"n", 1}, {"h", h}, {"reason", "kernel minus its leading term does not vanish on the diagonal"}});
          continue;
        }
        MPoly diag;
        for (const auto& [e, v] : q) mp_add(diag, MPoly{{std::vector<int>{e[0] + e[1]}, v}});
        MPoly got = K.q.infinite ? mp_mul(diag, mp_const(1, Rational(-1))) : mp_mul(diag, mp_var_power(1, 0, 2));
        report_diff(1, h, lhs(g, 1), got);
        continue;
      }
      MPoly want;
      if (n == 2 && h == 0) want = K.q.infinite ? mp_const(2, Rational(1)) : MPoly{{std::vector<int>{2, 2}, Rational(1)}};
      else want = mp_mul(lhs(g, n), vandermonde_sq(n));
      report_diff(n, h, want, cyclic_numerator(K, n, h));
    }
  return rep;
}

}  // namespace gtr
