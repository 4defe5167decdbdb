#include "gtr/engine.hpp"

#include <bit>

#include "gtr/graded.hpp"

namespace gtr {

namespace {

const std::vector<Point> kNoGrid;

using Series = GradedSeries<TensorJet>;
using ScalarSeries = GradedSeries<ScalarJet>;

// Density jet of dA truncated far enough that its inverse is known to `order`.
ScalarJet working_density(const OneForm& w, const Point& p, int order) {
  int v = form_valuation(w, p);
  int t = order + 2 * std::abs(v) + 4;
  ScalarJet d = local_expand(w, p, t).density;
  bool monomial = d.is_exact() && d.terms().size() == 1;
  return monomial ? d : d.truncated(t);
}

Rational inv_factorial(int k) {
  Rational r = 1;
  for (int i = 2; i <= k; ++i) r /= i;
  return r;
}

SpecTensor relabel(const SpecTensor& t, const std::vector<int>& dest) {
  SpecTensor r;
  for (const auto& [k, c] : t.terms) {
    SlotKey n{};
    for (std::size_t i = 0; i < dest.size(); ++i) n[dest[i]] = k[i];
    r.terms.emplace_hint(r.terms.end(), n, c);
  }
  // dest is not monotone in general, so re-sort through a fresh map.
  SpecTensor s;
  for (auto& [k, c] : r.terms) s.terms.emplace(k, c);
  return s;
}

TensorJet relabel(const TensorJet& j, const std::vector<int>& dest) {
  TensorJet r(j.trunc());
  for (const auto& [e, c] : j.terms()) r.add_term(e, relabel(c, dest));
  return r;
}

Series series_product(const Series& a, const Series& b, int hcut, int cap) {
  Series r(hcut);
  for (const auto& [ka, va] : a.terms())
    for (const auto& [kb, vb] : b.terms()) {
      int h = ka.first + kb.first;
      if (h > hcut) continue;
      TensorJet p = mul(va, vb, cap);
      r.add(h, ka.second + kb.second, std::move(p));
    }
  return r;
}

// Components of u hbar S(u hbar D_A) applied to a tensor-valued density.
void add_hat(Series& T, const TensorJet& eta, const LocalContext& ctx, int h0, int hcut) {
  int jmax = (hcut - h0) / 2;
  if (jmax < 0) return;
  auto ders = mu_derivatives(mul(eta, ctx.inv_da()), ctx.inv_da(), 2 * jmax);
  for (int j = 0; j <= jmax; ++j) T.add(h0 + 2 * j, 1 + 2 * j, ders[2 * j].scaled(s_coefficient(j)));
}

// 1/X(s) where X(s) = x'(z+s), as Taylor coefficients in s.
template <class S>
int series_valuation(const S& s) {
  int v = kExactOrder;
  for (const auto& [k, c] : s.terms()) v = std::min(v, c.valuation());
  return v;
}

std::vector<ScalarJet> inverse_shift(const ScalarJet& xd, int count) {
  std::vector<ScalarJet> X;
  ScalarJet d = xd;
  Rational f = 1;
  for (int m = 0; m <= count; ++m) {
    if (m > 0) {
      d = d.derivative();
      f /= m;
    }
    X.push_back(d.scaled(f));
  }
  std::vector<ScalarJet> c(count + 1);
  c[0] = inverse(xd);
  for (int m = 1; m <= count; ++m) {
    ScalarJet s;
    for (int i = 1; i <= m; ++i) s += mul(X[i], c[m - i]);
    c[m] = -mul(c[0], s);
  }
  return c;
}

// (1/X(s)) d/ds on the s variable (first == true) or the t variable.
Bivariate d_along(const Bivariate& G, const std::vector<ScalarJet>& c, bool first, int degree) {
  Bivariate dG;
  for (const auto& [k, v] : G) {
    int e = first ? k.first : k.second;
    if (e == 0) continue;
    auto key = first ? std::make_pair(e - 1, k.second) : std::make_pair(k.first, e - 1);
    dG[key] = v.scaled(Rational(e));
  }
  Bivariate r;
  for (const auto& [k, v] : dG)
    for (std::size_t m = 0; m < c.size(); ++m) {
      int i = k.first + (first ? static_cast<int>(m) : 0), j = k.second + (first ? 0 : static_cast<int>(m));
      if (i + j > degree) continue;
      auto it = r.find({i, j});
      ScalarJet p = mul(v, c[m]);
      if (it == r.end()) r.emplace(std::make_pair(i, j), std::move(p));
      else it->second += p;
    }
  return r;
}

class Builder {
 public:
  Builder(LocalContext& ctx, const CellSource& cells, const WRequest& req)
      : ctx_(ctx), cells_(cells), req_(req) {
    for (int l = 0; l < 32; ++l)
      if (req.bmask >> l & 1u) blabels_.push_back(l);
    nl_ = req.a + static_cast<int>(blabels_.size());
    chi_ = 2 * req.g - 1 + nl_;
    hcut_ = chi_ + 1;
    if (static_cast<int>(req.pos_a.size()) != req.a) fail(ErrorKind::InvalidArgument, "pos_a size mismatch");
  }

  std::vector<TensorJet> run() {
    ScalarSeries T0 = t_zero(hcut_ - nl_);
    ScalarSeries E = ScalarSeries::exp(
        T0, ScalarJet::monomial(0, Rational(1)), [](const ScalarJet& a, const ScalarJet& b) { return mul(a, b); },
        [](const ScalarJet& a, const Rational& s) { return a.scaled(s); });
    unsigned full = (1u << nl_) - 1;
    int vda = ctx_.da().valuation();
    auto cap_for = [&](int d) {
      if (req_.output_trunc >= kExactOrder) return kExactOrder;
      return req_.output_trunc + (d - 1) * (1 + ctx_.db().valuation()) - vda;
    };
    if (req_.output_trunc < kExactOrder) {
      // Cofactor valuation bounds let each partial product stop where it can no longer
      // reach the output.
      int cmax = cap_for(1);
      for (int d = 2; d <= 2 * chi_ + 3; ++d) cmax = std::max(cmax, cap_for(d));
      std::map<unsigned, int> vb;
      for (unsigned b = 1; b <= full; ++b) vb[b] = series_valuation(block_cached(b));
      vP_[0] = 0;
      for (unsigned m = 1; m <= full; ++m) {
        unsigned low = m & (~m + 1u), rest = m ^ low;
        int best = kExactOrder;
        for (unsigned sub = rest;; sub = (sub - 1) & rest) {
          unsigned b = sub | low;
          if (!block_cached(b).empty() && vP_[m ^ b] < kExactOrder) best = std::min(best, sat_add(vb[b], vP_[m ^ b]));
          if (sub == 0) break;
        }
        vP_[m] = best;
      }
      int vE = series_valuation(E);
      for (unsigned m = 0; m <= full; ++m)
        cap_[m] = vP_[full ^ m] >= kExactOrder ? kExactOrder : cmax - vE - vP_[full ^ m];
    }
    const Series& P = partitions(full);
    std::map<int, TensorJet> byd;
    for (const auto& [ke, ve] : E.terms())
      for (const auto& [kp, vp] : P.terms()) {
        if (ke.first + kp.first != hcut_) continue;
        TensorJet prod = mul(ve, vp, cap_for(ke.second + kp.second));
        auto it = byd.find(ke.second + kp.second);
        if (it == byd.end()) byd.emplace(ke.second + kp.second, std::move(prod));
        else it->second += prod;
      }
    std::vector<TensorJet> W;
    for (auto& [d, v] : byd) {
      if (d < 1) fail(ErrorKind::Internal, "W term without a u factor");
      if (d - 1 > 2 * chi_ + 2) fail(ErrorKind::Internal, "u-degree of W exceeds 2 chi + 2");
      while (static_cast<int>(W.size()) < d) W.emplace_back(TensorJet(kExactOrder));
      W[d - 1] = mul(v, ctx_.da());
    }
    return W;
  }

 private:
  const SpecTensor* require(int g, int a, unsigned bmask) const {
    const SpecTensor* c = cells_.cell(g, a, bmask);
    int chi = 2 * g - 2 + a + std::popcount(bmask);
    if (!c && (chi < chi_ || (chi == chi_ && req_.require_same_chi)))
      fail(ErrorKind::MissingDependency, "cell (g=" + std::to_string(g) + ", a=" + std::to_string(a) +
                                             ", b=" + std::to_string(std::popcount(bmask)) + ") not available");
    return c;
  }

  ScalarSeries t_zero(int hcut) {
    ScalarSeries T(hcut);
    if (hcut < 1) return T;
    const ScalarJet& inv_da = ctx_.inv_da();
    // y-term: s_{2j} D_A^{2j-1} (dB / dA), j >= 1.
    if (hcut >= 2) {
      int jmax = hcut / 2;
      auto ders = mu_derivatives(mul(ctx_.db(), inv_da), inv_da, 2 * jmax - 1);
      for (int j = 1; j <= jmax; ++j) T.add(2 * j, 2 * j + 1, ders[2 * j - 1].scaled(s_coefficient(j)));
    }
    // Regularized diagonal of B.
    if (hcut >= 2) {
      int D = hcut - 2;
      Bivariate G = regularized_kernel_over_dx(ctx_.da(), D);
      std::vector<ScalarJet> c = inverse_shift(ctx_.da(), D);
      std::vector<Bivariate> ds{G};
      for (int i = 1; i <= D; ++i) ds.push_back(d_along(ds.back(), c, true, D - i));
      for (int a = 0; 2 * a <= D; ++a) {
        Bivariate H = ds[2 * a];
        for (int b = 0; 2 * a + 2 * b <= D; ++b) {
          if (b > 0) {
            H = d_along(H, c, false, D - 2 * a - 2 * b + 1);
            H = d_along(H, c, false, D - 2 * a - 2 * b);
          }
          auto it = H.find({0, 0});
          if (it == H.end()) continue;
          int h = 2 + 2 * a + 2 * b;
          T.add(h, h, it->second.scaled(Rational(1, 2) * s_coefficient(a) * s_coefficient(b)));
        }
      }
    }
    // Stable cells with all slots local.
    for (int k = 1; k <= hcut; ++k)
      for (int g = 0;; ++g) {
        int chi = 2 * g - 2 + k;
        if (chi + k > hcut) break;
        if (chi < 1) continue;
        const SpecTensor* cell = require(g, k, 0);
        if (!cell) continue;
        int jmax = (hcut - chi - k) / 2;
        std::map<std::vector<Index>, Rational> groups;
        for (const auto& [key, c] : cell->terms) {
          std::vector<Index> L(key.begin(), key.begin() + k);
          std::sort(L.begin(), L.end());
          groups[L] += c;
        }
        for (const auto& [L, c] : groups) {
          if (sgn(c) == 0) continue;
          const auto& P = ctx_.hat_product(L, jmax);
          for (int J = 0; J <= jmax; ++J)
            if (!P[J].empty()) T.add(chi + k + 2 * J, k + 2 * J, P[J].scaled(c * inv_factorial(k)));
        }
      }
    return T;
  }

  // T for m A-spectators at 0..m-1 and the B-labels of jmask at m.. (ascending).
  const Series& canonical(int m, unsigned jmask, int hcut) {
    auto key = std::make_pair(m, jmask);
    auto found = canon_.find(key);
    if (found != canon_.end()) return found->second;
    int n = std::popcount(jmask);
    Series T(hcut);
    // Unstable terms.
    if (m == 1 && n == 0) add_hat(T, kernel_jet(ctx_.point(), ctx_.order(), 0), ctx_, 1, hcut);
    if (m == 0 && n == 1) {
      int label = std::countr_zero(jmask);
      TensorJet K(kExactOrder);
      for (const Point& q : cells_.grid(label)) {
        Polynomial zq = Polynomial::z() - Polynomial(q.value);
        OneForm b{RationalFunction(Polynomial(Rational(-1)), zq * zq)};
        SlotKey sk{};
        sk[0] = eval_index(q);
        SpecTensor t;
        t.add(sk, Rational(1));
        K += outer(local_expand(b, ctx_.point(), ctx_.order()).density, t);
      }
      add_hat(T, K, ctx_, 1, hcut);
    }
    for (int k = 1; k <= hcut; ++k)
      for (int g = 0;; ++g) {
        int chi = 2 * g - 2 + k + m + n;
        if (chi + k > hcut) break;
        if (chi < 1) continue;
        const SpecTensor* cell = require(g, k + m, jmask);
        if (!cell) continue;
        int jmax = (hcut - chi - k) / 2;
        std::map<std::vector<Index>, SpecTensor> groups;
        for (const auto& [sk, c] : cell->terms) {
          std::vector<Index> L(sk.begin(), sk.begin() + k);
          std::sort(L.begin(), L.end());
          SlotKey rest{};
          for (int i = 0; i < m + n; ++i) rest[i] = sk[k + i];
          groups[L].add(rest, c);
        }
        for (const auto& [L, rest] : groups) {
          if (rest.empty()) continue;
          const auto& P = ctx_.hat_product(L, jmax);
          SpecTensor r = rest;
          coeff_scale(r, inv_factorial(k));
          for (int J = 0; J <= jmax; ++J)
            if (!P[J].empty()) T.add(chi + k + 2 * J, k + 2 * J, outer(P[J], r));
        }
      }
    return canon_.emplace(key, std::move(T)).first->second;
  }

  // T-block for a set of labels (bits 0..a-1 are A-labels, a.. index blabels_).
  Series block(unsigned mask) {
    int hcut = hcut_ - (nl_ - std::popcount(mask));
    std::vector<int> dest;
    unsigned jmask = 0;
    int m = 0;
    for (int i = 0; i < req_.a; ++i)
      if (mask >> i & 1u) {
        dest.push_back(req_.pos_a[i]);
        ++m;
      }
    for (std::size_t t = 0; t < blabels_.size(); ++t)
      if (mask >> (req_.a + t) & 1u) {
        dest.push_back(req_.pos_b.at(blabels_[t]));
        jmask |= 1u << blabels_[t];
      }
    const Series& C = canonical(m, jmask, hcut);
    Series out(hcut);
    for (const auto& [k, v] : C.terms())
      if (k.first <= hcut) out.add(k.first, k.second, relabel(v, dest));
    return out;
  }

  const Series& block_cached(unsigned mask) {
    auto found = block_.find(mask);
    if (found != block_.end()) return found->second;
    return block_.emplace(mask, block(mask)).first->second;
  }

  int cap_of(unsigned mask) const {
    auto it = cap_.find(mask);
    return it == cap_.end() ? kExactOrder : it->second;
  }

  const Series& partitions(unsigned mask) {
    auto found = part_.find(mask);
    if (found != part_.end()) return found->second;
    int hcut = hcut_ - (nl_ - std::popcount(mask));
    Series P(hcut);
    if (mask == 0) {
      P.add(0, 0, TensorJet::monomial(0, SpecTensor::unit()));
    } else {
      unsigned low = mask & (~mask + 1u);
      unsigned rest = mask ^ low;
      // Blocks containing the lowest label.
      for (unsigned sub = rest;; sub = (sub - 1) & rest) {
        unsigned b = sub | low;
        const Series& T = block_cached(b);
        if (!T.empty()) {
          const Series& R = partitions(mask ^ b);
          if (!R.empty()) P += series_product(T, R, hcut, cap_of(mask));
        }
        if (sub == 0) break;
      }
    }
    return part_.emplace(mask, std::move(P)).first->second;
  }

  LocalContext& ctx_;
  const CellSource& cells_;
  const WRequest& req_;
  std::vector<int> blabels_;
  int nl_ = 0, chi_ = 0, hcut_ = 0;
  std::map<std::pair<int, unsigned>, Series> canon_;
  std::map<unsigned, Series> part_, block_;
  std::map<unsigned, int> vP_, cap_;
};

}  // namespace

const std::vector<Point>& CellSource::grid(int) const { return kNoGrid; }

LocalContext::LocalContext(const OneForm& dA, const OneForm& dB, const Point& p, int order)
    : p_(p), order_(order) {
  da_ = working_density(dA, p, order);
  db_ = working_density(dB, p, order);
  if (da_.empty() || db_.empty()) fail(ErrorKind::DivisionByZero, "vanishing form in a local context");
  inv_da_ = inverse(da_);
  inv_db_ = inverse(db_);
}

const std::vector<ScalarJet>& LocalContext::hat(Index idx, int jmax) {
  auto& v = hat_[idx];
  if (static_cast<int>(v.size()) > jmax) return v;
  ScalarJet b = pole_basis_jet(point_of(index_point(idx)), index_order(idx), p_, order_);
  auto ders = mu_derivatives(mul(b, inv_da_), inv_da_, 2 * jmax);
  v.clear();
  for (int j = 0; j <= jmax; ++j) v.push_back(ders[2 * j].scaled(s_coefficient(j)));
  return v;
}

const std::vector<ScalarJet>& LocalContext::hat_product(const std::vector<Index>& locals, int jmax) {
  auto it = prod_.find(locals);
  if (it != prod_.end() && static_cast<int>(it->second.size()) > jmax) return it->second;
  std::vector<ScalarJet> acc{ScalarJet::monomial(0, Rational(1))};
  acc.resize(jmax + 1, ScalarJet(kExactOrder));
  for (Index idx : locals) {
    const auto& H = hat(idx, jmax);
    std::vector<ScalarJet> next(jmax + 1, ScalarJet(kExactOrder));
    for (int J = 0; J <= jmax; ++J)
      for (int j = 0; j <= J; ++j)
        if (!acc[J - j].empty() && !H[j].empty()) next[J] += mul(acc[J - j], H[j]);
    acc = std::move(next);
  }
  return prod_[locals] = std::move(acc);
}

std::vector<TensorJet> build_W(LocalContext& ctx, const CellSource& cells, const WRequest& req) {
  return Builder(ctx, cells, req).run();
}

TensorJet output_operator(const std::vector<TensorJet>& W, const ScalarJet& inv_db, int rmin) {
  int rmax = static_cast<int>(W.size()) - 1;
  if (rmax < rmin) return TensorJet(kExactOrder);
  auto minus_d = [&](const TensorJet& eta) { return -mul(eta, inv_db).derivative(); };
  TensorJet acc = W[rmax];
  for (int r = rmax - 1; r >= rmin; --r) acc = W[r] + minus_d(acc);
  for (int r = 0; r < rmin; ++r) acc = minus_d(acc);
  return acc;
}

SpecTensor principal_part(const TensorJet& density, const Point& q, int pos) {
  if (density.trunc() < 0) fail(ErrorKind::PrecisionError, "principal part hidden by truncation");
  SpecTensor out;
  for (const auto& [e, c] : density.terms()) {
    if (e >= 0) break;
    if (e == -1) fail(ErrorKind::ResidueNonZero, "residue term at " + q.str());
    int k = -e - 1;
    Index idx = make_index(q, k);
    Rational f = Rational(-1, k);
    for (const auto& [key, v] : c.terms) {
      if (key[pos] != 0) fail(ErrorKind::Internal, "output slot already occupied");
      SlotKey nk = key;
      nk[pos] = idx;
      out.add(nk, v * f);
    }
  }
  return out;
}

}  // namespace gtr
