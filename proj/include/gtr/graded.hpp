// Series graded by (hbar exponent h, u exponent d) with a hard hbar cutoff.
#pragma once

#include <map>
#include <utility>

#include "gtr/errors.hpp"
#include "gtr/rational.hpp"

namespace gtr {

template <class V>
class GradedSeries {
 public:
  using Key = std::pair<int, int>;  // (h, d)
  using Terms = std::map<Key, V>;

  explicit GradedSeries(int hcut = 0) : hcut_(hcut) {}

  int hbar_cutoff() const { return hcut_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  const V* find(int h, int d) const {
    auto it = terms_.find({h, d});
    return it == terms_.end() ? nullptr : &it->second;
  }

  /// Adds v to the (h, d) component; components above the cutoff are discarded.
  template <class W>
  void add(int h, int d, W&& v) {
    if (h > hcut_) return;
    auto it = terms_.find({h, d});
    if (it == terms_.end()) terms_.emplace(Key{h, d}, std::forward<W>(v));
    else it->second += v;
  }

  /// Smallest hbar exponent present (hcut + 1 when empty).
  int hbar_valuation() const {
    int v = hcut_ + 1;
    for (const auto& [k, c] : terms_) v = std::min(v, k.first);
    return v;
  }

  int max_u_degree(int h) const {
    int m = -1;
    for (const auto& [k, c] : terms_)
      if (k.first == h) m = std::max(m, k.second);
    return m;
  }

  GradedSeries& operator+=(const GradedSeries& o) {
    hcut_ = std::min(hcut_, o.hcut_);
    for (auto it = terms_.begin(); it != terms_.end();)
      it = it->first.first > hcut_ ? terms_.erase(it) : std::next(it);
    for (const auto& [k, v] : o.terms_) add(k.first, k.second, v);
    return *this;
  }

  /// Applies f to every component (f: const V& -> V).
  template <class F>
  GradedSeries map(F f) const {
    GradedSeries r(hcut_);
    for (const auto& [k, v] : terms_) r.terms_.emplace(k, f(v));
    return r;
  }

  /// Product; the result cutoff is the minimum of both cutoffs.
  template <class F>
  static GradedSeries product(const GradedSeries& a, const GradedSeries& b, F mul) {
    GradedSeries r(std::min(a.hcut_, b.hcut_));
    for (const auto& [ka, va] : a.terms_)
      for (const auto& [kb, vb] : b.terms_) {
        int h = ka.first + kb.first;
        if (h > r.hcut_) continue;
        r.add(h, ka.second + kb.second, mul(va, vb));
      }
    return r;
  }

  /// exp(a) = sum a^j / j!; requires positive hbar valuation. `one` is the unit element.
  template <class F, class S>
  static GradedSeries exp(const GradedSeries& a, const V& one, F mul, S scale) {
    if (a.hbar_valuation() <= 0) fail(ErrorKind::ValuationError, "exp of a graded series without positive hbar valuation");
    GradedSeries r(a.hcut_);
    r.add(0, 0, one);
    GradedSeries p(a.hcut_);
    p.add(0, 0, one);
    for (long j = 1; !p.empty(); ++j) {
      p = product(p, a, mul);
      p = p.map([&](const V& v) { return scale(v, Rational(1, j)); });
      r += p;
    }
    return r;
  }

 private:
  Terms terms_;
  int hcut_;
};

}  // namespace gtr
