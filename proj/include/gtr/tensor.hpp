// Sparse tensors over the pole basis, keyed by fixed-width slot arrays.
#pragma once

#include <array>
#include <cstdint>
#include <map>

#include "gtr/jet.hpp"
#include "gtr/point.hpp"

namespace gtr {

inline constexpr int kMaxSlots = 12;

/// Packed pole-basis index: point id in the high byte, k in the low byte. 0 = empty slot.
using Index = std::uint16_t;

inline Index make_index(std::uint8_t point, int k) {
  if (k < 1 || k > 255) fail(ErrorKind::Internal, "pole order out of range");
  return static_cast<Index>((point << 8) | k);
}
inline Index make_index(const Point& p, int k) { return make_index(point_id(p), k); }
inline std::uint8_t index_point(Index i) { return static_cast<std::uint8_t>(i >> 8); }
inline int index_order(Index i) { return i & 0xff; }

using SlotKey = std::array<Index, kMaxSlots>;

/// Map from slot keys to coefficients; slots not used by a tensor hold 0.
struct SpecTensor {
  std::map<SlotKey, Rational> terms;

  bool empty() const { return terms.empty(); }
  void add(const SlotKey& k, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms.emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms.erase(it);
    }
  }
  friend bool operator==(const SpecTensor& a, const SpecTensor& b) { return a.terms == b.terms; }

  static SpecTensor unit() {
    SpecTensor t;
    t.terms.emplace(SlotKey{}, Rational(1));
    return t;
  }
};

inline bool coeff_is_zero(const SpecTensor& t) { return t.terms.empty(); }
inline void coeff_add(SpecTensor& acc, const SpecTensor& t) {
  for (const auto& [k, c] : t.terms) acc.add(k, c);
}
inline void coeff_scale(SpecTensor& t, const Rational& s) {
  if (sgn(s) == 0) {
    t.terms.clear();
    return;
  }
  for (auto& [k, c] : t.terms) c *= s;
}

/// Merge of two keys with disjoint occupied slots.
inline SlotKey merge_keys(const SlotKey& a, const SlotKey& b) {
  SlotKey r;
  for (int i = 0; i < kMaxSlots; ++i) r[i] = static_cast<Index>(a[i] | b[i]);
  return r;
}

inline void coeff_fma(SpecTensor& acc, const SpecTensor& a, const Rational& s) {
  if (sgn(s) == 0) return;
  for (const auto& [k, c] : a.terms) acc.add(k, c * s);
}
inline void coeff_fma(SpecTensor& acc, const Rational& s, const SpecTensor& a) { coeff_fma(acc, a, s); }
inline void coeff_fma(SpecTensor& acc, const SpecTensor& a, const SpecTensor& b) {
  Rational tmp;
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) {
      mpq_mul(tmp.get_mpq_t(), ca.get_mpq_t(), cb.get_mpq_t());
      acc.add(merge_keys(ka, kb), tmp);
    }
}

template <>
struct ProductOf<SpecTensor, Rational> {
  using type = SpecTensor;
};
template <>
struct ProductOf<Rational, SpecTensor> {
  using type = SpecTensor;
};
template <>
struct ProductOf<SpecTensor, SpecTensor> {
  using type = SpecTensor;
};

using TensorJet = LaurentJet<SpecTensor>;

/// Jet with the tensor coefficient c attached to every term of a scalar jet.
inline TensorJet outer(const ScalarJet& s, const SpecTensor& c) {
  TensorJet r(s.trunc());
  if (c.empty()) return r;
  for (const auto& [e, v] : s.terms()) {
    SpecTensor t = c;
    coeff_scale(t, v);
    r.add_term(e, std::move(t));
  }
  return r;
}

}  // namespace gtr
