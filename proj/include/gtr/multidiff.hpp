// Symmetric n-differentials over the pole basis b_{q,k} = d((z-q)^{-k}) (d(z^k) at infinity).
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gtr/tensor.hpp"

namespace gtr {

struct PoleIndex {
  Point q;
  int k = 1;
  friend bool operator<(const PoleIndex& a, const PoleIndex& b) {
    if (a.q != b.q) return a.q < b.q;
    return a.k < b.k;
  }
  friend bool operator==(const PoleIndex& a, const PoleIndex& b) { return a.q == b.q && a.k == b.k; }
};

inline Index to_index(const PoleIndex& p) { return make_index(p.q, p.k); }
inline PoleIndex to_pole(Index i) { return PoleIndex{point_of(index_point(i)), index_order(i)}; }

/// Stores every slot ordering explicitly, so permuting a key never changes the answer
/// for a symmetric differential and asymmetry stays observable.
class MultiDifferential {
 public:
  MultiDifferential() = default;
  MultiDifferential(int g, int n) : g_(g), n_(n) {
    if (n < 0 || n > kMaxSlots) fail(ErrorKind::InvalidArgument, "arity out of range");
  }

  int genus() const { return g_; }
  int arity() const { return n_; }
  const SpecTensor& tensor() const { return t_; }
  SpecTensor& tensor() { return t_; }
  bool is_zero() const { return t_.empty(); }

  void add(const std::vector<PoleIndex>& idx, const Rational& c);
  /// Adds c at every distinct permutation of idx.
  void add_symmetric(const std::vector<PoleIndex>& idx, const Rational& c);
  Rational coefficient(const std::vector<PoleIndex>& idx) const;

  /// Sorted index tuples with their coefficients (one entry per multiset).
  std::vector<std::pair<std::vector<PoleIndex>, Rational>> sorted_terms() const;
  /// Points carrying poles.
  std::vector<Point> support() const;

  friend bool operator==(const MultiDifferential& a, const MultiDifferential& b) {
    return a.g_ == b.g_ && a.n_ == b.n_ && a.t_ == b.t_;
  }

 private:
  int g_ = 0, n_ = 0;
  SpecTensor t_;
};

SlotKey make_key(const std::vector<PoleIndex>& idx);
std::vector<PoleIndex> key_indices(const SlotKey& k, int n);

/// max |T(k) - T(tau k)| over keys and slot transpositions tau.
Rational symmetry_defect(const MultiDifferential& w);

nlohmann::ordered_json to_json(const MultiDifferential& w);
MultiDifferential multidiff_from_json(const nlohmann::json& j);

/// Expansion of one slot at q: a jet in the local coordinate whose coefficients are
/// tensors in the remaining slots. dest[i] gives the output position of input slot i
/// (dest[slot] is ignored); by default the remaining slots are packed in order.
TensorJet expand_slot(const SpecTensor& t, int arity, int slot, const Point& q, int order,
                      const std::vector<int>& dest = {});
TensorJet expand_slot(const MultiDifferential& w, int slot, const Point& q, int order);

/// B(z~, z) expanded in z~ at q with z in output position `pos`:
/// -sum_{m<order} zeta^m dzeta (x) b_{q,m+1}(z).
TensorJet kernel_jet(const Point& q, int order, int pos = 0);

/// Pull-back of an expanded slot along zeta -> sigma(zeta): f(sigma) sigma'.
TensorJet pull_back(const TensorJet& density, const ScalarJet& sigma, int cap = kExactOrder);
TensorJet substitute_jet(const MultiDifferential& w, int slot, const Point& q, const ScalarJet& sigma, int order);

/// Bivariate series in (s, t) with jet coefficients, keyed by (i, j) for s^i t^j.
using Bivariate = std::map<std::pair<int, int>, ScalarJet>;

/// Taylor coefficients in (s, t), up to total degree `degree`, of
/// [B(z+s, z+t) - dx dx / (x(z+s) - x(z+t))^2] / (dx(z+s) dx(z+t)),
/// with z the local coordinate at the anchor of the dx density jet `xd`.
Bivariate regularized_kernel_over_dx(const ScalarJet& xd, int degree);
/// The same for the dz-density of B - dx dx / (x - x)^2 (no division by dx).
Bivariate regularized_diagonal(const ScalarJet& xd, int degree);

}  // namespace gtr
