// Local construction of the W-series at a point: the T-blocks, their set-partition
// products, the exponential prefactor, and the output operator sum (-d(1/dB))^r.
//
// The routine is written for a generic pair of forms (dA, dB): local insertions use
// dA and the output operator uses dB. The recursion uses (dx, dy); the x-y ladder uses
// both orders. Spectators come in two kinds: A-slots, carried symbolically over the pole
// basis, and B-slots, carried as evaluations at fixed grid points (index with k = 0).
#pragma once

#include <map>
#include <vector>

#include "gtr/curve.hpp"
#include "gtr/multidiff.hpp"

namespace gtr {

/// Evaluation key for a B-slot fixed at the point p.
inline Index eval_index(const Point& p) { return static_cast<Index>(point_id(p) << 8); }
inline bool is_eval_index(Index i) { return i != 0 && index_order(i) == 0; }

class CellSource {
 public:
  virtual ~CellSource() = default;
  /// Cell with `a` A-slots followed by one B-slot per label of `bmask` (ascending labels).
  /// Returns nullptr when the cell is not known.
  virtual const SpecTensor* cell(int g, int a, unsigned bmask) const = 0;
  /// Points at which a B-label is evaluated.
  virtual const std::vector<Point>& grid(int label) const;
};

struct WRequest {
  int g = 0;
  int a = 0;              // A-spectators
  unsigned bmask = 0;     // B-spectator labels
  std::vector<int> pos_a; // output slot of each A-spectator
  std::map<int, int> pos_b;  // output slot of each B-label
  /// When false, a missing cell of the output Euler characteristic is skipped (the
  /// u^0 term of the recursion); when true it must be present.
  bool require_same_chi = false;
  /// W_r is needed only below output_trunc + r (1 + val dB), which keeps output_operator
  /// exact below output_trunc. The default keeps the working order.
  int output_trunc = kExactOrder;
};

/// Local data at one point for one working order, with caches shared by all
/// W-constructions made there. Not thread-safe; use one per thread.
class LocalContext {
 public:
  LocalContext(const OneForm& dA, const OneForm& dB, const Point& p, int order);

  const Point& point() const { return p_; }
  int order() const { return order_; }
  const ScalarJet& da() const { return da_; }
  const ScalarJet& inv_da() const { return inv_da_; }
  const ScalarJet& db() const { return db_; }
  const ScalarJet& inv_db() const { return inv_db_; }

  /// s_{2j} D_A^{2j} (b / dA) for j = 0..jmax, b a pole-basis form.
  const std::vector<ScalarJet>& hat(Index idx, int jmax);
  /// Products of hat components over a sorted list of local slots, graded by total j.
  const std::vector<ScalarJet>& hat_product(const std::vector<Index>& locals, int jmax);

 private:
  Point p_;
  int order_;
  ScalarJet da_, inv_da_, db_, inv_db_;
  std::map<Index, std::vector<ScalarJet>> hat_;
  std::map<std::vector<Index>, std::vector<ScalarJet>> prod_;
};

/// [u^r] W as dzeta-densities at the point, r = 0, 1, ...; W carries hbar^{2g-1+a+b}.
std::vector<TensorJet> build_W(LocalContext& ctx, const CellSource& cells, const WRequest& req);

/// sum_{r >= rmin} (-d(1/dB))^r W_r.
TensorJet output_operator(const std::vector<TensorJet>& W, const ScalarJet& inv_db, int rmin);

/// Principal part at the anchor as pole-basis coefficients placed in slot `pos`
/// (f_k = -c_k / k for c_k zeta^{-k-1}). Throws ResidueNonZero on a residue term.
SpecTensor principal_part(const TensorJet& density, const Point& q, int pos);

}  // namespace gtr
