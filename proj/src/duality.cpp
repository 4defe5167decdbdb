#include "gtr/duality.hpp"

#include <bit>
#include <cstdint>
#include <set>
#include <tuple>

#include "gtr/linalg.hpp"

namespace gtr {

namespace {

using Mask = std::uint64_t;
constexpr int kMaxGrid = 64;

int working_start(int chi) { return 3 * chi + 4; }

std::vector<int> bits(Mask m) {
  std::vector<int> out;
  for (int i = 0; i < kMaxGrid; ++i)
    if (m >> i & 1u) out.push_back(i);
  return out;
}

// All subsets of {0..K-1} with `size` elements, in lexicographic order.
std::vector<Mask> subsets(int K, int size) {
  std::vector<Mask> out;
  std::vector<int> idx(size);
  for (int i = 0; i < size; ++i) idx[i] = i;
  if (size > K) return out;
  while (true) {
    Mask m = 0;
    for (int i : idx) m |= Mask(1) << i;
    out.push_back(m);
    int i = size - 1;
    while (i >= 0 && idx[i] == K - size + i) --i;
    if (i < 0) return out;
    ++idx[i];
    for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

class Ladder;

// Spectator label l stands for the grid point with index idx[l] (ascending).
class View : public CellSource {
 public:
  View(Ladder& l, std::vector<int> idx);
  const SpecTensor* cell(int g, int a, unsigned bmask) const override;
  const std::vector<Point>& grid(int label) const override { return single_.at(label); }

 private:
  Ladder& l_;
  std::vector<int> idx_;
  std::vector<std::vector<Point>> single_;
};

class Ladder {
 public:
  Ladder(const SpectralCurve& c, const Cells& base, int chi_max, int min_grid)
      : c_(c), base_(base), chi_max_(chi_max), min_grid_(min_grid), crit_(critical_points(c)) {
    avoid_ = crit_;
    for (const auto& sp : special_points(c)) {
      avoid_.push_back(sp.point);
      if (sp.special && !std::binary_search(c.keys.begin(), c.keys.end(), sp.point)) targets_.insert(sp.point);
    }
  }

  const Point& point(int i) const { return grid_.at(i); }

  const SpecTensor* base(int g, int n) const {
    auto it = base_.find({g, n});
    return it == base_.end() ? nullptr : &it->second.tensor();
  }

  // omega_{a,b} with the y-side slots at the grid points of T (ascending, after the
  // a x-side slots). Computed on first use at the largest point of T.
  const SpecTensor& value(int g, int a, Mask T) {
    auto key = std::make_tuple(g, a, T);
    auto found = vals_.find(key);
    if (found != vals_.end()) return found->second;
    int b = std::popcount(T);
    int top = 63 - std::countl_zero(T);
    View v(*this, bits(T & ~(Mask(1) << top)));
    WRequest req;
    req.g = g;
    req.a = a;
    req.bmask = (1u << (b - 1)) - 1;
    req.require_same_chi = true;
    for (int i = 0; i < a; ++i) req.pos_a.push_back(i);
    for (int l = 0; l < b - 1; ++l) req.pos_b[l] = a + l;
    const Point& p = grid_[top];
    SpecTensor out = with_escalation(working_start(2 * g - 2 + a + b), [&](int order) {
      LocalContext ctx(c_.dx, c_.dy, p, order);
      TensorJet w = -output_operator(build_W(ctx, v, req), ctx.inv_db(), 0);
      if (w.trunc() < 1) fail(ErrorKind::PrecisionError, "value hidden by truncation");
      SpecTensor s;
      for (const auto& [k, c] : w.coeff(0).terms) {
        SlotKey nk = k;
        nk[a + b - 1] = eval_index(p);
        s.terms.emplace(nk, c);
      }
      return s;
    });
    return vals_.emplace(key, std::move(out)).first->second;
  }

  LadderResult run() {
    LadderResult res;
    for (int chi = 1; chi <= chi_max_; ++chi)
      for (int g = 0; 2 * g - 2 <= chi; ++g) {
        int n = chi + 2 - 2 * g;
        if (n < 1) continue;
        if (!base(g, n) && (g > 0 || n >= 3))
          fail(ErrorKind::MissingDependency,
               "input differential (g=" + std::to_string(g) + ", n=" + std::to_string(n) + ") missing");
        res.omega[{g, n}] = final_cell(g, n, res);
      }
    res.grid_size = static_cast<int>(grid_.size());
    return res;
  }

 private:
  void grow(int K) {
    if (K > kMaxGrid) fail(ErrorKind::OrderDivergence, "evaluation grid would exceed 64 points");
    if (K > static_cast<int>(grid_.size())) grid_ = grid_points(K, avoid_);
  }

  // Principal parts in slot 0 of omega_{0,n} with the other slots at the points of S.
  SpecTensor final_at(int g, int n, Mask S, bool probe, LadderResult& res) {
    std::vector<int> idx = bits(S);
    View v(*this, idx);
    WRequest req;
    req.g = g;
    req.bmask = (1u << (n - 1)) - 1;
    req.require_same_chi = true;
    for (int l = 0; l < n - 1; ++l) req.pos_b[l] = 1 + l;
    std::vector<Point> cand = crit_;
    // Diagonal poles must cancel; probing one spectator tuple is enough to catch a slip.
    if (probe)
      for (int i : idx) cand.push_back(grid_[i]);
    SpecTensor sum;
    for (const Point& q : cand) {
      PointClassification pc = classify(c_, q);
      SpecTensor part = with_escalation(initial_order(g, n, pc.r, pc.s) + 4, [&](int order) {
        LocalContext ctx(c_.dx, c_.dy, q, order);
        TensorJet w = -output_operator(build_W(ctx, v, req), ctx.inv_db(), 0);
        return principal_part(w, q, 0);
      });
      if (part.empty()) continue;
      if (!targets_.count(q)) {
        bool on_grid = !std::binary_search(crit_.begin(), crit_.end(), q);
        StrayPole sp{g, n, q, on_grid};
        bool seen = false;
        for (const StrayPole& o : res.stray) seen = seen || (o.g == g && o.n == n && o.point == q);
        if (!seen) res.stray.push_back(sp);
      }
      coeff_add(sum, part);
    }
    return sum;
  }

  MultiDifferential final_cell(int g, int n, LadderResult& res) {
    MultiDifferential out(g, n);
    if (n == 1) {
      out.tensor() = final_at(g, 1, 0, false, res);
      return out;
    }
    std::map<Mask, SpecTensor> V;
    std::set<Index> basis;
    int K = std::max(min_grid_, n + 1);
    while (true) {
      grow(K);
      for (Mask S : subsets(K, n - 1)) {
        if (V.count(S)) continue;
        SpecTensor t = final_at(g, n, S, V.empty(), res);
        for (const auto& [k, c] : t.terms) basis.insert(k[0]);
        V.emplace(S, std::move(t));
      }
      int need = std::max(static_cast<int>(basis.size()) + n - 1, n + 1);
      if (need <= K) break;
      K = need;
    }
    std::vector<Index> B(basis.begin(), basis.end());
    // All orderings of each spectator set, by symmetry in the y-side slots.
    SpecTensor cur;
    for (const auto& [S, t] : V) {
      std::vector<int> pts = bits(S);
      for (const auto& [k, c] : t.terms) {
        std::vector<int> perm = pts;
        do {
          SlotKey nk{};
          nk[0] = k[0];
          for (int i = 0; i < n - 1; ++i) nk[1 + i] = eval_index(grid_[perm[i]]);
          cur.add(nk, c);
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
    }
    for (int slot = 1; slot < n; ++slot) cur = fit_slot(cur, n, slot, K, B, res);
    if (!symmetric(cur, n))
      fail(ErrorKind::Internal, "fitted dual differential is not symmetric");
    out.tensor() = std::move(cur);
    return out;
  }

  static bool symmetric(const SpecTensor& t, int n) {
    MultiDifferential w(0, n);
    w.tensor() = t;
    return sgn(symmetry_defect(w)) == 0;
  }

  // Replaces the evaluations in `slot` by coefficients over B. Each group of entries
  // that agree off `slot` is fitted on the first |B| grid points it may use (points
  // already taken by later slots are excluded); the remaining points are checks.
  SpecTensor fit_slot(const SpecTensor& t, int n, int slot, int K, const std::vector<Index>& B, LadderResult& res) {
    std::map<Index, int> grid_index;
    for (int i = 0; i < K; ++i) grid_index[eval_index(grid_[i])] = i;
    std::map<SlotKey, std::map<int, Rational>> groups;
    for (const auto& [k, c] : t.terms) {
      SlotKey r = k;
      r[slot] = 0;
      groups[r][grid_index.at(k[slot])] = c;
    }
    // Rests whose values all vanish never appear and get zero coefficients.
    std::size_t m = B.size();
    SpecTensor out;
    if (m == 0) {
      for (const auto& [r, vals] : groups)
        if (!vals.empty()) fail(ErrorKind::Internal, "nonzero value with an empty pole basis");
      return out;
    }
    for (const auto& [r, vals] : groups) {
      std::vector<int> avail;
      for (int i = 0; i < K; ++i) {
        bool taken = false;
        for (int s = slot + 1; s < n; ++s) taken = taken || grid_index.at(r[s]) == i;
        if (!taken) avail.push_back(i);
      }
      std::vector<int> used(avail.begin(), avail.begin() + m);
      const Matrix& Minv = inverse_for(used, B);
      std::vector<Rational> coef(m);
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < m; ++i) {
          auto it = vals.find(used[i]);
          if (it != vals.end()) coef[j] += Minv[j][i] * it->second;
        }
      for (std::size_t e = m; e < avail.size(); ++e) {
        Rational pred = 0;
        for (std::size_t j = 0; j < m; ++j) pred += coef[j] * basis_density(to_pole(B[j]), grid_[avail[e]].value);
        auto it = vals.find(avail[e]);
        Rational got = it == vals.end() ? Rational(0) : it->second;
        if (pred != got) fail(ErrorKind::Internal, "grid fit does not reproduce the computed values");
        ++res.checked_tuples;
      }
      for (std::size_t j = 0; j < m; ++j) {
        SlotKey nk = r;
        nk[slot] = B[j];
        out.add(nk, coef[j]);
      }
    }
    return out;
  }

  const Matrix& inverse_for(const std::vector<int>& used, const std::vector<Index>& B) {
    auto it = inv_.find(used);
    if (it != inv_.end()) return it->second;
    std::size_t m = B.size();
    Matrix M(m, std::vector<Rational>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) M[i][j] = basis_density(to_pole(B[j]), grid_[used[i]].value);
    return inv_.emplace(used, inverse_matrix(M)).first->second;
  }

  const SpectralCurve& c_;
  const Cells& base_;
  int chi_max_;
  int min_grid_;
  std::vector<Point> crit_, avoid_, grid_;
  std::set<Point> targets_;
  std::map<std::tuple<int, int, Mask>, SpecTensor> vals_;
  std::map<std::vector<int>, Matrix> inv_;
};

View::View(Ladder& l, std::vector<int> idx) : l_(l), idx_(std::move(idx)) {
  for (int i : idx_) single_.push_back({l_.point(i)});
}

const SpecTensor* View::cell(int g, int a, unsigned bmask) const {
  if (bmask == 0) return l_.base(g, a);
  Mask T = 0;
  for (std::size_t l = 0; l < idx_.size(); ++l)
    if (bmask >> l & 1u) T |= Mask(1) << idx_[l];
  return &l_.value(g, a, T);
}

}  // namespace

Rational basis_density(const PoleIndex& b, const Rational& z) {
  if (b.q.infinite) return b.k * pow(z, b.k - 1);
  Rational d = z - b.q.value;
  if (sgn(d) == 0) fail(ErrorKind::DivisionByZero, "basis evaluated at its pole");
  return -b.k * pow(d, -b.k - 1);
}

std::vector<Point> grid_points(int count, const std::vector<Point>& avoid) {
  std::vector<Point> out;
  std::set<Point> bad(avoid.begin(), avoid.end());
  std::vector<Rational> centers{Rational(0)};
  for (const Point& p : avoid)
    if (!p.infinite) centers.push_back(p.value);
  // Non-integral fractions of small height. Two grid points symmetric about a finite
  // critical point (or about 0) would make even-order pole columns coincide.
  auto symmetric = [&](const Rational& r) {
    for (const Point& p : out)
      for (const Rational& c : centers)
        if (p.value + r == 2 * c) return true;
    return false;
  };
  for (long den = 2; static_cast<int>(out.size()) < count; ++den)
    for (long num = -3 * den; num < 3 * den && static_cast<int>(out.size()) < count; ++num) {
      Rational r(num, den);
      r.canonicalize();
      if (r.get_den() != den) continue;
      Point p = Point::finite(r);
      if (!bad.count(p) && !symmetric(r)) out.push_back(p);
    }
  return out;
}

LadderResult xy_ladder(const SpectralCurve& c, const Cells& omega, int chi_max, const LadderOptions& opt) {
  Ladder l(c, omega, chi_max, opt.grid_size);
  return l.run();
}

Cells xy_dual(const SpectralCurve& c, const Cells& omega, int chi_max, const LadderOptions& opt) {
  LadderResult r = xy_ladder(c, omega, chi_max, opt);
  for (const StrayPole& s : r.stray) {
    bool key = std::binary_search(c.keys.begin(), c.keys.end(), s.point);
    std::string where = "(g=" + std::to_string(s.g) + ", n=" + std::to_string(s.n) + ") at " + s.point.str();
    if (key) fail(ErrorKind::NonHolomorphicDual, "dual differential has a pole at the key point " + where);
    fail(ErrorKind::Internal, "dual differential has a pole outside the special points " + where);
  }
  return r.omega;
}

Cells xy_inverse(const SpectralCurve& c, const Cells& omega_vee, int chi_max, const LadderOptions& opt) {
  return xy_dual(dual_curve(c), omega_vee, chi_max, opt);
}

}  // namespace gtr
