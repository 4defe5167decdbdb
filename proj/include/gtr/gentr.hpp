// The generalized recursion: omega^{(g)}_n from lower cells by projecting
// sum_{r>=1} (-d(1/dy))^r [u^r] W onto the principal parts at the keys.
#pragma once

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "gtr/curve.hpp"
#include "gtr/engine.hpp"

namespace gtr {

struct EngineOptions {
  int jobs = 1;
  /// Recompute every local projection at order + 4 and require agreement.
  bool audit = false;
  /// Starting working order; 0 picks one from the local exponents.
  int initial_order = 0;
};

/// Starting working order for a cell at a point with exponents (r, s).
int initial_order(int g, int n, int r, int s);

/// Runs f(order) from `start`, doubling the order while the result is short of
/// precision (PrecisionError or a negative truncation reported by f).
template <class F>
auto with_escalation(int start, F f) -> decltype(f(start)) {
  int order = start;
  for (int attempt = 0;; ++attempt) {
    try {
      return f(order);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PrecisionError) throw;
      if (attempt >= 4) fail(ErrorKind::OrderDivergence, std::string("working order escalation failed: ") + e.what());
    }
    order *= 2;
  }
}

class GeneralizedTR : public CellSource {
 public:
  explicit GeneralizedTR(SpectralCurve curve, EngineOptions opt = {});

  const SpectralCurve& curve() const { return curve_; }
  const EngineOptions& options() const { return opt_; }

  /// omega^{(g)}_n, computing every cell of lower Euler characteristic first.
  const MultiDifferential& get(int g, int n);
  /// All cells with 1 <= 2g - 2 + n <= chi_max (the unstable ones are not stored).
  std::map<std::pair<int, int>, MultiDifferential> all(int chi_max);

  /// [u^r] W^{(g)}_{n} at q: slot 0 is the local variable, spectators fill 1..n-1.
  std::vector<TensorJet> W_at(const Point& q, int g, int n, int order);
  /// The jet of omega-bar^{(g)}_n at q (before projection).
  TensorJet omega_bar(const Point& q, int g, int n, int order);

  const SpecTensor* cell(int g, int a, unsigned bmask) const override;

 private:
  void ensure_level(int chi);
  MultiDifferential compute(int g, int n);
  SpecTensor project_at(const Point& q, int g, int n, int order);

  SpectralCurve curve_;
  EngineOptions opt_;
  std::vector<PointClassification> keys_;
  int done_level_ = 0;
  mutable std::mutex mu_;
  std::map<std::pair<int, int>, MultiDifferential> memo_;
};

/// Stable cells for the curve through chi_max.
std::map<std::pair<int, int>, MultiDifferential> generalized_tr(const SpectralCurve& c, int chi_max,
                                                                const EngineOptions& opt = {});

}  // namespace gtr
