// The classical residue recursion at simple zeros of dx, with the deck
// transformation computed locally. Used as an oracle for the generalized engine.
#pragma once

#include <map>
#include <mutex>
#include <utility>

#include "gtr/gentr.hpp"

namespace gtr {

struct DeckJet {
  Point anchor;
  ScalarJet sigma;  // -zeta + O(zeta^2) in the local coordinate at the anchor
};

/// The nontrivial solution of x(sigma) = x(zeta) at a simple zero of dx.
DeckJet deck(const SpectralCurve& c, const Point& q, int order);

class CEORecursion {
 public:
  explicit CEORecursion(SpectralCurve curve, EngineOptions opt = {});

  const SpectralCurve& curve() const { return curve_; }
  const MultiDifferential& get(int g, int n);
  std::map<std::pair<int, int>, MultiDifferential> all(int chi_max);

  /// The germ omega-bar^{(g)}_{n|q}: slot 0 local, spectators in slots 1..n-1.
  TensorJet germ(const Point& q, int g, int n, int order);

 private:
  void ensure_level(int chi);
  MultiDifferential compute(int g, int n);
  const SpecTensor& stored(int g, int n) const;
  TensorJet factor(const Point& q, int g, const std::vector<int>& pos, int order) const;

  SpectralCurve curve_;
  EngineOptions opt_;
  int done_level_ = 0;
  mutable std::mutex mu_;
  std::map<std::pair<int, int>, MultiDifferential> memo_;
};

/// Throws NotSimpleZero or HypothesisViolated when a key is outside the classical setting.
void check_ceo_admissible(const SpectralCurve& c);

MultiDifferential compute_ceo(const SpectralCurve& c, int g, int n, const EngineOptions& opt = {});
std::map<std::pair<int, int>, MultiDifferential> ceo_all(const SpectralCurve& c, int chi_max,
                                                         const EngineOptions& opt = {});

}  // namespace gtr
