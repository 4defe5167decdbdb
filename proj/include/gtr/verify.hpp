// Independent checks on computed differentials. Every check returns a report.
#pragma once

#include <map>
#include <utility>
#include <vector>

#include "gtr/duality.hpp"
#include "gtr/report.hpp"

namespace gtr {

/// Cells of another source with one stable cell replaced (negative controls).
class ReplacedCell : public CellSource {
 public:
  ReplacedCell(const CellSource& base, int g, int n, SpecTensor t) : base_(base), g_(g), n_(n), t_(std::move(t)) {}
  const SpecTensor* cell(int g, int a, unsigned bmask) const override {
    if (bmask == 0 && g == g_ && a == n_) return &t_;
    return base_.cell(g, a, bmask);
  }

 private:
  const CellSource& base_;
  int g_, n_;
  SpecTensor t_;
};

/// True when q is a key where dx has a zero (r >= 2) and dy is regular and nonzero.
bool loop_applicable(const SpectralCurve& c, const Point& q);

/// [u^k] e^{u y} W^{(g)}_n in Xi_q for k = 0..kmax, with n spectators. `cells` must hold
/// every stable cell through 2g - 1 + n. y is the primitive of dy vanishing at q, plus
/// y_shift. Throws HypothesisViolated when q is not a loop point.
VerificationReport loop_check(const SpectralCurve& c, const CellSource& cells, const Point& q, int g, int n, int kmax,
                              const Rational& y_shift = 0);

/// loop_check at every loop point for all (g, n) with 0 <= 2g - 1 + n <= chi_max.
/// kmax < 0 means r at each point.
VerificationReport loop_suite(GeneralizedTR& e, int chi_max, int kmax = -1);

/// Perturbs each principal-part coefficient of omega^{(g)}_{n+1} at q in turn (one
/// symmetric orbit per run) and passes when every perturbation breaks one of the first
/// r loop equations.
VerificationReport loop_negative_control(GeneralizedTR& e, const Point& q, int g, int n);

VerificationReport symmetry_check(const SpectralCurve& c, const Cells& cells);

/// Exact equality of the generalized and classical engines; N/A outside the classical setting.
VerificationReport compare_engines(const SpectralCurve& c, int chi_max, const EngineOptions& opt = {});

/// Dual cells vanish identically when every special point is a key; N/A otherwise.
VerificationReport dual_trivial_check(const SpectralCurve& c, const Cells& omega, int chi_max);

/// Holomorphy of the duals at the keys, the recursion on the dual curve, and the round trip.
std::vector<VerificationReport> dual_checks(const SpectralCurve& c, const Cells& omega, int chi_max);

/// Polynomial in n variables, keyed by exponent vectors.
using MPoly = std::map<std::vector<int>, Rational>;

/// K(z1, z2) (z1 - z2) / sqrt(dz1 dz2) by powers of hbar, as polynomials in
/// a_i = 1/(z_i - q) (a_i = z_i when q is infinity).
struct BAKernel {
  Point q;
  std::vector<MPoly> h;
};

/// Throws MultiPointUnsupported unless all poles sit at one point (the first key when
/// every cell vanishes).
BAKernel ba_kernel(const SpectralCurve& c, const Cells& cells, int hbar_max);

/// (-1)^{n-1} sum over n-cycles of prod K(z_i, z_sigma(i)) at hbar^h, as a tensor over the
/// pole basis. Throws NonRationalPrimitive if it is not of that form.
MultiDifferential cyclic_sum(const BAKernel& k, int n, int h);

/// The determinantal identities for n = 1..nmax through hbar^hbar_max.
VerificationReport determinantal_check(const SpectralCurve& c, const Cells& cells, int nmax, int hbar_max);

}  // namespace gtr
