// x-y duality through the two-index ladder of mixed differentials omega_{m,n}.
//
// x-side slots are carried over the pole basis. y-side slots of intermediate cells
// have poles on the diagonals with the x-side slots, so they are carried as
// evaluations at points of one exact rational grid; the diagonal poles then sit at
// grid points of the pole basis. Mixed cells are symmetric in their y-side slots, so
// a value is stored once per set of grid points. The final omega_{0,n} is computed
// symbolically in one slot and recovered in the others by an exact fit on the grid.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gtr/gentr.hpp"

namespace gtr {

using Cells = std::map<std::pair<int, int>, MultiDifferential>;

struct LadderOptions {
  /// Lower bound on the number of grid points; the grid grows with the pole data.
  int grid_size = 0;
};

/// A principal part found where the transformed differentials must be holomorphic.
struct StrayPole {
  int g = 0, n = 0;
  Point point;
  bool at_grid = false;  // on a diagonal
};

struct LadderResult {
  Cells omega;                    // the transformed stable differentials
  std::vector<StrayPole> stray;   // poles outside the target special points
  int grid_size = 0;
  /// Number of computed values that the fit predicted without using them.
  long checked_tuples = 0;
};

/// Runs the ladder with local insertions along dx and the output operator along dy of
/// `c`, starting from its differentials `omega` (all stable cells through chi_max).
/// The result lives on dual_curve(c). Poles are sought at every critical point.
LadderResult xy_ladder(const SpectralCurve& c, const Cells& omega, int chi_max, const LadderOptions& opt = {});

/// omega^vee from omega. Throws NonHolomorphicDual when a result has a pole at a key.
Cells xy_dual(const SpectralCurve& c, const Cells& omega, int chi_max, const LadderOptions& opt = {});

/// omega from omega^vee: the same ladder run on the dual curve.
Cells xy_inverse(const SpectralCurve& c, const Cells& omega_vee, int chi_max, const LadderOptions& opt = {});

/// zhat(z, v) = exp((v hbar / 2) d_y) z = sum_m c[m] (v hbar)^m.
struct ZHat {
  std::vector<RationalFunction> c;
};
ZHat z_hat(const RationalFunction& dy, int order);

/// hbar-series of xhat - x from the simple nonzero poles of dx: entry h is the
/// coefficient of hbar^h. Empty when there are no such poles.
std::map<int, RationalFunction> log_shift(const SpectralCurve& c, int hbar_max);

/// omega^{(g)}_n from the closed formula valid when every special point is a key
/// (the dual recursion is then trivial). Throws NotTrivialDual otherwise.
MultiDifferential closed_form_trivial_dual(const SpectralCurve& c, int g, int n);

/// Grid points used for y-side evaluations, avoiding the given points.
std::vector<Point> grid_points(int count, const std::vector<Point>& avoid);

/// Density of b_{q,k} at a finite point.
Rational basis_density(const PoleIndex& b, const Rational& z);

}  // namespace gtr
