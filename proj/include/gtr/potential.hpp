// Free-energy coefficients at a single key point 0 and the golden-table fixtures.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gtr/curve.hpp"
#include "gtr/multidiff.hpp"
#include "gtr/report.hpp"

namespace gtr {

/// A monomial in the p's as (k, multiplicity) pairs with ascending k.
using PMonomial = std::vector<std::pair<int, int>>;

struct Potential {
  /// (g, sorted k's) -> f^{(g)}_{k_1..k_n}
  std::map<std::pair<int, std::vector<int>>, Rational> f;
  int chi_max = 0;
  std::string label;

  /// Coefficient of hbar^h * monomial in F, i.e. f / prod(multiplicities!).
  std::map<std::pair<int, PMonomial>, Rational> F() const;
};

/// Reads the f's off cells whose poles all sit at 0. Throws MultiPointUnsupported otherwise.
Potential extract_potential(const std::map<std::pair<int, int>, MultiDifferential>& cells, int chi_max,
                            const std::string& label = {});

/// F through hbar^hmax, e.g. "(1/6 p1^3 + 1/24 p3) h + ...", or "0".
std::string render_F(const Potential& p, int hmax);

/// The data directory of the source tree, overridable with GTR_DATA_DIR in the environment.
std::string default_data_dir();

struct GoldenRow {
  std::string label;
  /// Explicit curve text reproducing the row's sign convention.
  std::string curve;
  int hbar_max = 0;  // last order printed in the table
  std::map<std::pair<int, PMonomial>, Rational> terms;
};

/// Rows from the fixture files (data/golden_rs.json and data/golden_curves.json).
std::map<std::string, GoldenRow> load_golden(const std::string& dir = default_data_dir());

/// Term-by-term comparison through min(row order, p.chi_max, hmax).
VerificationReport golden_compare(const Potential& p, const GoldenRow& row, int hmax = 1 << 20);

/// Text form of a p-monomial: "p1^3 p3".
std::string monomial_str(const PMonomial& m);

}  // namespace gtr
