// Exact dense linear algebra over the rationals.
#pragma once

#include <vector>

#include "gtr/rational.hpp"

namespace gtr {

using Matrix = std::vector<std::vector<Rational>>;

/// Inverse of a square matrix; throws DivisionByZero when singular.
Matrix inverse_matrix(Matrix a);
Rational determinant(Matrix a);
int matrix_rank(Matrix a);

}  // namespace gtr
