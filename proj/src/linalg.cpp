#include "gtr/linalg.hpp"

#include "gtr/errors.hpp"

namespace gtr {

Matrix inverse_matrix(Matrix a) {
  std::size_t n = a.size();
  Matrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) fail(ErrorKind::InvalidArgument, "inverse of a non-square matrix");
    inv[i][i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) fail(ErrorKind::DivisionByZero, "singular matrix");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Rational f = 1 / a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] *= f;
      inv[c][j] *= f;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(a[r][c]) == 0) continue;
      Rational m = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= m * a[c][j];
        inv[r][j] -= m * inv[c][j];
      }
    }
  }
  return inv;
}

Rational determinant(Matrix a) {
  std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (sgn(a[r][c]) == 0) continue;
      Rational m = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= m * a[c][j];
    }
  }
  return det;
}

int matrix_rank(Matrix a) {
  int rank = 0;
  std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && sgn(a[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (sgn(a[r][c]) == 0) continue;
      Rational m = a[r][c] / a[rank][c];
      for (std::size_t j = c; j < cols; ++j) a[r][j] -= m * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace gtr
