#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "subspaces/linalg.hpp"
#include "subspaces/matrix.hpp"

namespace testutil {

using subspaces::Matrix;

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = gauss(rng);
  return m;
}

inline Matrix random_orthogonal(std::size_t n, std::mt19937_64& rng) {
  return subspaces::orth_basis(random_matrix(n, n, rng));
}

// Invertible with singular values log-uniform in [1, max_cond].
inline Matrix random_invertible(std::size_t n, double max_cond, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = std::exp(unit(rng) * std::log(max_cond));
  return random_orthogonal(n, rng) * Matrix::diagonal(d) * random_orthogonal(n, rng);
}

// Row-echelon rank with partial pivoting; independent of the SVD path.
inline std::size_t gauss_rank(Matrix m, double tol) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    for (std::size_t i = r + 1; i < rows; ++i)
      if (std::fabs(m(i, c)) > std::fabs(m(piv, c))) piv = i;
    if (std::fabs(m(piv, c)) <= tol) continue;
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(r, j), m(piv, j));
    for (std::size_t i = r + 1; i < rows; ++i) {
      const double f = m(i, c) / m(r, c);
      for (std::size_t j = c; j < cols; ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

}  // namespace testutil
