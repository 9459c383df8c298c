#pragma once

#include <cstddef>
#include <vector>

#include "subspaces/matrix.hpp"

namespace subspaces {

// Full singular value decomposition A = U * diag_rect(sigma) * V^T with
// U (rows x rows) and V (cols x cols) orthogonal and sigma of length
// min(rows, cols), non-increasing and non-negative.
struct Svd {
  Matrix u;
  std::vector<double> sigma;
  Matrix v;

  Matrix reconstruct() const;
};

// One-sided Jacobi SVD. Throws std::runtime_error if the sweep cap (60)
// is reached without convergence.
Svd svd(const Matrix& m);

// Relative rank tolerance: eps * max(rows, cols) * sigma_1.
double default_rank_tol(const Matrix& m, double sigma1);

// Number of singular values above tol; tol < 0 selects the default.
std::size_t rank(const Matrix& m, double tol = -1.0);

// Orthonormal basis of the column span, rows x rank(m).
Matrix orth_basis(const Matrix& vectors);

// Orthonormal basis of {x : Mx ~ 0}, cols x (cols - rank).
Matrix null_space(const Matrix& m);

// Principal angles between the spans of two orthonormal frames in the same
// ambient space; non-decreasing, in [0, pi/2], length min(dim u, dim v).
// Throws std::invalid_argument on ambient mismatch.
std::vector<double> principal_angles(const Matrix& u, const Matrix& v);

// Spectral norm (largest singular value).
double operator_norm(const Matrix& m);

// Solves A X = B for square invertible A (LU with partial pivoting).
Matrix solve(const Matrix& a, const Matrix& b);

Matrix inverse(const Matrix& a);

// sigma_1 / sigma_min; +inf when the smallest singular value underflows.
double condition_number(const Matrix& a);

}  // namespace subspaces
