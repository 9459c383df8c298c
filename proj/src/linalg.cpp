#include "subspaces/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace subspaces {

namespace {

constexpr int kMaxSweeps = 60;
constexpr double kConvergeTol = 1e-15;

// Completes the columns of q (orthonormal, possibly fewer than n) to an
// orthonormal basis of R^n by sweeping standard basis vectors through two
// passes of Gram-Schmidt. The second pass keeps the result orthogonal to
// working precision even when the first-pass residual is small, so a
// candidate is rejected only when it truly lies in the current span.
void complete_orthonormal(Matrix& q, std::size_t filled) {
  constexpr double kInSpan = 1e-8;
  const std::size_t n = q.rows();
  std::size_t next = 0;
  for (std::size_t k = filled; k < q.cols(); ++k) {
    std::vector<double> v(n, 0.0);
    double norm = 0.0;
    while (next < n) {
      std::fill(v.begin(), v.end(), 0.0);
      v[next] = 1.0;
      ++next;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < k; ++j) {
          double dot = 0.0;
          for (std::size_t i = 0; i < n; ++i) dot += v[i] * q(i, j);
          for (std::size_t i = 0; i < n; ++i) v[i] -= dot * q(i, j);
        }
        if (pass == 0) {
          const double r = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
          if (r <= kInSpan) break;  // in the span: next candidate
          for (double& x : v) x /= r;
        }
      }
      norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
      if (norm > kInSpan) break;
    }
    if (norm <= kInSpan) throw std::runtime_error("orthonormal completion failed");
    for (std::size_t i = 0; i < n; ++i) q(i, k) = v[i] / norm;
  }
}

}  // namespace

Matrix Svd::reconstruct() const {
  const std::size_t m = u.rows(), n = v.rows();
  Matrix s(m, n);
  for (std::size_t i = 0; i < sigma.size(); ++i) s(i, i) = sigma[i];
  return u * s * v.transposed();
}

Svd svd(const Matrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m == 0 || n == 0)
    return Svd{Matrix::identity(m), {}, Matrix::identity(n)};

  Matrix w = a;                  // working columns, rotated in place
  Matrix v = Matrix::identity(n);

  // Columns whose norm sits at rounding-noise level carry no direction
  // information; pairs involving them are treated as orthogonal so the
  // sweep does not chase noise. Rotations preserve the Frobenius norm.
  const double noise_floor = std::pow(a.frobenius_norm() * 1e-15, 2);

  // Column Gram entries are recomputed per pair; n <= a few hundred here.
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          app += w(i, p) * w(i, p);
          aqq += w(i, q) * w(i, q);
          apq += w(i, p) * w(i, q);
        }
        if (app <= noise_floor || aqq <= noise_floor) continue;
        if (std::fabs(apq) <= kConvergeTol * std::sqrt(app * aqq)) continue;
        converged = false;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, tau) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double wp = w(i, p), wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
  }
  if (!converged) throw std::runtime_error("svd: one-sided Jacobi did not converge in 60 sweeps");

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += w(i, j) * w(i, j);
    norms[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

  const std::size_t k = std::min(m, n);
  std::vector<double> sigma(k);
  for (std::size_t j = 0; j < k; ++j) sigma[j] = norms[order[j]];

  Matrix vs(n, n);
  for (std::size_t j = 0; j < n; ++j) vs.set_col(j, v.col(order[j]));

  const double sigma1 = sigma.empty() ? 0.0 : sigma[0];
  const double zero_cut =
      sigma1 * std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(m, n));

  Matrix u(m, m);
  std::size_t filled = 0;
  for (std::size_t j = 0; j < k && sigma[j] > zero_cut && sigma[j] > 0.0; ++j) {
    for (std::size_t i = 0; i < m; ++i) u(i, j) = w(i, order[j]) / sigma[j];
    ++filled;
  }
  complete_orthonormal(u, filled);
  return Svd{std::move(u), std::move(sigma), std::move(vs)};
}

double default_rank_tol(const Matrix& m, double sigma1) {
  return std::numeric_limits<double>::epsilon() *
         static_cast<double>(std::max(m.rows(), m.cols())) * sigma1;
}

std::size_t rank(const Matrix& m, double tol) {
  if (m.empty()) return 0;
  const Svd sv = svd(m);
  const double t = tol < 0.0 ? default_rank_tol(m, sv.sigma.empty() ? 0.0 : sv.sigma[0]) : tol;
  std::size_t r = 0;
  for (double s : sv.sigma)
    if (s > t) ++r;
  return r;
}

Matrix orth_basis(const Matrix& vectors) {
  if (vectors.cols() == 0) return Matrix(vectors.rows(), 0);
  const Svd sv = svd(vectors);
  const double t = default_rank_tol(vectors, sv.sigma.empty() ? 0.0 : sv.sigma[0]);
  std::size_t r = 0;
  for (double s : sv.sigma)
    if (s > t) ++r;
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  return sv.u.cols(idx);
}

Matrix null_space(const Matrix& m) {
  if (m.cols() == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::identity(m.cols());
  const Svd sv = svd(m);
  const double t = default_rank_tol(m, sv.sigma.empty() ? 0.0 : sv.sigma[0]);
  std::size_t r = 0;
  for (double s : sv.sigma)
    if (s > t) ++r;
  std::vector<std::size_t> idx;
  for (std::size_t j = r; j < m.cols(); ++j) idx.push_back(j);
  return sv.v.cols(idx);
}

std::vector<double> principal_angles(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows())
    throw std::invalid_argument("principal_angles: frames live in different ambient spaces");
  if (u.cols() == 0 || v.cols() == 0) return {};
  const Svd sv = svd(u.transposed() * v);
  std::vector<double> angles;
  angles.reserve(sv.sigma.size());
  for (double s : sv.sigma) angles.push_back(std::acos(std::clamp(s, 0.0, 1.0)));
  return angles;  // sigma non-increasing => angles non-decreasing
}

double operator_norm(const Matrix& m) {
  if (m.empty()) return 0.0;
  const Svd sv = svd(m);
  return sv.sigma.empty() ? 0.0 : sv.sigma[0];
}

Matrix solve(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("solve: matrix not square");
  if (b.rows() != n) throw std::invalid_argument("solve: rhs shape mismatch");
  Matrix lu = a;
  Matrix x = b;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const double singular_cut = a.max_abs() * n * std::numeric_limits<double>::epsilon();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::fabs(lu(i, col)) > std::fabs(lu(piv, col))) piv = i;
    if (std::fabs(lu(piv, col)) <= singular_cut)
      throw std::runtime_error("solve: matrix is singular to working precision");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(col, j), lu(piv, j));
      for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(col, j), x(piv, j));
    }
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = lu(i, col) / lu(col, col);
      lu(i, col) = 0.0;
      if (f == 0.0) continue;
      for (std::size_t j = col + 1; j < n; ++j) lu(i, j) -= f * lu(col, j);
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= f * x(col, j);
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double acc = x(col, j);
      for (std::size_t k2 = col + 1; k2 < n; ++k2) acc -= lu(col, k2) * x(k2, j);
      x(col, j) = acc / lu(col, col);
    }
  }
  return x;
}

Matrix inverse(const Matrix& a) { return solve(a, Matrix::identity(a.rows())); }

double condition_number(const Matrix& a) {
  if (a.empty()) return 1.0;
  const Svd sv = svd(a);
  const double lo = sv.sigma.back();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return sv.sigma[0] / lo;
}

}  // namespace subspaces
