#include "subspaces/finite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace subspaces {

namespace {

// Orthonormal frame of the orthogonal complement of a frame.
Matrix complement(const Matrix& frame, std::size_t ambient) {
  if (frame.cols() == 0) return Matrix::identity(ambient);
  return null_space(frame.transposed());
}

// Orthonormal frame of span(u) ∩ span(v): principal directions whose angle
// falls below the intersection tolerance.
Matrix intersect(const Matrix& u, const Matrix& v) {
  if (u.cols() == 0 || v.cols() == 0) return Matrix(u.rows(), 0);
  const Svd sv = svd(u.transposed() * v);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < sv.sigma.size(); ++i) {
    const double angle = std::acos(std::clamp(sv.sigma[i], 0.0, 1.0));
    if (angle <= kIntersectionAngleTol) idx.push_back(i);
  }
  if (idx.empty()) return Matrix(u.rows(), 0);
  return orth_basis(u * sv.u.cols(idx));
}

// Frame of the part of `frame` orthogonal to span(remove). The five-fold
// decomposition is orthogonal, so genuine directions keep unit-scale
// residuals; anything below the absolute cutoff is projection noise.
Matrix reduce_within(const Matrix& frame, const Matrix& remove) {
  if (remove.cols() == 0) return frame;
  const Matrix residual = frame - remove * (remove.transposed() * frame);
  if (residual.cols() == 0) return residual;
  const Svd sv = svd(residual);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < sv.sigma.size(); ++i)
    if (sv.sigma[i] > 1e-7) idx.push_back(i);
  return sv.u.cols(idx);
}

std::size_t count_zero_angles(const std::vector<double>& angles) {
  std::size_t n = 0;
  for (double a : angles)
    if (a <= kIntersectionAngleTol) ++n;
  return n;
}

}  // namespace

FiniteSystem make_system(std::size_t ambient, const Matrix& span1, const Matrix& span2) {
  if ((span1.cols() > 0 && span1.rows() != ambient) ||
      (span2.cols() > 0 && span2.rows() != ambient))
    throw std::invalid_argument("make_system: vector length differs from ambient dimension");
  Matrix s1 = span1.cols() > 0 ? span1 : Matrix(ambient, 0);
  Matrix s2 = span2.cols() > 0 ? span2 : Matrix(ambient, 0);
  return FiniteSystem{ambient, orth_basis(s1), orth_basis(s2)};
}

FiniteSystem graph_system(const Matrix& t) {
  const std::size_t k1 = t.cols(), k2 = t.rows();
  Matrix e1(k1 + k2, k1);
  for (std::size_t i = 0; i < k1; ++i) e1(i, i) = 1.0;
  const Matrix graph = vcat(Matrix::identity(k1), t);
  return FiniteSystem{k1 + k2, e1, orth_basis(graph)};
}

DimQuadruple dim_quadruple(const FiniteSystem& s) {
  const std::size_t meet = count_zero_angles(principal_angles(s.e1, s.e2));
  // The stacked frame [E1 E2] has one singular value sqrt(1 - cos theta)
  // per principal pair, so this cutoff counts exactly the directions the
  // angle threshold treats as shared.
  const double stacked_tol = std::sqrt(2.0) * std::sin(kIntersectionAngleTol / 2.0);
  const std::size_t sum_dim = rank(hcat(s.e1, s.e2), stacked_tol);
  DimQuadruple q;
  q.meet = meet;
  q.d1 = s.e1.cols() - meet;
  q.d2 = s.e2.cols() - meet;
  q.coker = s.ambient - sum_dim;
  return q;
}

HalmosParts halmos_decompose(const FiniteSystem& s) {
  const Matrix e1c = complement(s.e1, s.ambient);
  const Matrix e2c = complement(s.e2, s.ambient);
  HalmosParts parts;
  parts.mm = intersect(s.e1, s.e2);
  parts.mp = intersect(s.e1, e2c);
  parts.pm = intersect(e1c, s.e2);
  parts.pp = intersect(e1c, e2c);
  const Matrix generic1 = reduce_within(s.e1, hcat(parts.mm, parts.mp));
  const Matrix generic2 = reduce_within(s.e2, hcat(parts.mm, parts.pm));
  parts.generic_angles = principal_angles(generic1, generic2);
  return parts;
}

bool classify_algebraic_fin(const FiniteSystem& a, const FiniteSystem& b) {
  return a.ambient == b.ambient && dim_quadruple(a) == dim_quadruple(b);
}

bool classify_bounded_fin(const FiniteSystem& a, const FiniteSystem& b) {
  return classify_algebraic_fin(a, b);
}

bool classify_unitary_fin(const FiniteSystem& a, const FiniteSystem& b) {
  if (a.ambient != b.ambient) return false;
  const HalmosParts ha = halmos_decompose(a);
  const HalmosParts hb = halmos_decompose(b);
  if (ha.mm.cols() != hb.mm.cols() || ha.mp.cols() != hb.mp.cols() ||
      ha.pm.cols() != hb.pm.cols() || ha.pp.cols() != hb.pp.cols())
    return false;
  if (ha.generic_angles.size() != hb.generic_angles.size()) return false;
  std::vector<double> sa = ha.generic_angles, sb = hb.generic_angles;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  for (std::size_t i = 0; i < sa.size(); ++i)
    if (std::fabs(sa[i] - sb[i]) > kAngleMatchTol) return false;
  return true;
}

std::optional<Witness> witness_graph_bounded(const Matrix& t, const Matrix& t2, double tol) {
  if (t.rows() != t2.rows() || t.cols() != t2.cols())
    throw std::invalid_argument("witness_graph_bounded: operators must share a shape");
  const std::size_t k2 = t.rows();
  const Svd sa = svd(t);
  const Svd sb = svd(t2);
  const double tol_a = default_rank_tol(t, sa.sigma.empty() ? 0.0 : sa.sigma[0]);
  const double tol_b = default_rank_tol(t2, sb.sigma.empty() ? 0.0 : sb.sigma[0]);
  std::size_t ra = 0, rb = 0;
  for (double s : sa.sigma)
    if (s > tol_a) ++ra;
  for (double s : sb.sigma)
    if (s > tol_b) ++rb;
  if (ra != rb) return std::nullopt;

  // G1 maps the right singular frame of t onto the one of t2; G2 does the
  // same on the left with sigma-ratio scaling on the common rank and
  // identity on the complements.  Then t2 * G1 = G2 * t by construction.
  const Matrix g1 = sb.v * sa.v.transposed();
  std::vector<double> ratios(k2, 1.0);
  double ratio_max = 1.0, ratio_min = 1.0;
  for (std::size_t i = 0; i < ra; ++i) {
    ratios[i] = sb.sigma[i] / sa.sigma[i];
    ratio_max = std::max(ratio_max, ratios[i]);
    ratio_min = std::min(ratio_min, ratios[i]);
  }
  const Matrix g2 = sb.u * Matrix::diagonal(ratios) * sa.u.transposed();
  const double condition = ratio_max / ratio_min;
  if (!(condition <= kWitnessConditionCap)) return std::nullopt;

  Witness w;
  w.map = block_diag(g1, g2);
  w.condition = condition;
  const double scale = 1.0 + operator_norm(t) + operator_norm(t2);
  w.operator_residual = operator_norm(t2 * g1 - g2 * t);
  if (!(w.operator_residual <= tol * scale)) return std::nullopt;

  const FiniteSystem ga = graph_system(t);
  const FiniteSystem gb = graph_system(t2);
  const auto frame_residual = [&](const Matrix& src, const Matrix& dst) {
    const Matrix mapped = orth_basis(w.map * src);
    const Matrix off = mapped - dst * (dst.transposed() * mapped);
    return operator_norm(off);
  };
  w.frame_residuals[0] = frame_residual(ga.e1, gb.e1);
  w.frame_residuals[1] = frame_residual(ga.e2, gb.e2);
  return w;
}

bool quiver_iso_a2(const Matrix& t, const Matrix& t2) {
  if (t.rows() != t2.rows() || t.cols() != t2.cols())
    throw std::invalid_argument("quiver_iso_a2: operators must share a shape");
  return rank(t) == rank(t2);
}

std::optional<Matrix> oblique_projection(const Matrix& e1, const Matrix& e2) {
  if (e1.rows() != e2.rows())
    throw std::invalid_argument("oblique_projection: frames live in different ambient spaces");
  const std::size_t n = e1.rows();
  if (e1.cols() + e2.cols() != n) return std::nullopt;
  const auto angles = principal_angles(e1, e2);
  if (!angles.empty() && angles.front() <= kIntersectionAngleTol) return std::nullopt;

  const Matrix basis = hcat(e1, e2);
  Matrix selector(n, n);
  for (std::size_t i = 0; i < e1.cols(); ++i) selector(i, i) = 1.0;
  Matrix p;
  try {
    p = basis * selector * inverse(basis);
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
  if (operator_norm(p * p - p) > 1e-9) return std::nullopt;
  return p;
}

DerivedSystem derived_system(const FiniteSystem& s) {
  return DerivedSystem{s.e1, complement(s.e1, s.ambient), s.e2};
}

}  // namespace subspaces
