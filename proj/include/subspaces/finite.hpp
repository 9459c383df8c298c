#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "subspaces/linalg.hpp"
#include "subspaces/matrix.hpp"

namespace subspaces {

// Two subspaces inside a finite-dimensional ambient space, each stored as an
// orthonormal column frame.
struct FiniteSystem {
  std::size_t ambient = 0;
  Matrix e1;
  Matrix e2;
};

// Angle below which two principal directions are treated as a common
// direction (subspace intersection). Double precision cannot certify
// angles much below sqrt(eps); 1e-6 leaves a wide margin on both sides.
inline constexpr double kIntersectionAngleTol = 1e-6;
// Tolerance for comparing two sorted angle multisets.
inline constexpr double kAngleMatchTol = 1e-8;

// Builds a system from (possibly non-orthonormal, possibly dependent)
// spanning vectors given as columns.
FiniteSystem make_system(std::size_t ambient, const Matrix& span1, const Matrix& span2);

// (K1 + K2; K1 + 0, graph(T)) for T : K1 -> K2 given as a k2 x k1 matrix.
FiniteSystem graph_system(const Matrix& t);

struct DimQuadruple {
  std::size_t meet = 0;   // dim E1 ∩ E2
  std::size_t d1 = 0;     // dim E1 / (E1 ∩ E2)
  std::size_t d2 = 0;     // dim E2 / (E1 ∩ E2)
  std::size_t coker = 0;  // dim H / (E1 + E2)
  friend bool operator==(const DimQuadruple&, const DimQuadruple&) = default;
};

DimQuadruple dim_quadruple(const FiniteSystem& s);

// The five-fold decomposition: the four corner intersections plus the
// angle operator of the generic (Halmos) part.
struct HalmosParts {
  Matrix mm;  // E1 ∩ E2
  Matrix mp;  // E1 ∩ E2⊥
  Matrix pm;  // E1⊥ ∩ E2
  Matrix pp;  // E1⊥ ∩ E2⊥
  std::vector<double> generic_angles;  // strictly interior, non-decreasing
};

HalmosParts halmos_decompose(const FiniteSystem& s);

bool classify_algebraic_fin(const FiniteSystem& a, const FiniteSystem& b);
// In finite dimension every invertible linear map is bounded, so the
// bounded classifier coincides with the algebraic one.
bool classify_bounded_fin(const FiniteSystem& a, const FiniteSystem& b);
bool classify_unitary_fin(const FiniteSystem& a, const FiniteSystem& b);

// Invertible block-diagonal map S = diag(G1, G2) carrying graph(T) onto
// graph(T') together with verification numbers.
struct Witness {
  Matrix map;
  std::array<double, 2> frame_residuals{};  // e1-frame and e2-frame mapping errors
  double operator_residual = 0.0;           // ||T' G1 - G2 T||
  double condition = 0.0;
};

inline constexpr double kWitnessConditionCap = 1e8;

// Builds the witness when rank(t) == rank(t2); returns nullopt when ranks
// differ or when the construction is numerically untrustworthy. The map is
// accepted when ||t2 G1 - G2 t|| <= tol * (1 + ||t|| + ||t2||).
std::optional<Witness> witness_graph_bounded(const Matrix& t, const Matrix& t2,
                                             double tol = 1e-8);

// Representations of the one-arrow quiver built from t and t2 are
// isomorphic iff the ranks agree.
bool quiver_iso_a2(const Matrix& t, const Matrix& t2);

// Idempotent P with ran P = span(e1) and ran (1-P) = span(e2) when the two
// spans are complementary; nullopt otherwise.
std::optional<Matrix> oblique_projection(const Matrix& e1, const Matrix& e2);

struct DerivedSystem {
  Matrix e1;
  Matrix e1_perp;
  Matrix e2;
};

DerivedSystem derived_system(const FiniteSystem& s);

}  // namespace subspaces
