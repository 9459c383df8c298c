#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "subspaces/diagonal.hpp"
#include "subspaces/matrix.hpp"

namespace subspaces {

enum class Relation {
  BoundedlyIsomorphic,
  NotBoundedlyIsomorphic,
  AlgebraicallyIsomorphic,
  NotAlgebraicallyIsomorphic,
  UnitarilyIsomorphic,
  NotUnitarilyIsomorphic,
  Undecided,
};

const char* to_string(Relation r);
bool is_decided(Relation r);

// Outcome of one classification: the relation claimed, the rule that fired,
// a human-readable statement of the criterion, and the obstructing or
// certifying quantities.
struct Verdict {
  Relation relation = Relation::Undecided;
  std::string rule_id;
  std::string citation;
  std::string detail;
};

// Search budgets for the numeric rules; overridable from config and CLI.
struct Budgets {
  std::size_t mu_terms = 100000;   // merge window for mu-sequence comparisons
  int k_log2_max = 30;             // dilation constants searched: 2^0 .. 2^k
  std::size_t alpha_grid = 200;    // log-spaced grid points per spectrum
  double tol = 1e-8;               // witness verification tolerance
  std::uint32_t disable_rules = 0; // bit k disables bounded rule R(k+1); test hook
};

// Two-sided comparison of mu-sequences. gamma1/gamma2 are certified bounds
// (present only when the corresponding side is certified); a flag may be
// true without a certificate when the comparison was inconclusive.
struct RatioBounds {
  bool bounded_above = false;
  bool bounded_below = false;
  std::optional<double> gamma1;  // certified: gamma1 * mu_n(b) <= mu_n(a)
  std::optional<double> gamma2;  // certified: mu_n(a) <= gamma2 * mu_n(b)
};

RatioBounds ratio_bounded(const DiagonalSpec& a, const DiagonalSpec& b,
                          const Budgets& budgets = {});

// Fixed-priority rules R1..R9, first match wins.
Verdict classify_bounded_graph(const DiagonalSpec& a, const DiagonalSpec& b,
                               const Budgets& budgets = {});

// Requires all diagonal values nonzero (kernel-free specs); throws
// std::invalid_argument otherwise.
Verdict classify_algebraic_graph(const DiagonalSpec& a, const DiagonalSpec& b);

struct CountingObstruction {
  bool symbolic = false;       // certified by the m0 exponent argument
  int k_log2_checked = 0;      // dilation ladder exhausted up to 2^this
  double alpha = 0.0;          // witnessing window for the largest K, when found
  double beta = 0.0;
  std::string note;
};

// Searches for a violation of the two-sided spectral counting inequalities
// N_a[x, y] <= N_b[x/K, Ky] (and symmetrically) over a dilation ladder.
// Closed-range parts are first replaced by a constant branch, which
// preserves the bounded-isomorphism class of the graph systems.
std::optional<CountingObstruction> counting_obstructed(const DiagonalSpec& a,
                                                       const DiagonalSpec& b,
                                                       const Budgets& budgets = {});

struct InverseGapCertificate {
  double gap = 0.0;  // certified bound on sup_n |1/a(n) - 1/b(n)|, below 1
};

// For branch-wise paired specs that are invertible with bounded inverse;
// throws std::invalid_argument when a spec is not boundedly invertible.
// Returns nullopt when inconclusive (gap bound >= 1, interval parts, or
// branch counts that do not pair up).
std::optional<InverseGapCertificate> inverse_perturbation_iso(const DiagonalSpec& a,
                                                              const DiagonalSpec& b);

// E1 + E2 of the graph system is closed iff the diagonal values are bounded
// away from zero.
bool sum_closed_graph(const DiagonalSpec& spec);

// Classification of the derived three-subspace systems (E1, E1-perp, E2):
// a bounded isomorphism forces equal domains, and for everywhere-defined
// operators the derived classification agrees with the two-subspace one.
Verdict derived_three_compatible(const DiagonalSpec& a, const DiagonalSpec& b,
                                 const Budgets& budgets = {});

// n x n matrix truncation of the diagonal model: kernel zeros first, then
// round-robin across branches, placed on the shift sub-diagonal.
Matrix finite_truncation(const DiagonalSpec& spec, std::size_t n);

}  // namespace subspaces
