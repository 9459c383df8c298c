#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace subspaces {

// One symbolic diagonal branch: value(n) = c * (n+a)^p * log(n+b)^q.
// Requires c > 0, a >= 0, b >= 1, so values are positive from n = 1 on.
struct SymTerm {
  double c = 1.0;
  double a = 0.0;
  double p = 0.0;
  double b = 1.0;
  double q = 0.0;

  double value(double n) const;
  bool decays_to_zero() const { return p < 0.0 || (p == 0.0 && q < 0.0); }
  bool grows_unbounded() const { return p > 0.0 || (p == 0.0 && q > 0.0); }
  bool is_constant() const { return p == 0.0 && q == 0.0; }
  // Sign of value(n+1) - value(n) for all n past the head window.
  int eventual_sign() const;

  friend bool operator==(const SymTerm&, const SymTerm&) = default;
};

double eval_term(const SymTerm& t, std::uint64_t n);

// Hamel dimension of kernels/cokernels: finite, or the continuum (the
// countable case never arises for closed subspaces and operator-range
// quotients of a separable space).
struct CardinalDim {
  bool continuum = false;
  std::uint64_t count = 0;

  static CardinalDim finite(std::uint64_t k) { return {false, k}; }
  static CardinalDim make_continuum() { return {true, 0}; }
  CardinalDim plus(std::uint64_t k) const {
    return continuum ? *this : finite(count + k);
  }
  friend bool operator==(const CardinalDim&, const CardinalDim&) = default;
};

std::string to_string(const CardinalDim& d);

// Replaces the diagonal value of one branch at one index.
struct Override {
  std::size_t branch = 0;
  std::uint64_t index = 1;
  double value = 1.0;
  friend bool operator==(const Override&, const Override&) = default;
};

// Continuous spectral piece of infinite multiplicity on [lo, hi], 0 < lo <= hi.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Indices below which non-monotone behaviour of a branch is handled by
// explicit scanning; beyond it every branch must be monotone.
inline constexpr std::uint64_t kHeadWindow = 10000;

// Symbolic model of a diagonal-type closed operator on l2(N): a direct sum
// of symbolic branches with finitely many overridden entries, an optional
// sub-diagonal shift (kernel unchanged, cokernel grows by the offset), an
// explicit kernel cardinal, and continuous interval parts.
class DiagonalSpec {
 public:
  DiagonalSpec() = default;
  DiagonalSpec(std::vector<SymTerm> branches, std::vector<Override> overrides = {},
               std::size_t shift_offset = 0,
               CardinalDim kernel = CardinalDim::finite(0),
               std::vector<Interval> intervals = {});

  const std::vector<SymTerm>& branches() const { return branches_; }
  const std::vector<Override>& overrides() const { return overrides_; }
  std::size_t shift_offset() const { return shift_offset_; }
  const CardinalDim& kernel() const { return kernel_; }
  const std::vector<Interval>& intervals() const { return intervals_; }

  // Diagonal value of one branch at one index, overrides applied.
  double value_at(std::size_t branch, std::uint64_t n) const;

  friend bool operator==(const DiagonalSpec&, const DiagonalSpec&) = default;

 private:
  std::vector<SymTerm> branches_;
  std::vector<Override> overrides_;
  std::size_t shift_offset_ = 0;
  CardinalDim kernel_ = CardinalDim::finite(0);
  std::vector<Interval> intervals_;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline constexpr std::uint64_t kCountSaturation = std::uint64_t(1) << 62;

// Counting value in N ∪ {∞}; finite values saturate far below 2^64 so the
// additive arithmetic below never overflows. A saturated finite value means
// "at least 2^62, exact size unknown" and is excluded from certified
// comparisons by callers via exact().
struct CountOrInf {
  bool infinite = false;
  std::uint64_t value = 0;

  static CountOrInf inf() { return {true, 0}; }
  static CountOrInf of(std::uint64_t v);
  CountOrInf operator+(const CountOrInf& o) const;
  friend bool operator==(const CountOrInf&, const CountOrInf&) = default;
  // Total order with ∞ on top; saturated finite values compare equal.
  bool operator<=(const CountOrInf& o) const;
  bool exact() const { return infinite || value < kCountSaturation; }
};

std::string to_string(const CountOrInf& c);

// True when every branch decays to zero and there are no interval parts.
bool compact_type(const DiagonalSpec& spec);

// inf{alpha > 0 : sum of |values|^alpha converges}; +inf for operators
// outside every Schatten class. For non-compact specs the +inf value is a
// convention, flagged as such in the CLI output.
double sh_exponent(const DiagonalSpec& spec);

// Convergence of sum value(n)^alpha, decided symbolically per branch:
// p*alpha < -1, or p*alpha = -1 and q*alpha < -1.
bool schatten_member(const DiagonalSpec& spec, double alpha);

// First `count` entries of the decreasing rearrangement of all diagonal
// values. Requires a compact-type spec and count <= 1e6.
std::vector<double> mu_sequence(const DiagonalSpec& spec, std::size_t count);

// N(alpha, beta) = #{ diagonal values in [alpha, beta] }, plus ∞ whenever a
// continuous interval part overlaps. Requires 0 < alpha <= beta.
CountOrInf counting(const DiagonalSpec& spec, double alpha, double beta);

// True iff the infimum of the nonzero diagonal values is positive.
bool range_closed(const DiagonalSpec& spec);

// True iff the diagonal values are bounded (the operator is everywhere
// defined).
bool domain_total(const DiagonalSpec& spec);

// kernel + shift offset, with the continuum absorbing.
CardinalDim cokernel_dim(const DiagonalSpec& spec);

// Precomputed counting function of a spec, cheap to query repeatedly.
class SpectralProfile {
 public:
  explicit SpectralProfile(const DiagonalSpec& spec);
  CountOrInf count(double alpha, double beta) const;

 private:
  struct BranchTable {
    SymTerm term;
    std::vector<double> head_sorted;  // values at n <= kHeadWindow, ascending
    int tail_sign = 0;                // eventual monotonicity direction
  };
  std::vector<BranchTable> branches_;
  std::vector<std::pair<double, double>> override_swaps_;  // (removed, added)
  std::vector<Interval> intervals_;
};

}  // namespace subspaces
