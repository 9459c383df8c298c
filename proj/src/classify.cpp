#include "subspaces/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

namespace subspaces {

namespace {

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

const char* kCiteKernel =
    "graph systems: a bounded isomorphism carries ker T + 0 onto ker T' + 0, so the "
    "kernel dimensions agree";
const char* kCiteCokernel =
    "the closure codimension of the operator range is a unitary invariant of the range "
    "(weighted shift vs diagonal separation)";
const char* kCiteClosedSum =
    "a bounded isomorphism carries E1+E2 onto F1+F2 and preserves closedness of the sum";
const char* kCiteClosedPair =
    "complementary pairs with closed sum are boundedly isomorphic to an orthogonal pair "
    "(idempotent decomposition), hence to each other when kernels and cokernels match";
const char* kCiteRatio =
    "graphs of compact positive diagonals are boundedly isomorphic iff the mu-sequence "
    "ratio is bounded above and below (with equal nullity)";
const char* kCiteSh =
    "the Schatten exponent Sh is a bounded-isomorphism invariant of graphs of "
    "Schatten-class operators";
const char* kCiteCounting =
    "Fillmore-Williams: unitarily equivalent ranges of positive operators admit a "
    "dilation constant K with dim E[a,b] <= dim F[a/K, Kb] both ways";
const char* kCiteInverse =
    "||T1^{-1} - T2^{-1}|| < 1 yields an explicit bounded isomorphism of the graph "
    "systems";
const char* kCiteUndecided = "no criterion applies; the engine does not guess";
const char* kCiteAlgClosed =
    "exactly one range closed: the quotient H/(E1+E2) is zero on one side and of "
    "continuum Hamel dimension on the other";
const char* kCiteAlgBoth =
    "ranges both closed (matching codimension) or both non-closed: all four Hamel "
    "dimension invariants agree";
const char* kCiteAlgCoker =
    "both ranges closed but the quotients H/(E1+E2) have different finite dimensions";
const char* kCiteDerivedDomain =
    "a bounded isomorphism of derived three-subspace systems is block-diagonal and "
    "carries the domain of one operator onto the domain of the other";

Verdict verdict(Relation r, const char* rule, const char* cite, std::string detail) {
  return Verdict{r, rule, cite, std::move(detail)};
}

bool has_closed_part(const DiagonalSpec& s) {
  if (!s.intervals().empty()) return true;
  for (const auto& t : s.branches())
    if (!t.decays_to_zero()) return true;
  return false;
}

// The decaying branches with their overrides, re-indexed; kernel, shift and
// interval parts stripped.
DiagonalSpec compact_part(const DiagonalSpec& s) {
  std::vector<SymTerm> branches;
  std::vector<std::size_t> remap(s.branches().size(), SIZE_MAX);
  for (std::size_t i = 0; i < s.branches().size(); ++i) {
    if (s.branches()[i].decays_to_zero()) {
      remap[i] = branches.size();
      branches.push_back(s.branches()[i]);
    }
  }
  std::vector<Override> overrides;
  for (const auto& o : s.overrides())
    if (remap[o.branch] != SIZE_MAX) overrides.push_back({remap[o.branch], o.index, o.value});
  return DiagonalSpec(std::move(branches), std::move(overrides));
}

// Replaces every closed-range component (non-decaying branches and interval
// parts) by a single constant branch. Each such component is the graph of a
// boundedly invertible piece, so the replacement preserves the bounded
// isomorphism class of the direct sum while making spectral counting
// functions comparable.
DiagonalSpec normalize_for_counting(const DiagonalSpec& s, bool* had_closed) {
  DiagonalSpec compact = compact_part(s);
  *had_closed = has_closed_part(s);
  if (!*had_closed) return compact;
  std::vector<SymTerm> branches = compact.branches();
  branches.push_back(SymTerm{2.0, 0.0, 0.0, 1.0, 0.0});
  return DiagonalSpec(std::move(branches), compact.overrides());
}

struct SlowestOrder {
  double p = -kInf;
  double q = -kInf;
  double c_eff = 0.0;
};

// Lexicographically largest (p, q) over the branches (the slowest decay),
// together with the constant governing the merged tail mu_n ~ c_eff n^p log^q n.
SlowestOrder slowest_order(const DiagonalSpec& s) {
  SlowestOrder so;
  for (const auto& t : s.branches()) {
    if (t.p > so.p || (t.p == so.p && t.q > so.q)) {
      so.p = t.p;
      so.q = t.q;
    }
  }
  if (so.p < 0.0) {
    double sum = 0.0;
    for (const auto& t : s.branches())
      if (t.p == so.p && t.q == so.q) sum += std::pow(t.c, -1.0 / so.p);
    so.c_eff = std::pow(sum, -so.p);
  } else {
    for (const auto& t : s.branches())
      if (t.p == so.p && t.q == so.q) so.c_eff = std::max(so.c_eff, t.c);
  }
  return so;
}

bool invertible_bounded_below(const DiagonalSpec& s) {
  if (!(s.kernel() == CardinalDim::finite(0)) || s.shift_offset() != 0) return false;
  for (const auto& t : s.branches())
    if (t.decays_to_zero()) return false;
  return true;
}

}  // namespace

const char* to_string(Relation r) {
  switch (r) {
    case Relation::BoundedlyIsomorphic: return "boundedly-isomorphic";
    case Relation::NotBoundedlyIsomorphic: return "not-boundedly-isomorphic";
    case Relation::AlgebraicallyIsomorphic: return "algebraically-isomorphic";
    case Relation::NotAlgebraicallyIsomorphic: return "not-algebraically-isomorphic";
    case Relation::UnitarilyIsomorphic: return "unitarily-isomorphic";
    case Relation::NotUnitarilyIsomorphic: return "not-unitarily-isomorphic";
    case Relation::Undecided: return "undecided";
  }
  return "undecided";
}

bool is_decided(Relation r) { return r != Relation::Undecided; }

RatioBounds ratio_bounded(const DiagonalSpec& a, const DiagonalSpec& b,
                          const Budgets& budgets) {
  if (!compact_type(a) || !compact_type(b))
    throw std::invalid_argument("ratio_bounded: compact-type specs required");
  RatioBounds rb;
  if (a.branches().empty() || b.branches().empty()) {
    if (a.branches().empty() && b.branches().empty()) {
      rb.bounded_above = rb.bounded_below = true;
      rb.gamma1 = rb.gamma2 = 1.0;
      return rb;
    }
    throw std::invalid_argument("ratio_bounded: mu-sequence vanishes on one side");
  }
  const SlowestOrder oa = slowest_order(a);
  const SlowestOrder ob = slowest_order(b);
  rb.bounded_above = oa.p < ob.p || (oa.p == ob.p && oa.q <= ob.q);
  rb.bounded_below = ob.p < oa.p || (ob.p == oa.p && ob.q <= oa.q);

  const std::size_t window = std::max<std::size_t>(1, std::min<std::size_t>(budgets.mu_terms, 1000000));
  const std::vector<double> ma = mu_sequence(a, window);
  const std::vector<double> mb = mu_sequence(b, window);
  double rmin = kInf, rmax = 0.0;
  for (std::size_t i = 0; i < std::min(ma.size(), mb.size()); ++i) {
    const double r = ma[i] / mb[i];
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  if (rb.bounded_above && rb.bounded_below) {
    const double tail_limit = oa.c_eff / ob.c_eff;
    rb.gamma1 = 0.99 * std::min(rmin, tail_limit);
    rb.gamma2 = 1.01 * std::max(rmax, tail_limit);
  } else if (rb.bounded_above) {
    rb.gamma2 = 1.01 * rmax;  // tail ratio decays to zero
  } else if (rb.bounded_below) {
    rb.gamma1 = 0.99 * rmin;  // tail ratio grows
  }
  return rb;
}

Verdict classify_bounded_graph(const DiagonalSpec& a, const DiagonalSpec& b,
                               const Budgets& budgets) {
  const auto disabled = [&](int rule) {
    return ((budgets.disable_rules >> (rule - 1)) & 1u) != 0;
  };

  if (!disabled(1) && !(a.kernel() == b.kernel()))
    return verdict(Relation::NotBoundedlyIsomorphic, "R1", kCiteKernel,
                   strf("dim ker: %s vs %s", to_string(a.kernel()).c_str(),
                        to_string(b.kernel()).c_str()));

  if (!disabled(2) && !(cokernel_dim(a) == cokernel_dim(b)))
    return verdict(Relation::NotBoundedlyIsomorphic, "R2", kCiteCokernel,
                   strf("closure codimension of the range: %s vs %s",
                        to_string(cokernel_dim(a)).c_str(), to_string(cokernel_dim(b)).c_str()));

  const bool closed_a = range_closed(a);
  const bool closed_b = range_closed(b);
  if (!disabled(3) && closed_a != closed_b)
    return verdict(Relation::NotBoundedlyIsomorphic, "R3", kCiteClosedSum,
                   strf("E1+E2 is %s for the first system and %s for the second",
                        closed_a ? "closed" : "not closed", closed_b ? "closed" : "not closed"));

  if (!disabled(4) && closed_a && closed_b)
    return verdict(Relation::BoundedlyIsomorphic, "R4", kCiteClosedPair,
                   strf("both sums closed; dim ker = %s, closure codim = %s on both sides",
                        to_string(a.kernel()).c_str(), to_string(cokernel_dim(a)).c_str()));

  if (!disabled(5)) {
    const bool part_a = has_closed_part(a);
    const bool part_b = has_closed_part(b);
    if (part_a == part_b) {
      const DiagonalSpec ca = compact_part(a);
      const DiagonalSpec cb = compact_part(b);
      if (!ca.branches().empty() && !cb.branches().empty()) {
        const RatioBounds rb = ratio_bounded(ca, cb, budgets);
        if (rb.gamma1 && rb.gamma2) {
          std::string detail = strf("mu-ratio certified two-sided: gamma1=%.6g, gamma2=%.6g",
                                    *rb.gamma1, *rb.gamma2);
          if (part_a) detail += "; closed components split off as a common invertible block";
          return verdict(Relation::BoundedlyIsomorphic, "R5", kCiteRatio, std::move(detail));
        }
        if ((!rb.bounded_above || !rb.bounded_below) && !part_a) {
          std::string detail =
              strf("mu-ratio unbounded %s", !rb.bounded_above ? "above" : "below");
          const double sha = sh_exponent(a);
          const double shb = sh_exponent(b);
          if (std::isfinite(sha) && std::isfinite(shb))
            detail += strf("; Sh = %g and %g", sha, shb);
          return verdict(Relation::NotBoundedlyIsomorphic, "R5", kCiteRatio, std::move(detail));
        }
        // Composite specs with an unbounded compact-part ratio fall through:
        // the two-sided ratio criterion refutes only genuinely compact pairs.
      }
    }
  }

  if (!disabled(6)) {
    const double sha = sh_exponent(a);
    const double shb = sh_exponent(b);
    if (std::isfinite(sha) && std::isfinite(shb) && sha != shb)
      return verdict(Relation::NotBoundedlyIsomorphic, "R6", kCiteSh,
                     strf("Sh = %g vs %g", sha, shb));
  }

  if (!disabled(7)) {
    if (auto obs = counting_obstructed(a, b, budgets))
      return verdict(Relation::NotBoundedlyIsomorphic, "R7", kCiteCounting, obs->note);
  }

  if (!disabled(8) && invertible_bounded_below(a) && invertible_bounded_below(b) &&
      a.intervals().empty() && b.intervals().empty()) {
    if (auto cert = inverse_perturbation_iso(a, b))
      return verdict(Relation::BoundedlyIsomorphic, "R8", kCiteInverse,
                     strf("sup_n |1/a(n) - 1/b(n)| <= %g < 1", cert->gap));
  }

  return verdict(Relation::Undecided, "R9", kCiteUndecided, "");
}

Verdict classify_algebraic_graph(const DiagonalSpec& a, const DiagonalSpec& b) {
  if (!(a.kernel() == CardinalDim::finite(0)) || !(b.kernel() == CardinalDim::finite(0)))
    throw std::invalid_argument(
        "classify_algebraic_graph: requires all diagonal values nonzero (trivial kernels)");
  const bool ca = range_closed(a);
  const bool cb = range_closed(b);
  if (ca != cb)
    return verdict(Relation::NotAlgebraicallyIsomorphic, "ALG1", kCiteAlgClosed,
                   strf("range closed: %s vs %s", ca ? "yes" : "no", cb ? "yes" : "no"));
  if (ca && cb && !(cokernel_dim(a) == cokernel_dim(b)))
    return verdict(Relation::NotAlgebraicallyIsomorphic, "ALG3", kCiteAlgCoker,
                   strf("H/(E1+E2): dimension %s vs %s", to_string(cokernel_dim(a)).c_str(),
                        to_string(cokernel_dim(b)).c_str()));
  return verdict(Relation::AlgebraicallyIsomorphic, "ALG2", kCiteAlgBoth,
                 ca ? "both ranges closed with equal codimension"
                    : "both ranges non-closed: quotients have continuum Hamel dimension");
}

namespace {

enum class SymbolicFw { Inapplicable, Compatible, Obstructed };

// Shape test for the m0 exponent argument: after normalization, one pure
// power branch (q = 0) with no overrides on each side.
bool pure_power_shape(const DiagonalSpec& s, SymTerm* power) {
  if (!s.overrides().empty()) return false;
  const SymTerm* found = nullptr;
  for (const auto& t : s.branches()) {
    if (t.decays_to_zero()) {
      if (found) return false;
      found = &t;
    }
  }
  if (!found || found->q != 0.0) return false;
  *power = *found;
  return true;
}

SymbolicFw symbolic_fw(const DiagonalSpec& na, bool closed_a, const DiagonalSpec& nb,
                       bool closed_b, CountingObstruction* out) {
  if (closed_a != closed_b) {
    out->symbolic = true;
    out->note = strf(
        "closed component on one side only: its constant spectral level has infinite "
        "counting multiplicity with no matching window on the other side for any K");
    return SymbolicFw::Obstructed;
  }
  SymTerm pa, pb;
  if (!pure_power_shape(na, &pa) || !pure_power_shape(nb, &pb)) return SymbolicFw::Inapplicable;
  if (pa.p == pb.p) return SymbolicFw::Compatible;
  out->symbolic = true;
  const double s = std::min(-pa.p, -pb.p);
  const double t = std::max(-pa.p, -pb.p);
  out->note = strf(
      "power exponents %g vs %g: for every K the counting windows below the K-threshold "
      "force n^%g/(n+m)^%g <= K for all n and a fixed m, which fails",
      pa.p, pb.p, t, s);
  return SymbolicFw::Obstructed;
}

std::vector<double> counting_grid(const DiagonalSpec& a, const DiagonalSpec& b,
                                  const Budgets& budgets) {
  double vmin = kInf, vmax = 0.0;
  for (const DiagonalSpec* s : {&a, &b}) {
    for (const auto& t : s->branches()) {
      for (std::uint64_t n = 1; n <= 1u << 20; n *= 2) {
        const double v = t.value(static_cast<double>(n));
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
      }
    }
    for (const auto& o : s->overrides()) {
      vmin = std::min(vmin, o.value);
      vmax = std::max(vmax, o.value);
    }
  }
  if (!(vmin <= vmax)) {
    vmin = 1.0;
    vmax = 1.0;
  }
  const double kmax = std::ldexp(1.0, budgets.k_log2_max);
  const double lo = vmin / (kmax * kmax);
  const double hi = vmax * 4.0;
  const std::size_t n = std::max<std::size_t>(2, budgets.alpha_grid);
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  return grid;
}

// Violations must be certified on both operands: saturated counts are
// treated as unknown and never witness an obstruction.
bool certified_violation(const CountOrInf& lhs, const CountOrInf& rhs) {
  if (!lhs.exact() || !rhs.exact()) return false;
  return !(lhs <= rhs);
}

}  // namespace

// Ladders shallower than this are treated as inconclusive: a handful of
// violated K values is not meaningful evidence of exhaustion.
constexpr int kLadderFloorLog2 = 8;

std::optional<CountingObstruction> counting_obstructed(const DiagonalSpec& a,
                                                       const DiagonalSpec& b,
                                                       const Budgets& budgets) {
  if (budgets.k_log2_max < kLadderFloorLog2) return std::nullopt;
  bool closed_a = false, closed_b = false;
  const DiagonalSpec na = normalize_for_counting(a, &closed_a);
  const DiagonalSpec nb = normalize_for_counting(b, &closed_b);
  if (na == nb) return std::nullopt;  // K = 1 satisfies both inequalities

  CountingObstruction obs;
  obs.k_log2_checked = budgets.k_log2_max;
  const SymbolicFw sym = symbolic_fw(na, closed_a, nb, closed_b, &obs);
  if (sym == SymbolicFw::Compatible) return std::nullopt;

  const SpectralProfile pa(na);
  const SpectralProfile pb(nb);
  const std::vector<double> grid = counting_grid(na, nb, budgets);

  const auto find_violation = [&](double k, double* alpha, double* beta) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = i; j < grid.size(); ++j) {
        const double x = grid[i], y = grid[j];
        if (certified_violation(pa.count(x, y), pb.count(x / k, k * y)) ||
            certified_violation(pb.count(x, y), pa.count(x / k, k * y))) {
          *alpha = x;
          *beta = y;
          return true;
        }
      }
    }
    return false;
  };

  if (sym == SymbolicFw::Obstructed) {
    // Numeric spot check at the top of the ladder, for the report only.
    double alpha = 0.0, beta = 0.0;
    if (find_violation(std::ldexp(1.0, budgets.k_log2_max), &alpha, &beta)) {
      obs.alpha = alpha;
      obs.beta = beta;
      obs.note += strf("; e.g. K=2^%d fails on [%.3g, %.3g]", budgets.k_log2_max, alpha, beta);
    }
    return obs;
  }

  double alpha = 0.0, beta = 0.0;
  for (int klog = 0; klog <= budgets.k_log2_max; ++klog) {
    if (!find_violation(std::ldexp(1.0, klog), &alpha, &beta)) return std::nullopt;
  }
  obs.symbolic = false;
  obs.alpha = alpha;
  obs.beta = beta;
  obs.note = strf(
      "every K in {2^0..2^%d} admits a violating window; e.g. K=2^%d fails on [%.3g, %.3g]",
      budgets.k_log2_max, budgets.k_log2_max, alpha, beta);
  return obs;
}

std::optional<InverseGapCertificate> inverse_perturbation_iso(const DiagonalSpec& a,
                                                              const DiagonalSpec& b) {
  if (!invertible_bounded_below(a) || !invertible_bounded_below(b))
    throw std::invalid_argument(
        "inverse_perturbation_iso: specs must be invertible with bounded inverse");
  if (!a.intervals().empty() || !b.intervals().empty()) return std::nullopt;
  if (a.branches().size() != b.branches().size()) return std::nullopt;

  double gap = 0.0;
  for (std::size_t k = 0; k < a.branches().size(); ++k) {
    for (std::uint64_t n = 1; n <= kHeadWindow; ++n)
      gap = std::max(gap, std::fabs(1.0 / a.value_at(k, n) - 1.0 / b.value_at(k, n)));
    for (const auto& o : a.overrides())
      if (o.branch == k && o.index > kHeadWindow)
        gap = std::max(gap, std::fabs(1.0 / a.value_at(k, o.index) - 1.0 / b.value_at(k, o.index)));
    for (const auto& o : b.overrides())
      if (o.branch == k && o.index > kHeadWindow)
        gap = std::max(gap, std::fabs(1.0 / a.value_at(k, o.index) - 1.0 / b.value_at(k, o.index)));

    // Beyond the head window both reciprocals are monotone with known
    // limits; identical terms contribute nothing, otherwise enclose the
    // tail difference by the interval bound.
    if (!(a.branches()[k] == b.branches()[k])) {
      const auto tail_range = [](const SymTerm& t, double* lo, double* hi) {
        const double edge = 1.0 / t.value(static_cast<double>(kHeadWindow + 1));
        const double limit = t.is_constant() ? 1.0 / t.c : 0.0;
        *lo = std::min(edge, limit);
        *hi = std::max(edge, limit);
      };
      double la, ha, lb, hb;
      tail_range(a.branches()[k], &la, &ha);
      tail_range(b.branches()[k], &lb, &hb);
      gap = std::max(gap, std::max(ha - lb, hb - la));
    }
  }
  if (gap < 1.0) return InverseGapCertificate{gap};
  return std::nullopt;
}

bool sum_closed_graph(const DiagonalSpec& spec) { return range_closed(spec); }

Verdict derived_three_compatible(const DiagonalSpec& a, const DiagonalSpec& b,
                                 const Budgets& budgets) {
  const bool da = domain_total(a);
  const bool db = domain_total(b);
  if (da != db)
    return verdict(Relation::NotBoundedlyIsomorphic, "D1", kCiteDerivedDomain,
                   strf("the operator is everywhere defined on %s side only",
                        da ? "the first" : "the second"));
  if (da && db) {
    Verdict inner = classify_bounded_graph(a, b, budgets);
    inner.detail += inner.detail.empty() ? "" : "; ";
    inner.detail += "derived three-subspace systems classify with the two-subspace graphs";
    return inner;
  }
  return verdict(Relation::Undecided, "D2", kCiteUndecided,
                 "both operators unbounded: the derived-system criterion makes no claim");
}

Matrix finite_truncation(const DiagonalSpec& spec, std::size_t n) {
  if (!spec.intervals().empty())
    throw std::invalid_argument("finite_truncation: interval parts have no finite model");
  std::vector<double> vals;
  vals.reserve(n);
  const std::uint64_t zeros = spec.kernel().continuum
                                  ? n
                                  : std::min<std::uint64_t>(spec.kernel().count, n);
  for (std::uint64_t i = 0; i < zeros; ++i) vals.push_back(0.0);
  if (!spec.branches().empty()) {
    std::vector<std::uint64_t> next(spec.branches().size(), 1);
    std::size_t b = 0;
    while (vals.size() < n) {
      vals.push_back(spec.value_at(b, next[b]));
      ++next[b];
      b = (b + 1) % spec.branches().size();
    }
  }
  while (vals.size() < n) vals.push_back(0.0);

  Matrix t(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t row = i + spec.shift_offset();
    if (row < n) t(row, i) = vals[i];
  }
  return t;
}

}  // namespace subspaces
