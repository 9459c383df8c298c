#include "subspaces/diagonal.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace subspaces {

namespace {

void validate_term(const SymTerm& t) {
  if (!(t.c > 0.0) || !std::isfinite(t.c))
    throw std::invalid_argument("term: coefficient must be positive and finite");
  if (!(t.a >= 0.0) || !std::isfinite(t.a))
    throw std::invalid_argument("term: index shift must be non-negative");
  if (!(t.b >= 1.0) || !std::isfinite(t.b))
    throw std::invalid_argument("term: log shift must be at least 1");
  if (!std::isfinite(t.p) || !std::isfinite(t.q))
    throw std::invalid_argument("term: exponents must be finite");
  // Monotonicity past the head window. The log-derivative
  //   r(n) = p/(n+a) + q/((n+b) log(n+b))
  // changes sign at most once when p and q disagree in sign; the branch is
  // monotone beyond the window iff r at the window edge already has the
  // eventual sign.
  if (t.p != 0.0 && t.q != 0.0 && (t.p > 0.0) != (t.q > 0.0)) {
    const double n = static_cast<double>(kHeadWindow);
    const double r = t.p / (n + t.a) + t.q / ((n + t.b) * std::log(n + t.b));
    const int sign_r = r > 0.0 ? 1 : (r < 0.0 ? -1 : 0);
    if (sign_r != 0 && sign_r != t.eventual_sign())
      throw std::invalid_argument("term: not monotone beyond the head window");
  }
}

}  // namespace

double SymTerm::value(double n) const {
  return c * std::pow(n + a, p) * std::pow(std::log(n + b), q);
}

int SymTerm::eventual_sign() const {
  if (p != 0.0) return p > 0.0 ? 1 : -1;
  if (q != 0.0) return q > 0.0 ? 1 : -1;
  return 0;
}

double eval_term(const SymTerm& t, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("eval_term: indices start at 1");
  return t.value(static_cast<double>(n));
}

std::string to_string(const CardinalDim& d) {
  return d.continuum ? "continuum" : std::to_string(d.count);
}

DiagonalSpec::DiagonalSpec(std::vector<SymTerm> branches, std::vector<Override> overrides,
                           std::size_t shift_offset, CardinalDim kernel,
                           std::vector<Interval> intervals)
    : branches_(std::move(branches)),
      overrides_(std::move(overrides)),
      shift_offset_(shift_offset),
      kernel_(kernel),
      intervals_(std::move(intervals)) {
  for (const auto& t : branches_) validate_term(t);
  std::set<std::pair<std::size_t, std::uint64_t>> seen;
  for (const auto& o : overrides_) {
    if (o.branch >= branches_.size())
      throw std::invalid_argument("override: branch out of range");
    if (o.index == 0) throw std::invalid_argument("override: indices start at 1");
    if (!(o.value > 0.0) || !std::isfinite(o.value))
      throw std::invalid_argument("override: value must be positive and finite");
    if (!seen.insert({o.branch, o.index}).second)
      throw std::invalid_argument("override: duplicate (branch, index)");
  }
  for (const auto& iv : intervals_) {
    if (!(iv.lo > 0.0) || !(iv.lo <= iv.hi) || !std::isfinite(iv.hi))
      throw std::invalid_argument("interval part: need 0 < lo <= hi < inf");
  }
}

double DiagonalSpec::value_at(std::size_t branch, std::uint64_t n) const {
  for (const auto& o : overrides_)
    if (o.branch == branch && o.index == n) return o.value;
  return eval_term(branches_.at(branch), n);
}

CountOrInf CountOrInf::of(std::uint64_t v) { return {false, std::min(v, kCountSaturation)}; }

CountOrInf CountOrInf::operator+(const CountOrInf& o) const {
  if (infinite || o.infinite) return inf();
  return of(value + o.value);
}

bool CountOrInf::operator<=(const CountOrInf& o) const {
  if (infinite) return o.infinite;
  if (o.infinite) return true;
  return value <= o.value;
}

std::string to_string(const CountOrInf& c) {
  return c.infinite ? "inf" : std::to_string(c.value);
}

bool compact_type(const DiagonalSpec& spec) {
  if (!spec.intervals().empty()) return false;
  for (const auto& t : spec.branches())
    if (!t.decays_to_zero()) return false;
  return true;
}

double sh_exponent(const DiagonalSpec& spec) {
  if (!spec.intervals().empty()) return kInf;
  double sh = 0.0;
  for (const auto& t : spec.branches())
    sh = std::max(sh, t.p < 0.0 ? -1.0 / t.p : kInf);
  return sh;
}

bool schatten_member(const DiagonalSpec& spec, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("schatten_member: alpha must be positive");
  if (!spec.intervals().empty()) return false;
  for (const auto& t : spec.branches()) {
    const double pa = t.p * alpha;
    const bool converges = pa < -1.0 || (pa == -1.0 && t.q * alpha < -1.0);
    if (!converges) return false;
  }
  return true;
}

std::vector<double> mu_sequence(const DiagonalSpec& spec, std::size_t count) {
  if (!compact_type(spec))
    throw std::invalid_argument("mu_sequence: spec is not compact-type");
  if (count > 1000000)
    throw std::invalid_argument("mu_sequence: window capped at 1e6 entries");
  // Every entry of the decreasing rearrangement up to position `count` has
  // index at most count + head window, branch-wise.
  const std::uint64_t window = count + kHeadWindow;
  std::vector<double> vals;
  vals.reserve(spec.branches().size() * window + spec.overrides().size());
  for (std::size_t bidx = 0; bidx < spec.branches().size(); ++bidx)
    for (std::uint64_t n = 1; n <= window; ++n) vals.push_back(spec.value_at(bidx, n));
  for (const auto& o : spec.overrides())
    if (o.index > window) vals.push_back(o.value);
  std::sort(vals.begin(), vals.end(), std::greater<>());
  if (vals.size() > count) vals.resize(count);
  return vals;
}

bool range_closed(const DiagonalSpec& spec) {
  for (const auto& t : spec.branches())
    if (t.decays_to_zero()) return false;
  return true;  // interval parts have lo > 0; overrides are finitely many positives
}

bool domain_total(const DiagonalSpec& spec) {
  for (const auto& t : spec.branches())
    if (t.grows_unbounded()) return false;
  return true;
}

CardinalDim cokernel_dim(const DiagonalSpec& spec) {
  return spec.kernel().plus(spec.shift_offset());
}

SpectralProfile::SpectralProfile(const DiagonalSpec& spec) : intervals_(spec.intervals()) {
  branches_.reserve(spec.branches().size());
  for (const auto& t : spec.branches()) {
    BranchTable bt;
    bt.term = t;
    bt.tail_sign = t.eventual_sign();
    bt.head_sorted.reserve(kHeadWindow);
    for (std::uint64_t n = 1; n <= kHeadWindow; ++n)
      bt.head_sorted.push_back(t.value(static_cast<double>(n)));
    std::sort(bt.head_sorted.begin(), bt.head_sorted.end());
    branches_.push_back(std::move(bt));
  }
  for (const auto& o : spec.overrides())
    override_swaps_.emplace_back(eval_term(spec.branches()[o.branch], o.index), o.value);
}

namespace {

// Number of tail indices n > head window satisfying a predicate that is
// true on an initial segment of the (monotone) tail. Saturates.
template <class Pred>
std::uint64_t tail_prefix_count(const SymTerm& t, Pred pred) {
  const std::uint64_t h = kHeadWindow;
  if (!pred(t.value(static_cast<double>(h + 1)))) return 0;
  std::uint64_t lo = h + 1;
  std::uint64_t probe = 2 * (h + 1);
  while (pred(t.value(static_cast<double>(probe)))) {
    lo = probe;
    if (probe >= kCountSaturation) return kCountSaturation;
    probe *= 2;
  }
  std::uint64_t hi = probe;  // pred true at lo, false at hi
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (pred(t.value(static_cast<double>(mid)))) lo = mid;
    else hi = mid;
  }
  return lo - h;
}

}  // namespace

CountOrInf SpectralProfile::count(double alpha, double beta) const {
  if (!(alpha > 0.0) || !(alpha <= beta) || !std::isfinite(alpha))
    throw std::invalid_argument("counting: need 0 < alpha <= beta");
  for (const auto& iv : intervals_)
    if (iv.lo <= beta && alpha <= iv.hi) return CountOrInf::inf();

  CountOrInf total = CountOrInf::of(0);
  for (const auto& bt : branches_) {
    const auto lo = std::lower_bound(bt.head_sorted.begin(), bt.head_sorted.end(), alpha);
    const auto hi = std::upper_bound(bt.head_sorted.begin(), bt.head_sorted.end(), beta);
    total = total + CountOrInf::of(static_cast<std::uint64_t>(hi - lo));

    const SymTerm& t = bt.term;
    if (bt.tail_sign == 0) {
      const double level = t.value(static_cast<double>(kHeadWindow + 1));
      if (alpha <= level && level <= beta) return CountOrInf::inf();
    } else if (bt.tail_sign < 0) {
      const std::uint64_t ge_alpha =
          tail_prefix_count(t, [&](double v) { return v >= alpha; });
      const std::uint64_t gt_beta = tail_prefix_count(t, [&](double v) { return v > beta; });
      // A saturated prefix means the exact window size is unknown at this
      // precision; propagate the saturation marker instead of a difference.
      if (ge_alpha >= kCountSaturation || gt_beta >= kCountSaturation)
        total = total + CountOrInf::of(kCountSaturation);
      else
        total = total + CountOrInf::of(ge_alpha - gt_beta);
    } else {
      const std::uint64_t le_beta =
          tail_prefix_count(t, [&](double v) { return v <= beta; });
      const std::uint64_t lt_alpha = tail_prefix_count(t, [&](double v) { return v < alpha; });
      if (le_beta >= kCountSaturation || lt_alpha >= kCountSaturation)
        total = total + CountOrInf::of(kCountSaturation);
      else
        total = total + CountOrInf::of(le_beta - lt_alpha);
    }
  }
  if (total.infinite) return total;

  std::int64_t adjust = 0;
  for (const auto& [removed, added] : override_swaps_) {
    if (alpha <= removed && removed <= beta) --adjust;
    if (alpha <= added && added <= beta) ++adjust;
  }
  const std::int64_t v = static_cast<std::int64_t>(total.value) + adjust;
  return CountOrInf::of(v < 0 ? 0 : static_cast<std::uint64_t>(v));
}

CountOrInf counting(const DiagonalSpec& spec, double alpha, double beta) {
  return SpectralProfile(spec).count(alpha, beta);
}

}  // namespace subspaces
