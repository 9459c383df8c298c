#include "subspaces/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"
#include "subspaces/config.hpp"
#include "subspaces/diagonal.hpp"
#include "subspaces/finite.hpp"
#include "subspaces/linalg.hpp"
#include "subspaces/report.hpp"

namespace subspaces {

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = gauss(rng);
  return m;
}

Matrix random_orthogonal(std::size_t n, std::mt19937_64& rng) {
  return orth_basis(random_matrix(n, n, rng));
}

Matrix random_invertible(std::size_t n, double max_cond, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = std::exp(unit(rng) * std::log(max_cond));
  return random_orthogonal(n, rng) * Matrix::diagonal(d) * random_orthogonal(n, rng);
}

struct Suite {
  std::vector<CheckResult> results;
  void add(const std::string& name, bool pass, std::string detail = "") {
    results.push_back({name, pass, std::move(detail)});
  }
  template <class Fn>
  void guarded(const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      add(name, false, std::string("exception: ") + e.what());
    }
  }
};

const DiagonalSpec& spec_of(const ConfigFile& cat, const std::string& id) {
  return find_system(cat, id).spec;
}

// ---------------------------------------------------------------------------
// Reference verdict table.

void check_reference_verdicts(Suite& s, const ConfigFile& cat, const Budgets& budgets) {
  s.guarded("verdict-finite-graphs", [&] {
    const FiniteSystem a = graph_system(find_system(cat, "fin-diag-1-half").t);
    const FiniteSystem b = graph_system(find_system(cat, "fin-diag-1-third").t);
    const bool bounded = classify_bounded_fin(a, b);
    const bool unitary = classify_unitary_fin(a, b);
    s.add("verdict-finite-graphs", bounded && !unitary,
          bounded ? (unitary ? "unexpectedly unitary" : "boundedly yes, unitarily no")
                  : "bounded classification failed");
  });

  const auto expect = [&](const std::string& name, const std::string& id1,
                          const std::string& id2, Relation want, const char* rule) {
    s.guarded(name, [&] {
      const Verdict v = classify_bounded_graph(spec_of(cat, id1), spec_of(cat, id2), budgets);
      const bool ok = v.relation == want && (rule == nullptr || v.rule_id == rule);
      s.add(name, ok,
            ok ? v.rule_id + ": " + v.detail
               : "got " + std::string(to_string(v.relation)) + " via " + v.rule_id +
                     " (" + v.detail + ")");
    });
  };

  expect("verdict-closed-sum", "sin-inv-n", "const-2", Relation::NotBoundedlyIsomorphic, "R3");
  expect("verdict-equal-sh-not-iso", "inv-n", "inv-n-log-n", Relation::NotBoundedlyIsomorphic,
         "R5");
  s.guarded("verdict-equal-sh-not-iso-detail", [&] {
    const Verdict v = classify_bounded_graph(spec_of(cat, "inv-n"), spec_of(cat, "inv-n-log-n"),
                                             budgets);
    const bool sh_ok = sh_exponent(spec_of(cat, "inv-n")) == 1.0 &&
                       sh_exponent(spec_of(cat, "inv-n-log-n")) == 1.0 &&
                       v.detail.find("Sh") != std::string::npos;
    s.add("verdict-equal-sh-not-iso-detail", sh_ok, v.detail);
  });

  s.guarded("verdict-algebraic-vs-bounded", [&] {
    const Verdict alg = classify_algebraic_graph(spec_of(cat, "inv-n"), spec_of(cat, "inv-n2"));
    const Verdict bnd = classify_bounded_graph(spec_of(cat, "inv-n"), spec_of(cat, "inv-n2"),
                                               budgets);
    const bool ok = alg.relation == Relation::AlgebraicallyIsomorphic &&
                    bnd.relation == Relation::NotBoundedlyIsomorphic && bnd.rule_id == "R5";
    s.add("verdict-algebraic-vs-bounded", ok,
          std::string(to_string(alg.relation)) + " and " + to_string(bnd.relation) + " via " +
              bnd.rule_id);
  });

  expect("verdict-shift-cokernel", "shift-inv-n", "inv-n", Relation::NotBoundedlyIsomorphic,
         "R2");
  expect("verdict-closed-range-pair", "squares", "const-2", Relation::BoundedlyIsomorphic, "R4");
  expect("verdict-direct-sum-closed", "squares-plus-inv-squares", "const2-plus-inv-squares",
         Relation::BoundedlyIsomorphic, "R5");
  expect("verdict-counting-powers", "squares-plus-inv-squares", "cubes-plus-inv-cubes",
         Relation::NotBoundedlyIsomorphic, "R7");
  expect("verdict-counting-intervals", "interval23-plus-inv-squares",
         "interval23-plus-inv-cubes", Relation::NotBoundedlyIsomorphic, "R7");
  expect("verdict-power-family-12", "inv-n", "inv-n2", Relation::NotBoundedlyIsomorphic, "R5");
  expect("verdict-power-family-23", "inv-n2", "inv-n3", Relation::NotBoundedlyIsomorphic, "R5");
}

// ---------------------------------------------------------------------------
// Witness round trips, rank-mismatch refusals.

void check_witness_roundtrip(Suite& s, std::vector<FiniteSystem>* pool) {
  s.guarded("witness-roundtrip", [&] {
    std::mt19937_64 rng(20240301);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    int failures = 0;
    std::string first_failure;
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t k1 = dim(rng), k2 = dim(rng);
      const Matrix t = random_matrix(k2, k1, rng);
      const Matrix l = random_invertible(k2, 20.0, rng);
      const Matrix m = random_invertible(k1, 20.0, rng);
      const Matrix t2 = l * t * m;
      const auto w = witness_graph_bounded(t, t2);
      const double scale = 1.0 + operator_norm(t) + operator_norm(t2);
      const bool ok = w.has_value() && w->operator_residual <= 1e-8 * scale &&
                      w->frame_residuals[0] <= 1e-8 && w->frame_residuals[1] <= 1e-8 &&
                      std::isfinite(w->condition) && quiver_iso_a2(t, t2) &&
                      classify_bounded_fin(graph_system(t), graph_system(t2));
      if (!ok && ++failures == 1)
        first_failure = "trial " + std::to_string(trial) +
                        (w ? " residual " + std::to_string(w->operator_residual) : " no witness");
      if (trial < 10) {
        pool->push_back(graph_system(t));
        pool->push_back(graph_system(t2));
      }
    }
    s.add("witness-roundtrip", failures == 0,
          failures == 0 ? "200/200 witnesses verified" : first_failure);
  });

  s.guarded("witness-rank-refusal", [&] {
    std::mt19937_64 rng(20240302);
    std::uniform_int_distribution<std::size_t> dim(2, 8);
    int failures = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t k1 = dim(rng), k2 = dim(rng);
      const std::size_t cap = std::min(k1, k2);
      std::uniform_int_distribution<std::size_t> rk(0, cap);
      std::size_t r1 = rk(rng), r2 = rk(rng);
      if (r1 == r2) r2 = (r2 + 1) % (cap + 1);
      const auto make_rank = [&](std::size_t r) {
        if (r == 0) return Matrix(k2, k1);
        return random_matrix(k2, r, rng) * random_matrix(r, k1, rng);
      };
      const Matrix t = make_rank(r1);
      const Matrix t2 = make_rank(r2);
      if (witness_graph_bounded(t, t2).has_value() || quiver_iso_a2(t, t2)) ++failures;
    }
    s.add("witness-rank-refusal", failures == 0,
          failures == 0 ? "200/200 mismatched pairs refused"
                        : std::to_string(failures) + " pairs wrongly accepted");
  });
}

// ---------------------------------------------------------------------------
// Five-fold decomposition recovery.

FiniteSystem assemble_from_parts(std::size_t dmm, std::size_t dmp, std::size_t dpm,
                                 std::size_t dpp, const std::vector<double>& angles,
                                 std::mt19937_64& rng) {
  const std::size_t g = angles.size();
  const std::size_t ambient = dmm + dmp + dpm + dpp + 2 * g;
  Matrix e1(ambient, dmm + dmp + g);
  Matrix e2(ambient, dmm + dpm + g);
  std::size_t axis = 0, c1 = 0, c2 = 0;
  for (std::size_t i = 0; i < dmm; ++i, ++axis) {
    e1(axis, c1++) = 1.0;
    e2(axis, c2++) = 1.0;
  }
  for (std::size_t i = 0; i < dmp; ++i, ++axis) e1(axis, c1++) = 1.0;
  for (std::size_t i = 0; i < dpm; ++i, ++axis) e2(axis, c2++) = 1.0;
  axis += dpp;
  for (std::size_t i = 0; i < g; ++i) {
    e1(axis, c1++) = 1.0;
    e2(axis, c2) = std::cos(angles[i]);
    e2(axis + 1, c2++) = std::sin(angles[i]);
    axis += 2;
  }
  const Matrix q = random_orthogonal(ambient, rng);
  return FiniteSystem{ambient, orth_basis(q * e1), orth_basis(q * e2)};
}

void check_halmos_recovery(Suite& s, std::vector<FiniteSystem>* pool) {
  s.guarded("halmos-recovery", [&] {
    std::mt19937_64 rng(20240303);
    std::uniform_int_distribution<std::size_t> amb_dist(8, 16);
    std::uniform_real_distribution<double> angle_dist(0.05, 1.5207);
    int failures = 0;
    std::string note;
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t ambient = amb_dist(rng);
      std::uniform_int_distribution<std::size_t> gd(0, ambient / 2);
      const std::size_t g = gd(rng);
      std::size_t rest = ambient - 2 * g;
      std::array<std::size_t, 4> dims{};
      for (int k = 0; k < 3; ++k) {
        std::uniform_int_distribution<std::size_t> part(0, rest);
        dims[k] = part(rng);
        rest -= dims[k];
      }
      dims[3] = rest;
      std::vector<double> angles(g);
      for (auto& a : angles) a = angle_dist(rng);
      std::sort(angles.begin(), angles.end());

      const FiniteSystem sys =
          assemble_from_parts(dims[0], dims[1], dims[2], dims[3], angles, rng);
      const HalmosParts parts = halmos_decompose(sys);
      bool ok = parts.mm.cols() == dims[0] && parts.mp.cols() == dims[1] &&
                parts.pm.cols() == dims[2] && parts.pp.cols() == dims[3] &&
                parts.generic_angles.size() == g;
      if (ok)
        for (std::size_t i = 0; i < g; ++i)
          ok = ok && std::fabs(parts.generic_angles[i] - angles[i]) <= 1e-8;
      if (ok) {
        const Matrix corners =
            hcat(hcat(parts.mm, parts.mp), hcat(parts.pm, parts.pp));
        const std::size_t d = corners.cols();
        ok = (corners.transposed() * corners - Matrix::identity(d)).max_abs() <= 1e-9 &&
             d + 2 * parts.generic_angles.size() == ambient;
      }
      if (!ok && ++failures == 1) note = "trial " + std::to_string(trial);
      if (trial < 20) pool->push_back(sys);
    }
    s.add("halmos-recovery", failures == 0,
          failures == 0 ? "100/100 systems recovered exactly" : note);
  });
}

void check_unitary_refines_bounded(Suite& s, const std::vector<FiniteSystem>& pool) {
  s.guarded("unitary-refines-bounded", [&] {
    int violations = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        if (classify_unitary_fin(pool[i], pool[j]) && !classify_bounded_fin(pool[i], pool[j]))
          ++violations;
      }
    }
    s.add("unitary-refines-bounded", violations == 0,
          std::to_string(pool.size()) + " systems, " +
              std::to_string(pool.size() * (pool.size() - 1) / 2) + " pairs checked");
  });
}

// ---------------------------------------------------------------------------
// Schatten exponents: exact values, boundary membership, numeric oracle.

double log_value_at_exp(const SymTerm& t, double u) {
  const double damp = std::exp(-std::min(u, 700.0));
  const double log_xa = u + std::log1p(t.a * damp);
  const double log_xb = u + std::log1p(t.b * damp);
  return std::log(t.c) + t.p * log_xa + t.q * std::log(log_xb);
}

// Independent convergence probe: partial sum plus trapezoid integral tail in
// u = log x coordinates; divergence is called when the mass passes the cap.
bool oracle_converges(const std::vector<SymTerm>& branches, double alpha, std::uint64_t n0) {
  constexpr double kCap = 1e8;
  for (const auto& t : branches) {
    double sum = 0.0;
    for (std::uint64_t n = 1; n <= n0; ++n) {
      sum += std::pow(eval_term(t, n), alpha);
      if (sum > kCap) return false;
    }
    const double u0 = std::log(static_cast<double>(n0));
    const double du = 0.1;
    double prev = std::exp(alpha * log_value_at_exp(t, u0) + u0);
    for (double u = u0 + du; u <= 20000.0; u += du) {
      const double cur = std::exp(alpha * log_value_at_exp(t, u) + u);
      sum += 0.5 * (prev + cur) * du;
      prev = cur;
      if (sum > kCap) return false;
    }
  }
  return true;
}

double oracle_sh(const std::vector<SymTerm>& branches) {
  for (const auto& t : branches)
    if (!t.decays_to_zero()) return kInf;  // terms do not vanish: no alpha converges
  double lo = 1e-3, hi = 256.0;
  if (!oracle_converges(branches, hi, 100000)) return kInf;
  if (oracle_converges(branches, lo, 100000)) return lo;
  while (hi - lo > 2e-3) {
    const double mid = 0.5 * (lo + hi);
    if (oracle_converges(branches, mid, 100000)) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

void check_schatten(Suite& s, const ConfigFile& cat) {
  s.guarded("schatten-exponents", [&] {
    bool ok = true;
    std::string note;
    for (double power : {0.5, 1.0, 2.0, 3.0}) {
      const DiagonalSpec spec({SymTerm{1.0, 0.0, -power, 1.0, 0.0}});
      const double sh = sh_exponent(spec);
      if (sh != 1.0 / power) {
        ok = false;
        note += "Sh(1/n^" + std::to_string(power) + ") != 1/s; ";
      }
      const double above = 1.0 / power + 0.1;
      const double below = std::max(1.0 / power - 0.1, 0.5 / power);
      if (!schatten_member(spec, above) || schatten_member(spec, below)) {
        ok = false;
        note += "boundary behaviour wrong at s=" + std::to_string(power) + "; ";
      }
    }
    s.add("schatten-exponents", ok, ok ? "Sh(1/n^s) = 1/s for s in {1/2,1,2,3}" : note);
  });

  s.guarded("schatten-log-bracket", [&] {
    const SymTerm log_term{1.0, 1.0, -1.0, 1.0, -1.0};
    const bool above = oracle_converges({log_term}, 1.01, 10000000);
    const bool below = oracle_converges({log_term}, 0.99, 10000000);
    s.add("schatten-log-bracket", above && !below,
          "partial sums to 1e7 with integral tails bracket the infimum inside [0.99, 1.01]");
  });

  s.guarded("schatten-oracle", [&] {
    bool ok = true;
    std::string note;
    for (const auto& sc : cat.systems) {
      if (sc.kind != SystemKind::GraphDiagonal) continue;
      const double symbolic = sh_exponent(sc.spec);
      if (!sc.spec.intervals().empty()) continue;  // oracle covers discrete diagonals
      const double numeric = oracle_sh(sc.spec.branches());
      const bool agree = (std::isinf(symbolic) && std::isinf(numeric)) ||
                         std::fabs(symbolic - numeric) <= 0.01;
      if (!agree) {
        ok = false;
        note += sc.id + ": symbolic " + std::to_string(symbolic) + " vs numeric " +
                std::to_string(numeric) + "; ";
      }
    }
    s.add("schatten-oracle", ok, ok ? "symbolic and numeric exponents agree to 0.01" : note);
  });
}

// ---------------------------------------------------------------------------
// Counting vs mu-sequence consistency on random compact specs.

DiagonalSpec random_compact_spec(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nb(1, 3);
  std::uniform_real_distribution<double> pd(-3.0, -0.4);
  std::uniform_int_distribution<int> qd(-2, 2);
  std::uniform_real_distribution<double> logc(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> ad(0.0, 5.0);
  std::uniform_real_distribution<double> bd(1.0, 10.0);
  std::vector<SymTerm> branches;
  const int count = nb(rng);
  for (int i = 0; i < count; ++i)
    branches.push_back(SymTerm{std::exp(logc(rng)), ad(rng), pd(rng), bd(rng),
                               static_cast<double>(qd(rng))});
  std::uniform_int_distribution<int> no(0, 2);
  std::uniform_int_distribution<std::uint64_t> oidx(1, 100);
  std::uniform_real_distribution<double> oval(std::log(1e-3), std::log(10.0));
  std::vector<Override> overrides;
  const int oc = no(rng);
  for (int i = 0; i < oc; ++i) {
    const Override o{static_cast<std::size_t>(std::uniform_int_distribution<int>(
                         0, count - 1)(rng)),
                     oidx(rng), std::exp(oval(rng))};
    bool dup = false;
    for (const auto& prev : overrides)
      dup = dup || (prev.branch == o.branch && prev.index == o.index);
    if (!dup) overrides.push_back(o);
  }
  return DiagonalSpec(std::move(branches), std::move(overrides));
}

void check_counting_mu(Suite& s) {
  s.guarded("counting-mu-consistency", [&] {
    std::mt19937_64 rng(20240304);
    int failures = 0;
    std::string note;
    for (int trial = 0; trial < 50; ++trial) {
      const DiagonalSpec spec = random_compact_spec(rng);
      const auto mu = mu_sequence(spec, 3000);
      // Cell boundaries strictly between adjacent distinct values in the
      // leading segment, so window counts are unambiguous.
      std::vector<double> cuts;
      for (std::size_t i = 0; i + 1 < 2000 && cuts.size() < 9; i += 211) {
        std::size_t j = i + 1;
        while (j < 2000 && mu[j] == mu[i]) ++j;
        if (j < 2000) cuts.push_back(std::sqrt(mu[i] * mu[j]));
      }
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double alpha = cuts[k], beta = cuts[k + 1];
        std::uint64_t expected = 0;
        for (double v : mu)
          if (alpha <= v && v <= beta) ++expected;
        const CountOrInf got = counting(spec, alpha, beta);
        if (got.infinite || got.value != expected) {
          if (++failures == 1)
            note = "trial " + std::to_string(trial) + ": window [" + std::to_string(alpha) +
                   ", " + std::to_string(beta) + "] expected " + std::to_string(expected) +
                   " got " + to_string(got);
        }
      }
    }
    s.add("counting-mu-consistency", failures == 0,
          failures == 0 ? "50 random compact specs, exact agreement" : note);
  });
}

// ---------------------------------------------------------------------------
// Finite truncations confirm the infinite-dimensional isomorphism verdicts.

void check_truncation_soundness(Suite& s, const ConfigFile& cat, const Budgets& budgets) {
  s.guarded("finite-truncation-soundness", [&] {
    const std::vector<std::pair<std::string, std::string>> iso_pairs = {
        {"squares", "const-2"},
        {"squares-plus-inv-squares", "const2-plus-inv-squares"},
    };
    bool ok = true;
    std::string note;
    for (const auto& [id1, id2] : iso_pairs) {
      const Verdict v = classify_bounded_graph(spec_of(cat, id1), spec_of(cat, id2), budgets);
      if (v.relation != Relation::BoundedlyIsomorphic) {
        ok = false;
        note += id1 + " vs " + id2 + " not isomorphic at infinite level; ";
        continue;
      }
      for (std::size_t n : {std::size_t{8}, std::size_t{32}, std::size_t{128}}) {
        const FiniteSystem fa = graph_system(finite_truncation(spec_of(cat, id1), n));
        const FiniteSystem fb = graph_system(finite_truncation(spec_of(cat, id2), n));
        if (!classify_bounded_fin(fa, fb)) {
          ok = false;
          note += id1 + " vs " + id2 + " fails at N=" + std::to_string(n) + "; ";
        }
      }
    }
    // The algebraic separation pair truncates consistently as well.
    if (classify_algebraic_graph(spec_of(cat, "inv-n"), spec_of(cat, "inv-n2")).relation ==
        Relation::AlgebraicallyIsomorphic) {
      for (std::size_t n : {std::size_t{8}, std::size_t{32}, std::size_t{128}}) {
        const FiniteSystem fa = graph_system(finite_truncation(spec_of(cat, "inv-n"), n));
        const FiniteSystem fb = graph_system(finite_truncation(spec_of(cat, "inv-n2"), n));
        if (!classify_algebraic_fin(fa, fb)) {
          ok = false;
          note += "algebraic pair fails at N=" + std::to_string(n) + "; ";
        }
      }
    }
    s.add("finite-truncation-soundness", ok,
          ok ? "isomorphic verdicts confirmed at N in {8, 32, 128}" : note);
  });
}

// ---------------------------------------------------------------------------
// Determinism of the rendered verdict reports.

std::string verdict_table_json(const ConfigFile& cat, const Budgets& budgets) {
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"sin-inv-n", "const-2"},        {"inv-n", "inv-n-log-n"},
      {"inv-n", "inv-n2"},             {"shift-inv-n", "inv-n"},
      {"squares", "const-2"},          {"squares-plus-inv-squares", "const2-plus-inv-squares"},
      {"squares-plus-inv-squares", "cubes-plus-inv-cubes"},
      {"interval23-plus-inv-squares", "interval23-plus-inv-cubes"},
      {"inv-n2", "inv-n3"},
  };
  std::string out;
  for (const auto& [a, b] : pairs) {
    Report r;
    r.command = "classify";
    r.ids = {a, b};
    r.relation = "bounded";
    r.verdict = classify_bounded_graph(spec_of(cat, a), spec_of(cat, b), budgets);
    r.timing_ms = 0.0;
    out += render_json(r);
  }
  return out;
}

void check_determinism(Suite& s, const ConfigFile& cat, const Budgets& budgets) {
  s.guarded("report-determinism", [&] {
    const std::string first = verdict_table_json(cat, budgets);
    const std::string second = verdict_table_json(cat, budgets);
    s.add("report-determinism", first == second,
          first == second ? "two runs render byte-identical reports"
                          : "renders differ between runs");
  });
}

// ---------------------------------------------------------------------------
// Development-derived checks: rule masking and budget sensitivity.

void check_engine_sensitivity(Suite& s, const ConfigFile& cat, const Budgets& budgets) {
  s.guarded("rule-mask-mutation", [&] {
    Budgets masked = budgets;
    masked.disable_rules = 1u << 4;  // R5 off
    const Verdict v = classify_bounded_graph(spec_of(cat, "inv-n"), spec_of(cat, "inv-n2"),
                                             masked);
    s.add("rule-mask-mutation", v.rule_id != "R5",
          "with R5 masked the verdict re-routes to " + v.rule_id +
              ", so the pinned-rule checks detect the mutation");
  });

  s.guarded("budget-sensitivity", [&] {
    Budgets tiny = budgets;
    tiny.k_log2_max = 1;
    const Verdict shallow = classify_bounded_graph(spec_of(cat, "squares-plus-inv-squares"),
                                                   spec_of(cat, "cubes-plus-inv-cubes"), tiny);
    const Verdict full = classify_bounded_graph(spec_of(cat, "squares-plus-inv-squares"),
                                                spec_of(cat, "cubes-plus-inv-cubes"), budgets);
    const bool ok = shallow.relation == Relation::Undecided &&
                    full.relation == Relation::NotBoundedlyIsomorphic;
    s.add("budget-sensitivity", ok,
          "K <= 2 ladder is too shallow to certify the counting obstruction: " +
              std::string(to_string(shallow.relation)) + " vs " + to_string(full.relation));
  });
}

}  // namespace

std::vector<CheckResult> run_selfcheck(const Budgets& budgets) {
  Suite s;
  const ConfigFile cat = builtin_systems();
  std::vector<FiniteSystem> pool;
  pool.push_back(graph_system(find_system(cat, "fin-diag-1-half").t));
  pool.push_back(graph_system(find_system(cat, "fin-diag-1-third").t));

  check_reference_verdicts(s, cat, budgets);
  check_witness_roundtrip(s, &pool);
  check_halmos_recovery(s, &pool);
  check_unitary_refines_bounded(s, pool);
  check_schatten(s, cat);
  check_counting_mu(s);
  check_truncation_soundness(s, cat, budgets);
  check_determinism(s, cat, budgets);
  check_engine_sensitivity(s, cat, budgets);
  return s.results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

std::string selfcheck_json(const std::vector<CheckResult>& results) {
  nlohmann::ordered_json j;
  j["command"] = "selftest";
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& r : results)
    j["checks"].push_back(nlohmann::ordered_json{
        {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  j["all_passed"] = all_passed(results);
  return j.dump(2) + "\n";
}

}  // namespace subspaces
