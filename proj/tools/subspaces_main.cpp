#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "subspaces/classify.hpp"
#include "subspaces/config.hpp"
#include "subspaces/diagonal.hpp"
#include "subspaces/finite.hpp"
#include "subspaces/report.hpp"
#include "subspaces/selfcheck.hpp"

namespace {

using namespace subspaces;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUndecided = 2;

struct CommonArgs {
  bool json = false;
  std::optional<std::size_t> budget_n;
  std::optional<int> budget_k;
  std::optional<double> tol;
};

Budgets effective_budgets(const ConfigFile& config, const CommonArgs& common) {
  Budgets b = config.budgets;
  if (common.budget_n) b.mu_terms = *common.budget_n;
  if (common.budget_k) b.k_log2_max = *common.budget_k;
  if (common.tol) b.tol = *common.tol;
  return b;
}

bool is_finite_kind(SystemKind k) {
  return k == SystemKind::FiniteMatrix || k == SystemKind::GraphFinite;
}

FiniteSystem to_finite_system(const SystemConfig& sc) {
  if (sc.kind == SystemKind::GraphFinite) return graph_system(sc.t);
  return make_system(sc.ambient, sc.e1, sc.e2);
}

std::string angles_to_string(const std::vector<double>& angles) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (i) out << ", ";
    out << angles[i];
  }
  out << "]";
  return out.str();
}

Verdict finite_verdict(const FiniteSystem& a, const FiniteSystem& b,
                       const std::string& relation) {
  if (relation == "unitary") {
    const bool iso = classify_unitary_fin(a, b);
    return Verdict{iso ? Relation::UnitarilyIsomorphic : Relation::NotUnitarilyIsomorphic,
                   "FIN-UNI",
                   "five-fold decomposition: part dimensions and the principal-angle "
                   "multiset classify finite systems up to unitary maps",
                   "angles: " + angles_to_string(halmos_decompose(a).generic_angles) + " vs " +
                       angles_to_string(halmos_decompose(b).generic_angles)};
  }
  const DimQuadruple qa = dim_quadruple(a);
  const DimQuadruple qb = dim_quadruple(b);
  const bool iso = relation == "algebraic" ? classify_algebraic_fin(a, b)
                                           : classify_bounded_fin(a, b);
  const auto fmt = [](const DimQuadruple& q) {
    return "(" + std::to_string(q.meet) + "," + std::to_string(q.d1) + "," +
           std::to_string(q.d2) + "," + std::to_string(q.coker) + ")";
  };
  const Relation rel =
      relation == "algebraic"
          ? (iso ? Relation::AlgebraicallyIsomorphic : Relation::NotAlgebraicallyIsomorphic)
          : (iso ? Relation::BoundedlyIsomorphic : Relation::NotBoundedlyIsomorphic);
  return Verdict{rel, relation == "algebraic" ? "FIN-ALG" : "FIN-BND",
                 "finite dimension: the four dimension invariants (meet, two relative "
                 "dimensions, codimension of the sum) decide both algebraic and bounded "
                 "isomorphism",
                 "dimension quadruples " + fmt(qa) + " vs " + fmt(qb)};
}

int emit(const Report& report, bool json) {
  std::cout << (json ? render_json(report) : render_text(report));
  return kExitOk;
}

int run_classify(const std::string& config_path, const std::string& id1,
                 const std::string& id2, const std::string& relation,
                 const CommonArgs& common) {
  const ConfigFile config = load_config(config_path);
  const SystemConfig& a = find_system(config, id1);
  const SystemConfig& b = find_system(config, id2);
  const Budgets budgets = effective_budgets(config, common);

  if (is_finite_kind(a.kind) != is_finite_kind(b.kind))
    throw std::runtime_error("classify: kinds are not comparable (finite vs diagonal)");

  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.command = "classify";
  report.ids = {id1, id2};
  report.relation = relation;

  if (is_finite_kind(a.kind)) {
    report.verdict = finite_verdict(to_finite_system(a), to_finite_system(b), relation);
  } else {
    if (relation == "bounded")
      report.verdict = classify_bounded_graph(a.spec, b.spec, budgets);
    else if (relation == "algebraic")
      report.verdict = classify_algebraic_graph(a.spec, b.spec);
    else
      throw std::runtime_error(
          "classify: unitary classification is implemented for finite kinds only");
  }
  report.timing_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  emit(report, common.json);
  return is_decided(report.verdict->relation) ? kExitOk : kExitUndecided;
}

int run_invariants(const std::string& config_path, const std::string& id,
                   const CommonArgs& common) {
  const ConfigFile config = load_config(config_path);
  const SystemConfig& sc = find_system(config, id);

  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.command = "invariants";
  report.ids = {id};

  if (is_finite_kind(sc.kind)) {
    const FiniteSystem sys = to_finite_system(sc);
    const DimQuadruple q = dim_quadruple(sys);
    const HalmosParts parts = halmos_decompose(sys);
    report.rows.emplace_back("kind", to_string(sc.kind));
    report.rows.emplace_back("ambient", std::to_string(sys.ambient));
    report.rows.emplace_back("dim E1", std::to_string(sys.e1.cols()));
    report.rows.emplace_back("dim E2", std::to_string(sys.e2.cols()));
    report.rows.emplace_back("dim E1^E2 (meet)", std::to_string(q.meet));
    report.rows.emplace_back("dim E1/meet", std::to_string(q.d1));
    report.rows.emplace_back("dim E2/meet", std::to_string(q.d2));
    report.rows.emplace_back("codim E1+E2", std::to_string(q.coker));
    report.rows.emplace_back(
        "part dims (mm,mp,pm,pp)",
        "(" + std::to_string(parts.mm.cols()) + "," + std::to_string(parts.mp.cols()) + "," +
            std::to_string(parts.pm.cols()) + "," + std::to_string(parts.pp.cols()) + ")");
    report.rows.emplace_back("generic angles", angles_to_string(parts.generic_angles));
  } else {
    const DiagonalSpec& spec = sc.spec;
    const double sh = sh_exponent(spec);
    report.rows.emplace_back("kind", to_string(sc.kind));
    report.rows.emplace_back("branches", std::to_string(spec.branches().size()));
    report.rows.emplace_back("compact", compact_type(spec) ? "yes" : "no");
    report.rows.emplace_back("Sh", std::isinf(sh) ? "inf" : csv_double(sh));
    report.rows.emplace_back("range closed", range_closed(spec) ? "yes" : "no");
    report.rows.emplace_back("E1+E2 closed", sum_closed_graph(spec) ? "yes" : "no");
    report.rows.emplace_back("domain total", domain_total(spec) ? "yes" : "no");
    report.rows.emplace_back("dim ker", to_string(spec.kernel()));
    report.rows.emplace_back("closure codim of range", to_string(cokernel_dim(spec)));
    if (compact_type(spec)) {
      const auto mu = mu_sequence(spec, 5);
      std::string head;
      for (std::size_t i = 0; i < mu.size(); ++i)
        head += (i ? ", " : "") + std::string(csv_double(mu[i]));
      report.rows.emplace_back("mu head", head);
    }
  }
  report.timing_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return emit(report, common.json);
}

int run_witness(const std::string& config_path, const std::string& id1,
                const std::string& id2, const std::string& out_path,
                const CommonArgs& common) {
  const ConfigFile config = load_config(config_path);
  const SystemConfig& a = find_system(config, id1);
  const SystemConfig& b = find_system(config, id2);
  if (a.kind != SystemKind::GraphFinite || b.kind != SystemKind::GraphFinite)
    throw std::runtime_error("witness: construction is defined for graph-finite systems");

  const Budgets budgets = effective_budgets(config, common);
  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.command = "witness";
  report.ids = {id1, id2};
  const auto w = witness_graph_bounded(a.t, b.t, budgets.tol);
  if (w) {
    report.verdict = Verdict{Relation::BoundedlyIsomorphic, "R-WITNESS",
                             "block-diagonal map built from both singular decompositions "
                             "carries one graph onto the other",
                             "residual and condition reported below"};
    report.witness = *w;
    report.include_witness_matrix = common.json;
  } else {
    report.verdict = Verdict{Relation::NotBoundedlyIsomorphic, "R-NO-WITNESS",
                             "no witness: the rank (nullity/corank) invariant differs, or "
                             "the construction exceeded the condition cap",
                             "equal ranks are necessary for a bounded graph isomorphism"};
  }
  report.timing_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  emit(report, common.json);
  if (w) {
    const std::string csv = witness_csv(w->map);
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("witness: cannot write '" + out_path + "'");
      out << csv;
    } else if (!common.json) {
      std::cout << csv;
    }
  }
  return kExitOk;
}

int run_mu_csv(const std::string& config_path, const std::string& id, std::size_t n,
               const std::string& versus, const std::string& out_path,
               const CommonArgs& common) {
  (void)common;
  const ConfigFile config = load_config(config_path);
  const SystemConfig& sc = find_system(config, id);
  if (sc.kind != SystemKind::GraphDiagonal || !compact_type(sc.spec))
    throw std::runtime_error("mu-csv: requires a compact graph-diagonal system");
  const auto mu = mu_sequence(sc.spec, n);

  std::vector<double> ratio;
  if (!versus.empty()) {
    const SystemConfig& other = find_system(config, versus);
    if (other.kind != SystemKind::GraphDiagonal || !compact_type(other.spec))
      throw std::runtime_error("mu-csv: --versus requires a compact graph-diagonal system");
    const auto mu2 = mu_sequence(other.spec, n);
    ratio.resize(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) ratio[i] = mu[i] / mu2[i];
  }

  std::ostringstream csv;
  csv << (ratio.empty() ? "n,mu" : "n,mu,ratio") << '\n';
  for (std::size_t i = 0; i < mu.size(); ++i) {
    csv << (i + 1) << ',' << csv_double(mu[i]);
    if (!ratio.empty()) csv << ',' << csv_double(ratio[i]);
    csv << '\n';
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("mu-csv: cannot write '" + out_path + "'");
    out << csv.str();
  } else {
    std::cout << csv.str();
  }
  return kExitOk;
}

int run_selftest(const CommonArgs& common, std::optional<int> budget_k,
                 std::optional<std::size_t> budget_n) {
  Budgets budgets;
  if (budget_n) budgets.mu_terms = *budget_n;
  if (budget_k) budgets.k_log2_max = *budget_k;
  const auto results = run_selfcheck(budgets);
  if (common.json) {
    std::cout << selfcheck_json(results);
  } else {
    for (const auto& r : results)
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.name
                << (r.detail.empty() ? "" : "  -- " + r.detail) << '\n';
    std::cout << (all_passed(results) ? "all checks passed\n" : "some checks FAILED\n");
  }
  return all_passed(results) ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subspaces: classifiers for systems of two subspaces in a Hilbert space"};
  app.require_subcommand(1);

  CommonArgs common;
  app.add_flag("--json", common.json, "emit machine-readable JSON reports");

  std::string config_path, id1, id2, out_path, versus;
  std::string relation = "bounded";
  std::size_t mu_n = 100;
  std::optional<std::size_t> budget_n;
  std::optional<int> budget_k;
  std::optional<double> tol;

  const auto add_budget_flags = [&](CLI::App* cmd) {
    cmd->fallthrough();  // lets --json appear after the subcommand as well
    cmd->add_option("--budget-N", budget_n, "mu-sequence merge window");
    cmd->add_option("--budget-K", budget_k, "log2 of the largest dilation constant searched");
    cmd->add_option("--tol", tol, "witness verification tolerance");
  };

  CLI::App* classify = app.add_subcommand("classify", "classify a pair of systems");
  classify->add_option("config", config_path)->required();
  classify->add_option("id1", id1)->required();
  classify->add_option("id2", id2)->required();
  classify->add_option("--relation", relation, "unitary | bounded | algebraic")
      ->check(CLI::IsMember({"unitary", "bounded", "algebraic"}));
  add_budget_flags(classify);

  CLI::App* invariants = app.add_subcommand("invariants", "print all computable invariants");
  invariants->add_option("config", config_path)->required();
  invariants->add_option("id", id1)->required();
  add_budget_flags(invariants);

  CLI::App* witness = app.add_subcommand("witness", "construct an explicit isomorphism witness");
  witness->add_option("config", config_path)->required();
  witness->add_option("id1", id1)->required();
  witness->add_option("id2", id2)->required();
  witness->add_option("--out", out_path, "write the witness matrix CSV here");
  add_budget_flags(witness);

  CLI::App* mucsv = app.add_subcommand("mu-csv", "dump the mu-sequence as CSV");
  mucsv->fallthrough();
  mucsv->add_option("config", config_path)->required();
  mucsv->add_option("id", id1)->required();
  mucsv->add_option("N", mu_n, "number of rows")->required();
  mucsv->add_option("--versus", versus, "second id for a ratio column");
  mucsv->add_option("--out", out_path, "write the CSV here");

  CLI::App* selftest = app.add_subcommand("selftest", "run the built-in verification table");
  add_budget_flags(selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  common.budget_n = budget_n;
  common.budget_k = budget_k;
  common.tol = tol;

  try {
    if (app.got_subcommand(classify))
      return run_classify(config_path, id1, id2, relation, common);
    if (app.got_subcommand(invariants)) return run_invariants(config_path, id1, common);
    if (app.got_subcommand(witness))
      return run_witness(config_path, id1, id2, out_path, common);
    if (app.got_subcommand(mucsv))
      return run_mu_csv(config_path, id1, mu_n, versus, out_path, common);
    if (app.got_subcommand(selftest)) return run_selftest(common, budget_k, budget_n);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
