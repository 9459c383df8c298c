#include "subspaces/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace subspaces {

using ordered_json = nlohmann::ordered_json;

const char* to_string(SystemKind k) {
  switch (k) {
    case SystemKind::FiniteMatrix: return "finite-matrix";
    case SystemKind::GraphFinite: return "graph-finite";
    case SystemKind::GraphDiagonal: return "graph-diagonal";
  }
  return "graph-diagonal";
}

namespace {

SystemKind kind_from_string(const std::string& s) {
  if (s == "finite-matrix") return SystemKind::FiniteMatrix;
  if (s == "graph-finite") return SystemKind::GraphFinite;
  if (s == "graph-diagonal") return SystemKind::GraphDiagonal;
  throw std::runtime_error("config: unknown system kind '" + s + "'");
}

// Vectors are stored in JSON as rows; internally frames are column matrices.
Matrix vectors_to_columns(const ordered_json& rows, std::size_t ambient) {
  if (rows.empty()) return Matrix(ambient, 0);
  const std::size_t dim = rows.front().size();
  Matrix m(dim, rows.size());
  std::size_t j = 0;
  for (const auto& row : rows) {
    if (row.size() != dim) throw std::runtime_error("config: ragged vector list");
    for (std::size_t i = 0; i < dim; ++i) m(i, j) = row.at(i).get<double>();
    ++j;
  }
  return m;
}

ordered_json columns_to_vectors(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t j = 0; j < m.cols(); ++j) {
    ordered_json row = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix json_to_matrix(const ordered_json& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  Matrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw std::runtime_error("config: ragged matrix");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = row.at(j).get<double>();
    ++i;
  }
  return m;
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

DiagonalSpec json_to_spec(const ordered_json& j) {
  std::vector<SymTerm> branches;
  for (const auto& bj : j.value("branches", ordered_json::array())) {
    SymTerm t;
    t.c = bj.value("c", 1.0);
    t.a = bj.value("a", 0.0);
    t.p = bj.value("p", 0.0);
    t.b = bj.value("b", 1.0);
    t.q = bj.value("q", 0.0);
    branches.push_back(t);
  }
  std::vector<Override> overrides;
  for (const auto& oj : j.value("overrides", ordered_json::array())) {
    overrides.push_back({oj.at("branch").get<std::size_t>(),
                         oj.at("index").get<std::uint64_t>(),
                         oj.at("value").get<double>()});
  }
  const std::size_t offset = j.value("shift_offset", std::size_t{0});
  CardinalDim kernel = CardinalDim::finite(0);
  if (j.contains("kernel_dim")) {
    const auto& kj = j.at("kernel_dim");
    if (kj.is_string()) {
      if (kj.get<std::string>() != "continuum")
        throw std::runtime_error("config: kernel_dim must be a count or \"continuum\"");
      kernel = CardinalDim::make_continuum();
    } else {
      kernel = CardinalDim::finite(kj.get<std::uint64_t>());
    }
  }
  std::vector<Interval> intervals;
  for (const auto& ij : j.value("interval_parts", ordered_json::array()))
    intervals.push_back({ij.at(0).get<double>(), ij.at(1).get<double>()});
  try {
    return DiagonalSpec(std::move(branches), std::move(overrides), offset, kernel,
                        std::move(intervals));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
}

ordered_json spec_to_json(const DiagonalSpec& s) {
  ordered_json j;
  j["branches"] = ordered_json::array();
  for (const auto& t : s.branches()) {
    j["branches"].push_back(
        ordered_json{{"c", t.c}, {"a", t.a}, {"p", t.p}, {"b", t.b}, {"q", t.q}});
  }
  j["overrides"] = ordered_json::array();
  for (const auto& o : s.overrides()) {
    j["overrides"].push_back(
        ordered_json{{"branch", o.branch}, {"index", o.index}, {"value", o.value}});
  }
  j["shift_offset"] = s.shift_offset();
  if (s.kernel().continuum) j["kernel_dim"] = "continuum";
  else j["kernel_dim"] = s.kernel().count;
  j["interval_parts"] = ordered_json::array();
  for (const auto& iv : s.intervals())
    j["interval_parts"].push_back(ordered_json::array({iv.lo, iv.hi}));
  return j;
}

}  // namespace

ConfigFile parse_config(const std::string& json_text) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("config: invalid JSON: ") + e.what());
  }
  ConfigFile out;
  if (root.contains("budgets")) {
    const auto& bj = root.at("budgets");
    out.budgets.mu_terms = bj.value("mu_terms", out.budgets.mu_terms);
    out.budgets.k_log2_max = bj.value("k_log2_max", out.budgets.k_log2_max);
    out.budgets.alpha_grid = bj.value("alpha_grid", out.budgets.alpha_grid);
    out.budgets.tol = bj.value("tol", out.budgets.tol);
  }
  for (const auto& sj : root.value("systems", ordered_json::array())) {
    SystemConfig sc;
    sc.id = sj.at("id").get<std::string>();
    sc.kind = kind_from_string(sj.at("kind").get<std::string>());
    switch (sc.kind) {
      case SystemKind::FiniteMatrix: {
        sc.ambient = sj.at("ambient").get<std::size_t>();
        sc.e1 = vectors_to_columns(sj.value("e1", ordered_json::array()), sc.ambient);
        sc.e2 = vectors_to_columns(sj.value("e2", ordered_json::array()), sc.ambient);
        if ((sc.e1.cols() > 0 && sc.e1.rows() != sc.ambient) ||
            (sc.e2.cols() > 0 && sc.e2.rows() != sc.ambient))
          throw std::runtime_error("config: vector length differs from ambient for '" +
                                   sc.id + "'");
        break;
      }
      case SystemKind::GraphFinite:
        sc.t = json_to_matrix(sj.at("t"));
        break;
      case SystemKind::GraphDiagonal:
        sc.spec = json_to_spec(sj);
        break;
    }
    for (const auto& other : out.systems)
      if (other.id == sc.id)
        throw std::runtime_error("config: duplicate system id '" + sc.id + "'");
    out.systems.push_back(std::move(sc));
  }
  return out;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ConfigFile& config) {
  ordered_json root;
  root["systems"] = ordered_json::array();
  for (const auto& sc : config.systems) {
    ordered_json sj;
    sj["id"] = sc.id;
    sj["kind"] = to_string(sc.kind);
    switch (sc.kind) {
      case SystemKind::FiniteMatrix:
        sj["ambient"] = sc.ambient;
        sj["e1"] = columns_to_vectors(sc.e1);
        sj["e2"] = columns_to_vectors(sc.e2);
        break;
      case SystemKind::GraphFinite:
        sj["t"] = matrix_to_json(sc.t);
        break;
      case SystemKind::GraphDiagonal: {
        ordered_json spec = spec_to_json(sc.spec);
        for (auto& [key, value] : spec.items()) sj[key] = value;
        break;
      }
    }
    root["systems"].push_back(std::move(sj));
  }
  root["budgets"] = ordered_json{{"mu_terms", config.budgets.mu_terms},
                                 {"k_log2_max", config.budgets.k_log2_max},
                                 {"alpha_grid", config.budgets.alpha_grid},
                                 {"tol", config.budgets.tol}};
  return root.dump(2) + "\n";
}

const SystemConfig& find_system(const ConfigFile& config, const std::string& id) {
  for (const auto& sc : config.systems)
    if (sc.id == id) return sc;
  throw std::runtime_error("config: no system with id '" + id + "'");
}

ConfigFile builtin_systems() {
  ConfigFile cf;
  const auto add_diag = [&](std::string id, DiagonalSpec spec) {
    SystemConfig sc;
    sc.id = std::move(id);
    sc.kind = SystemKind::GraphDiagonal;
    sc.spec = std::move(spec);
    cf.systems.push_back(std::move(sc));
  };
  const SymTerm const2{2.0, 0.0, 0.0, 1.0, 0.0};
  const SymTerm inv_n{1.0, 0.0, -1.0, 1.0, 0.0};
  const SymTerm inv_sqrt_n{1.0, 0.0, -0.5, 1.0, 0.0};
  const SymTerm inv_n2{1.0, 0.0, -2.0, 1.0, 0.0};
  const SymTerm inv_n3{1.0, 0.0, -3.0, 1.0, 0.0};
  const SymTerm inv_nlog{1.0, 1.0, -1.0, 1.0, -1.0};   // 1/((n+1) log(n+1))
  const SymTerm inv_log{1.0, 0.0, 0.0, 1.0, -1.0};     // 1/log(n+1)
  const SymTerm inv_sq_log{1.0, 1.0, -2.0, 1.0, -1.0}; // 1/((n+1)^2 log(n+1))
  const SymTerm squares{1.0, 0.0, 2.0, 1.0, 0.0};
  const SymTerm squares_shifted{1.0, 1.0, 2.0, 1.0, 0.0};  // (n+1)^2
  const SymTerm cubes{1.0, 0.0, 3.0, 1.0, 0.0};

  {
    SystemConfig sc;
    sc.id = "fin-diag-1-half";
    sc.kind = SystemKind::GraphFinite;
    sc.t = Matrix::diagonal({1.0, 0.5});
    cf.systems.push_back(sc);
  }
  {
    SystemConfig sc;
    sc.id = "fin-diag-1-third";
    sc.kind = SystemKind::GraphFinite;
    sc.t = Matrix::diagonal({1.0, 1.0 / 3.0});
    cf.systems.push_back(sc);
  }
  {
    SystemConfig sc;
    sc.id = "fin-orth-pair";
    sc.kind = SystemKind::FiniteMatrix;
    sc.ambient = 2;
    sc.e1 = Matrix::from_rows({{1.0}, {0.0}});
    sc.e2 = Matrix::from_rows({{0.0}, {1.0}});
    cf.systems.push_back(sc);
  }

  add_diag("const-2", DiagonalSpec({const2}));
  add_diag("sin-inv-n", DiagonalSpec({inv_n}));
  add_diag("inv-n", DiagonalSpec({inv_n}));
  add_diag("inv-sqrt-n", DiagonalSpec({inv_sqrt_n}));
  add_diag("inv-n2", DiagonalSpec({inv_n2}));
  add_diag("inv-n3", DiagonalSpec({inv_n3}));
  add_diag("inv-n-log-n", DiagonalSpec({inv_nlog}));
  add_diag("inv-log-n", DiagonalSpec({inv_log}));
  add_diag("shift-inv-n", DiagonalSpec({inv_n}, {}, 1));
  add_diag("squares", DiagonalSpec({squares}));
  add_diag("squares-shifted", DiagonalSpec({squares_shifted}));
  add_diag("cubes", DiagonalSpec({cubes}));
  add_diag("squares-plus-inv-squares", DiagonalSpec({squares, inv_n2}));
  add_diag("const2-plus-inv-squares", DiagonalSpec({const2, inv_n2}));
  add_diag("cubes-plus-inv-cubes", DiagonalSpec({cubes, inv_n3}));
  add_diag("inv-n2-plus-inv-n3", DiagonalSpec({inv_n2, inv_n3}));
  add_diag("const2-plus-inv-sq-log", DiagonalSpec({const2, inv_sq_log}));
  add_diag("interval23-plus-inv-squares",
           DiagonalSpec({inv_n2}, {}, 0, CardinalDim::finite(0), {{2.0, 3.0}}));
  add_diag("interval23-plus-inv-cubes",
           DiagonalSpec({inv_n3}, {}, 0, CardinalDim::finite(0), {{2.0, 3.0}}));
  return cf;
}

}  // namespace subspaces
