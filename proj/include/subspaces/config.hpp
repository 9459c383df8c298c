#pragma once

#include <string>
#include <vector>

#include "subspaces/classify.hpp"
#include "subspaces/diagonal.hpp"
#include "subspaces/matrix.hpp"

namespace subspaces {

enum class SystemKind { FiniteMatrix, GraphFinite, GraphDiagonal };

const char* to_string(SystemKind k);

// One named system from a config file. The payload depends on the kind:
//   finite-matrix : ambient dimension plus spanning vectors for E1 and E2
//   graph-finite  : the matrix of T (the system is (K1+K2; K1+0, graph T))
//   graph-diagonal: a DiagonalSpec
struct SystemConfig {
  std::string id;
  SystemKind kind = SystemKind::GraphDiagonal;
  std::size_t ambient = 0;
  Matrix e1;  // spanning vectors as columns
  Matrix e2;
  Matrix t;
  DiagonalSpec spec;
};

struct ConfigFile {
  std::vector<SystemConfig> systems;
  Budgets budgets;
};

// Throws std::runtime_error with a usage-grade message on malformed input.
ConfigFile load_config(const std::string& path);
ConfigFile parse_config(const std::string& json_text);

// Canonical serialization; parse(serialize(x)) reproduces x exactly.
std::string serialize_config(const ConfigFile& config);

// Throws std::runtime_error when the id is missing.
const SystemConfig& find_system(const ConfigFile& config, const std::string& id);

// The built-in catalog of reference systems (also shipped as
// configs/systems.json); the self-test runs against these.
ConfigFile builtin_systems();

}  // namespace subspaces
