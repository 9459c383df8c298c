#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subspaces/classify.hpp"
#include "subspaces/finite.hpp"

namespace subspaces {

// Everything one command run wants to tell the user. Reports are rendered
// deterministically; the timing field is the only run-dependent part.
struct Report {
  std::string command;            // classify | invariants | witness | selftest
  std::vector<std::string> ids;
  std::string relation;           // requested relation, when applicable
  std::optional<Verdict> verdict;
  std::vector<std::pair<std::string, std::string>> rows;  // invariant name -> value
  std::optional<Witness> witness;
  bool include_witness_matrix = false;
  double timing_ms = 0.0;
};

std::string render_json(const Report& report);
std::string render_text(const Report& report);

// 17-significant-digit decimal, reproducible across platforms.
std::string csv_double(double x);
std::string witness_csv(const Matrix& m);

}  // namespace subspaces
