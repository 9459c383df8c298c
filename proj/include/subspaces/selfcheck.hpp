#pragma once

#include <string>
#include <vector>

#include "subspaces/classify.hpp"

namespace subspaces {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Runs the complete built-in verification table: reference verdicts for the
// shipped systems, witness round trips, five-fold decomposition recovery,
// exponent and counting consistency suites, finite truncation soundness and
// report determinism. Deterministic for fixed budgets.
std::vector<CheckResult> run_selfcheck(const Budgets& budgets = {});

bool all_passed(const std::vector<CheckResult>& results);

// Deterministic JSON rendering (contains no timing).
std::string selfcheck_json(const std::vector<CheckResult>& results);

}  // namespace subspaces
