#pragma once

#include <string>
#include <vector>

namespace homc::acceptance {

// One verified expectation inside a criterion.
struct Check {
  std::string label;
  bool passed = false;
  std::string detail;  // numbers behind the verdict (diffs, counts, values)
};

// One numbered criterion of the release gate. The same list backs the
// `examples run` commands and the stand-alone acceptance runner, so the CLI
// and the test suite can never drift apart.
struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;

  bool passed() const {
    for (const Check& c : checks)
      if (!c.passed) return false;
    return !checks.empty();
  }
};

inline constexpr int kCriterionCount = 10;

// Runs one criterion (1-based); throws OutOfRange for ids outside 1..10.
CriterionResult run_criterion(int id);

// Runs every criterion in order.
std::vector<CriterionResult> run_all();

// The criteria a named example fixture is responsible for (empty for ids
// that are not tied to a single fixture).
std::vector<int> criteria_for_fixture(const std::string& name);

}  // namespace homc::acceptance
