// Stand-alone acceptance gate: runs every numbered criterion and prints one
// pass/fail line per criterion. Exit code 0 iff everything passed.

#include <exception>
#include <iostream>

#include "homc/acceptance.hpp"

int main() {
  int failed = 0;
  try {
    for (const auto& c : homc::acceptance::run_all()) {
      std::cout << (c.passed() ? "[PASS]" : "[FAIL]") << " criterion " << c.id
                << ": " << c.title << '\n';
      for (const auto& chk : c.checks) {
        if (chk.passed) continue;
        std::cout << "       failed check: " << chk.label;
        if (!chk.detail.empty()) std::cout << " (" << chk.detail << ')';
        std::cout << '\n';
      }
      if (!c.passed()) ++failed;
    }
  } catch (const std::exception& e) {
    std::cout << "[FAIL] acceptance run aborted: " << e.what() << '\n';
    return 1;
  }
  if (failed == 0) {
    std::cout << "acceptance: all " << homc::acceptance::kCriterionCount
              << " criteria passed\n";
    return 0;
  }
  std::cout << "acceptance: " << failed << " criteria failed\n";
  return 1;
}
