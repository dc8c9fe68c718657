// Acceptance suite: runs every criterion at its stated tolerance (all are
// exact) and prints one PASS/FAIL line per criterion. Exit status is
// nonzero when anything fails.

#include "qalg/suites.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  std::uint64_t seed = 0;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);

  bool all_pass = true;
  std::vector<qalg::CheckResult> results;
  try {
    results = qalg::run_all_criteria(seed);
  } catch (const std::exception& e) {
    std::cerr << "FAIL suite-aborted  [" << e.what() << "]\n";
    return 1;
  }
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.id;
    if (!r.detail.empty()) std::cout << "  [" << r.detail << "]";
    std::cout << "\n";
    all_pass &= r.pass;
  }
  std::cout << (all_pass ? "acceptance: all criteria pass\n"
                         : "acceptance: FAILURES above\n");
  return all_pass ? 0 : 1;
}
