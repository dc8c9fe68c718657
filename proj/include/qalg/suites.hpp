#ifndef QALG_SUITES_HPP
#define QALG_SUITES_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qalg {

struct CheckResult {
  std::string id;
  bool pass;
  std::string detail;
};

/// The twelve acceptance criteria, ids C1-... through C12-..., in order.
std::vector<CheckResult> run_all_criteria(std::uint64_t seed);

/// Suite groupings for the CLI: "paper" (exact identities from the worked
/// examples), "props" (sampled properties and the solver cross-checks),
/// "monad" (monad laws and freeness).
std::vector<CheckResult> run_suite(const std::string& suite,
                                   std::uint64_t seed);
const std::vector<std::string>& suite_names();

}  // namespace qalg

#endif
