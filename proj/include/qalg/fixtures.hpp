#ifndef QALG_FIXTURES_HPP
#define QALG_FIXTURES_HPP

#include "qalg/theory_file.hpp"

#include <string>
#include <vector>

namespace qalg::fixtures {

/// Names of the bundled theory files (without extension): semilattice,
/// convex_kantorovich, convex_kantorovich_rule, convex_lk,
/// lk_counterexample, discrete.
const std::vector<std::string>& names();

/// The exact text of a bundled theory file. The files under fixtures/ are
/// byte-for-byte copies of these strings.
const std::string& text(const std::string& name);

LoadedTheory load(const std::string& name);

/// The two-point diffuse metric space with d(a,a)=d(b,b)=1/2, d(a,b)=1.
FiniteSpace lk_counterexample_space();

}  // namespace qalg::fixtures

#endif
