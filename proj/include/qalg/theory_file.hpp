#ifndef QALG_THEORY_FILE_HPP
#define QALG_THEORY_FILE_HPP

#include "qalg/distributions.hpp"
#include "qalg/gmet.hpp"
#include "qalg/theory.hpp"

#include <optional>
#include <set>
#include <string>

namespace qalg {

/// A parsed theory file: sections kind / op / params / option / axiom /
/// space in a line-oriented plain-text format. Axiom schemas are expanded
/// over the (closure of the) declared parameter sets at load time.
struct LoadedTheory {
  Theory theory;
  std::optional<FiniteSpace> space;
  int param_closure_rounds = 1;

  /// The theory extended by the bundled space, when one is present.
  Theory extended() const {
    return space ? extend_by_space(theory, *space) : theory;
  }
  std::set<std::string> atom_set() const {
    std::set<std::string> atoms;
    if (space)
      atoms.insert(space->points().begin(), space->points().end());
    return atoms;
  }
};

LoadedTheory parse_theory_text(const std::string& text);
LoadedTheory load_theory_file(const std::string& path);

/// Parses "{a:1/2, b:1/2}".
Dist parse_dist_literal(const std::string& text);

}  // namespace qalg

#endif
