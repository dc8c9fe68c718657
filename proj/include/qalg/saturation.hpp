#ifndef QALG_SATURATION_HPP
#define QALG_SATURATION_HPP

#include "qalg/algebra.hpp"
#include "qalg/theory.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qalg {

struct SaturationConfig {
  int depth = 1;
  std::size_t max_rounds = 64;
  std::size_t materialization_budget = 4096;
};

/// One application of the L-NE rule that actually lowered a distance.
/// The premise space is snapshotted so the proviso check can be replayed.
struct LneApplication {
  OpSym op;
  std::vector<int> lhs_args, rhs_args;  // class ids at application time
  std::vector<int> premise_classes;     // carrier of the premise space
  std::vector<std::vector<UnitValue>> premise_matrix;
  UnitValue delta;
  std::size_t round;
};

/// Congruence plus distance table over a bounded ground-term universe.
/// Distances are upper bounds on the theory's derivable distance; with
/// fixpoint_reached they are the engine's best bounds at this depth.
class SaturationResult {
public:
  const std::vector<Term>& universe() const { return universe_; }
  const MetricKind& metric_kind() const { return kind_; }
  bool fixpoint_reached() const { return fixpoint_; }
  std::size_t round_count() const { return rounds_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const std::vector<LneApplication>& lne_log() const { return lne_log_; }

  /// Sorted class ids (each the universe index of the canonical
  /// representative, which is the least member in term order).
  const std::vector<int>& classes() const { return roots_; }
  const Term& representative(int class_id) const {
    return universe_[static_cast<std::size_t>(class_id)];
  }
  /// All universe indices belonging to a class.
  std::vector<int> members(int class_id) const;

  int class_of_index(int universe_index) const;
  /// Class of a term, resolved structurally through the congruence; fails
  /// when the term (or a subterm application) is outside the universe.
  std::optional<int> try_class_of(const Term& t) const;
  int class_of(const Term& t) const;

  const UnitValue& dist(int class_a, int class_b) const;

  /// Deterministic dump: "class <id>: <rep>" lines then distance lines;
  /// tab-separated records when tsv is set.
  std::string dump(bool tsv = false) const;

  /// Replays the L-NE log, re-checking that every premise space satisfied
  /// the kind's axioms when the rule fired. Returns the first offending
  /// entry description, or nothing when the log is clean.
  std::optional<std::string> verify_lne_log() const;

  /// Diagnostic hook: forces one distance entry. Soundness checks use it
  /// to prove they would catch a corrupted table.
  void override_distance(int class_a, int class_b, const UnitValue& v) {
    dist_[static_cast<std::size_t>(class_a)][static_cast<std::size_t>(class_b)] =
        v;
  }

private:
  friend class Saturator;
  std::vector<Term> universe_;
  std::map<Term, int> term_index_;
  std::vector<int> parent_;  // union-find, path-compressed on completion
  std::vector<std::vector<UnitValue>> dist_;
  std::vector<int> roots_;
  std::map<OpSym, std::map<std::vector<int>, int>> nodes_;  // args -> class
  MetricKind kind_;
  bool fixpoint_ = false;
  std::size_t rounds_ = 0;
  std::vector<std::string> warnings_;
  std::vector<LneApplication> lne_log_;
};

/// Runs the deduction engine: congruence closure, axiom instantiation
/// restricted to the universe, the kind's closure rules, and the L-NE rule
/// for every operation, iterated to fixpoint or the round budget.
SaturationResult saturate(const Theory& th, const SaturationConfig& cfg = {});

UnitValue derived_distance(const SaturationResult& r, const Term& s,
                           const Term& t);
bool same_class(const SaturationResult& r, const Term& s, const Term& t);

struct QuotientAlgebra {
  Algebra algebra;
  /// Class id per carrier point, aligned with the algebra's space.
  std::vector<int> class_ids;
  /// Applications that left the universe (depth truncation).
  std::vector<std::pair<OpSym, std::vector<int>>> partial;
  bool total() const { return partial.empty(); }
};

/// The finite algebra on classes: distance table from the saturation,
/// operation tables from the congruence. Partial applications are
/// reported, never silently dropped.
QuotientAlgebra quotient_algebra(const SaturationResult& r, const Theory& th);

/// The quotient carrier as a plain space (points are class representative
/// strings).
FiniteSpace quotient_space(const SaturationResult& r);

}  // namespace qalg

#endif
