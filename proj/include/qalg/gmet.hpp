#ifndef QALG_GMET_HPP
#define QALG_GMET_HPP

#include "qalg/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qalg {

/// The five implicational constraints a fuzzy relation may satisfy.
enum class Axiom {
  Sym = 1,        // d(a,b) = d(b,a)
  Refl = 2,       // d(a,a) = 0
  IdOfInd = 3,    // d(a,b) = 0  implies  a = b
  Tri = 4,        // d(a,c) <= d(a,b) + d(b,c)
  StrongTri = 5,  // d(a,c) <= max(d(a,b), d(b,c))
};

const char* axiom_name(Axiom a);

/// A subset of the five axioms, optionally carrying one of the standard
/// names (Met, DMet, UMet, ...). StrongTri always implies Tri after
/// normalization.
class MetricKind {
public:
  MetricKind() = default;
  explicit MetricKind(std::initializer_list<Axiom> axioms);
  explicit MetricKind(const std::vector<Axiom>& axioms);

  /// Looks up one of the named kinds: FRel, PSMet, PQMet, DMet, MMet,
  /// SMet, QMet, PMet, Met, UMet.
  static MetricKind named(const std::string& name);
  static const std::vector<std::string>& all_names();

  bool has(Axiom a) const { return (bits_ & bit(a)) != 0; }
  std::vector<Axiom> axioms() const;

  /// The standard name of this axiom set, if it has one.
  std::optional<std::string> name() const;

  bool operator==(const MetricKind& o) const { return bits_ == o.bits_; }
  bool operator!=(const MetricKind& o) const { return bits_ != o.bits_; }

  std::string str() const;

private:
  static unsigned bit(Axiom a) { return 1u << static_cast<int>(a); }
  void normalize();

  unsigned bits_ = 0;
};

/// A finite carrier with a tabulated fuzzy relation and a declared kind.
/// Immutable after construction; construction checks only matrix shape,
/// axiom conformance is the job of validate_space.
class FiniteSpace {
public:
  FiniteSpace() = default;
  FiniteSpace(std::vector<std::string> points,
              std::vector<std::vector<UnitValue>> matrix, MetricKind kind);

  const std::vector<std::string>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const MetricKind& kind() const { return kind_; }

  bool has_point(const std::string& p) const { return index_.count(p) != 0; }
  std::size_t index_of(const std::string& p) const;

  const UnitValue& d(std::size_t i, std::size_t j) const { return matrix_[i][j]; }
  const UnitValue& d(const std::string& a, const std::string& b) const {
    return matrix_[index_of(a)][index_of(b)];
  }

private:
  std::vector<std::string> points_;
  std::vector<std::vector<UnitValue>> matrix_;
  std::map<std::string, std::size_t> index_;
  MetricKind kind_;
};

/// A total map between the carriers of two finite spaces.
struct SpaceMap {
  FiniteSpace src;
  FiniteSpace dst;
  std::map<std::string, std::string> table;

  SpaceMap(FiniteSpace s, FiniteSpace t, std::map<std::string, std::string> m);

  const std::string& apply(const std::string& p) const;
  bool is_nonexpansive() const;
};

/// One axiom violation with the witnessing point tuple.
struct AxiomViolation {
  Axiom axiom;
  std::vector<std::string> witness;

  std::string str() const;
};

struct ValidationReport {
  std::vector<AxiomViolation> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const;
};

/// Exhaustively checks every axiom of the space's kind on all 1-, 2-
/// and 3-tuples of points.
ValidationReport validate_space(const FiniteSpace& space);

/// Cartesian product carrier with the pointwise-max distance. All inputs
/// must share a kind. Tuple points are printed "(a,b,...)".
FiniteSpace product(const std::vector<FiniteSpace>& spaces);

/// The one-point space; self-distance 0 when the kind has Refl, 1 otherwise.
FiniteSpace terminal(const MetricKind& kind);

/// Disjoint union; distance 1 across components. Points are namespaced by
/// component index ("0.a") to guarantee disjointness.
FiniteSpace coproduct(const std::vector<FiniteSpace>& spaces);

/// Submatrix on the given points, same kind.
FiniteSpace restrict_space(const FiniteSpace& space,
                           const std::vector<std::string>& subset);

/// True iff f is injective and preserves distances exactly.
bool check_isometric_embedding(const SpaceMap& f);

}  // namespace qalg

#endif
