#ifndef QALG_ALGEBRA_HPP
#define QALG_ALGEBRA_HPP

#include "qalg/distributions.hpp"
#include "qalg/gmet.hpp"
#include "qalg/terms.hpp"
#include "qalg/theory.hpp"

#include <functional>
#include <optional>
#include <random>
#include <variant>

namespace qalg {

/// An algebra element: a point of a finite carrier, or a distribution when
/// the model is D(A).
using Element = std::variant<std::string, Dist>;

std::string element_str(const Element& e);
bool element_eq(const Element& a, const Element& b);

/// Raised when a finite operation table has no entry for a tuple (the
/// quotient of a depth-bounded universe is partial at the boundary).
class PartialOperation : public Error {
public:
  using Error::Error;
};

/// A model: either a finite tabulated algebra over a FiniteSpace, or a
/// procedural algebra given by oracles (distance, operations, constants,
/// and a sampler for property runs).
class Algebra {
public:
  struct Finite {
    FiniteSpace space;
    std::map<OpSym, std::map<std::vector<std::size_t>, std::size_t>> op_tables;
    std::map<std::string, std::size_t> const_table;
    /// Applications the depth-bounded quotient could not resolve.
    std::vector<std::pair<OpSym, std::vector<std::size_t>>> missing;
  };
  struct Procedural {
    MetricKind kind;
    std::function<UnitValue(const Element&, const Element&)> distance;
    std::function<Element(const OpSym&, const std::vector<Element>&)> apply;
    std::function<Element(const std::string&)> constant;
    std::function<Element(std::mt19937&)> sample;
  };

  explicit Algebra(Finite f) : impl_(std::move(f)) {}
  explicit Algebra(Procedural p) : impl_(std::move(p)) {}

  bool is_finite() const { return std::holds_alternative<Finite>(impl_); }
  const Finite& finite() const { return std::get<Finite>(impl_); }
  const MetricKind& kind() const;

  UnitValue distance(const Element& a, const Element& b) const;
  Element apply(const OpSym& op, const std::vector<Element>& args) const;
  Element constant(const std::string& atom) const;
  Element sample(std::mt19937& rng) const;
  std::vector<Element> carrier() const;  // finite algebras only

private:
  std::variant<Finite, Procedural> impl_;
};

/// Structural evaluation of a term in an algebra. Variables resolve via
/// the assignment; constants via `const_override` when given, otherwise
/// via the algebra's constant interpretation.
Element evaluate(const Term& t, const Algebra& alg,
                 const std::map<std::string, Element>& assignment,
                 const std::map<std::string, Element>* const_override = nullptr);

struct Verdict {
  bool holds = true;
  bool vacuous = false;       // no assignable variables
  std::size_t checked = 0;    // assignments actually evaluated
  std::size_t partial_skips = 0;
  std::optional<std::map<std::string, Element>> counterexample;

  std::string str() const;
};

struct SatisfyMode {
  static SatisfyMode exhaustive() { return {true, 0, 0}; }
  static SatisfyMode sampled(std::size_t n, std::uint64_t seed) {
    return {false, n, seed};
  }
  bool exhaustive_mode;
  std::size_t samples;
  std::uint64_t seed;
};

/// Does the algebra satisfy the clause for all (or sampled) assignments?
Verdict satisfies(const Algebra& alg, const HornClause& clause,
                  const SatisfyMode& mode);

/// Exhaustive L-nonexpansiveness check of a finite algebra's operation
/// tables against the liftings of the signature.
struct NonexpansivenessReport {
  struct Violation {
    OpSym op;
    std::vector<std::size_t> lhs, rhs;
    UnitValue actual, allowed;
  };
  std::vector<Violation> violations;
  std::size_t skipped_partial = 0;
  bool ok() const { return violations.empty(); }
};
NonexpansivenessReport check_algebra_nonexpansive(const Algebra& alg,
                                                  const Signature& sig);

/// The procedural algebra (D(A), LK distance, convex combinations) over a
/// diffuse metric space. The sampler draws distributions with denominators
/// up to 24.
Algebra lk_algebra(const FiniteSpace& space);

}  // namespace qalg

#endif
