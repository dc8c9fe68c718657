#ifndef QALG_THEORY_HPP
#define QALG_THEORY_HPP

#include "qalg/gmet.hpp"
#include "qalg/terms.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace qalg {

/// Epsilon expression of a quantitative conclusion: a polynomial with
/// nonnegative rational coefficients over premise labels, so lowering a
/// premise distance can only lower the conclusion. Built from constants,
/// labels, sums and products.
class EpsExpr {
public:
  static EpsExpr constant(const Rational& q);
  static EpsExpr label(std::string name);
  static EpsExpr add(EpsExpr a, EpsExpr b);
  static EpsExpr mul(EpsExpr a, EpsExpr b);

  bool is_constant() const;
  /// Evaluates under the label environment; unbound label is an error.
  Rational eval(const std::map<std::string, Rational>& env) const;
  std::set<std::string> labels() const;
  std::string str() const;

  /// Default: the constant 0.
  EpsExpr() = default;

private:
  enum class Node { Const, Label, Add, Mul };

  Node node_ = Node::Const;
  Rational value_;
  std::string name_;
  std::shared_ptr<const EpsExpr> lhs_, rhs_;
};

/// One premise of a Horn clause. `Equal` requires the two terms to be in
/// the same class, `BoundedBy` requires their distance to be at most
/// `bound`, and `Bind` always holds, binding `label` to the current
/// distance for use in the conclusion's epsilon expression.
struct Premise {
  enum class Mode { Equal, BoundedBy, Bind };
  Term lhs;
  Term rhs;
  Mode mode;
  UnitValue bound;    // BoundedBy
  std::string label;  // Bind

  std::string str() const;
};

struct Conclusion {
  Term lhs;
  Term rhs;
  bool quantitative;
  EpsExpr eps;  // meaningful when quantitative

  std::string str() const;
};

struct HornClause {
  std::vector<Premise> premises;
  Conclusion conclusion;

  std::string str() const;
};

/// True iff every premise relates two variables.
bool check_basic(const HornClause& h);

/// A quantitative theory: lifted signature, a metric kind, Horn-clause
/// axioms, and the carrier constants contributed by space extension.
struct Theory {
  Signature sig;
  MetricKind kind;
  std::vector<HornClause> axioms;
  std::vector<std::string> carrier;  // constants added by extend_by_space
  bool param_closure_complete = true;

  std::set<std::string> carrier_set() const {
    return {carrier.begin(), carrier.end()};
  }
};

/// Adds one constant per point of the space and, for every ordered point
/// pair, the premise-free axiom  a =[d(a,a')] a'.
Theory extend_by_space(const Theory& th, const FiniteSpace& space);

/// Checks every axiom against the signature: argument counts, declared
/// symbols, and that conclusion labels are bound by premises. Throws on
/// the first offense.
void check_theory(const Theory& th);

}  // namespace qalg

#endif
