#ifndef QALG_TERMS_HPP
#define QALG_TERMS_HPP

#include "qalg/liftings.hpp"
#include "qalg/rational.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qalg {

/// A concrete operation symbol. Members of a parametric family (the +_p
/// operations) carry their parameter; plus_{1/2} and plus_{1/4} are
/// distinct symbols.
struct OpSym {
  std::string family;
  std::optional<Rational> param;

  bool operator==(const OpSym& o) const {
    return family == o.family && param == o.param;
  }
  bool operator!=(const OpSym& o) const { return !(*this == o); }
  bool operator<(const OpSym& o) const {
    if (family != o.family) return family < o.family;
    if (param.has_value() != o.param.has_value())
      return !param.has_value();
    if (param && *param != *o.param) return *param < *o.param;
    return false;
  }

  std::string str() const {
    return param ? family + "_" + rational_to_string(*param) : family;
  }
};

struct OpDecl {
  OpSym sym;
  std::size_t arity;
  Lifting lifting;
};

class Signature {
public:
  void add(OpDecl decl);
  const OpDecl* find(const OpSym& sym) const;
  const OpDecl& require(const OpSym& sym) const;
  const std::vector<OpDecl>& ops() const { return ops_; }
  bool has_family(const std::string& family) const;
  std::vector<Rational> family_params(const std::string& family) const;

private:
  std::vector<OpDecl> ops_;
};

/// Closure of a parameter set under the two maps the skew-associativity
/// axiom generates: (p,q) -> pq and (p,q) -> p(1-q)/(1-pq). `complete` is
/// false when the given number of rounds did not reach a fixpoint.
struct ParamClosure {
  std::vector<Rational> params;
  bool complete;
};
ParamClosure close_params(std::vector<Rational> initial, int rounds);

/// An immutable first-order term: a variable, a carrier constant, or an
/// operation applied to arguments. Cheap to copy (shared structure).
class Term {
public:
  enum class Kind { Var, Const, App };

  /// Default-constructed terms are the placeholder variable "_".
  Term() { *this = var("_"); }

  static Term var(std::string name);
  static Term constant(std::string atom);
  static Term app(OpSym sym, std::vector<Term> args);

  Kind kind() const { return node_->kind; }
  bool is_var() const { return kind() == Kind::Var; }
  bool is_const() const { return kind() == Kind::Const; }
  bool is_app() const { return kind() == Kind::App; }

  /// Variable name or constant atom.
  const std::string& name() const { return node_->name; }
  const OpSym& sym() const { return node_->sym; }
  const std::vector<Term>& args() const { return node_->args; }

  /// Constants and variables have depth 0.
  int depth() const { return node_->depth; }

  std::string str() const;

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }
  /// Canonical order: depth, then node shape, then symbol name and
  /// parameters, then arguments. Used everywhere a deterministic
  /// representative is needed.
  bool operator<(const Term& o) const { return compare(o) < 0; }
  int compare(const Term& o) const;

  void collect_vars(std::set<std::string>& out) const;
  std::set<std::string> vars() const;

private:
  struct Node {
    Kind kind;
    std::string name;
    OpSym sym;
    std::vector<Term> args;
    int depth = 0;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Homomorphic replacement of variables; unmapped variables stay fixed.
Term substitute(const Term& t, const std::map<std::string, Term>& mapping);

/// All terms of depth <= depth over the carrier atoms and the signature's
/// operations, duplicate-free, in canonical order. Throws once the count
/// exceeds the budget.
std::vector<Term> enumerate_ground_terms(const Signature& sig,
                                         const std::vector<std::string>& carrier,
                                         int depth,
                                         std::size_t budget = 1u << 20);

/// Parses the term grammar
///   term := ident | symbol '(' [rational ';'] term (',' term)* ')'
/// Identifiers resolve to declared 0-ary operations, then to carrier
/// atoms, then to variables.
Term parse_term(const std::string& text, const Signature& sig,
                const std::set<std::string>& carrier_atoms);

}  // namespace qalg

#endif
