#include "qalg/theory.hpp"

#include <algorithm>
#include <sstream>

namespace qalg {

EpsExpr EpsExpr::constant(const Rational& q) {
  EpsExpr e;
  e.node_ = Node::Const;
  e.value_ = q;
  return e;
}

EpsExpr EpsExpr::label(std::string name) {
  EpsExpr e;
  e.node_ = Node::Label;
  e.name_ = std::move(name);
  return e;
}

EpsExpr EpsExpr::add(EpsExpr a, EpsExpr b) {
  EpsExpr e;
  e.node_ = Node::Add;
  e.lhs_ = std::make_shared<EpsExpr>(std::move(a));
  e.rhs_ = std::make_shared<EpsExpr>(std::move(b));
  return e;
}

EpsExpr EpsExpr::mul(EpsExpr a, EpsExpr b) {
  EpsExpr e;
  e.node_ = Node::Mul;
  e.lhs_ = std::make_shared<EpsExpr>(std::move(a));
  e.rhs_ = std::make_shared<EpsExpr>(std::move(b));
  return e;
}

bool EpsExpr::is_constant() const { return labels().empty(); }

Rational EpsExpr::eval(const std::map<std::string, Rational>& env) const {
  switch (node_) {
    case Node::Const:
      return value_;
    case Node::Label: {
      auto it = env.find(name_);
      if (it == env.end()) throw Error("unbound premise label '" + name_ + "'");
      return it->second;
    }
    case Node::Add:
      return lhs_->eval(env) + rhs_->eval(env);
    case Node::Mul:
      return lhs_->eval(env) * rhs_->eval(env);
  }
  throw Error("unreachable eps node");
}

std::set<std::string> EpsExpr::labels() const {
  std::set<std::string> out;
  switch (node_) {
    case Node::Const:
      break;
    case Node::Label:
      out.insert(name_);
      break;
    case Node::Add:
    case Node::Mul: {
      auto l = lhs_->labels();
      auto r = rhs_->labels();
      out.insert(l.begin(), l.end());
      out.insert(r.begin(), r.end());
      break;
    }
  }
  return out;
}

std::string EpsExpr::str() const {
  switch (node_) {
    case Node::Const:
      return rational_to_string(value_);
    case Node::Label:
      return name_;
    case Node::Add:
      return "(" + lhs_->str() + " + " + rhs_->str() + ")";
    case Node::Mul:
      return "(" + lhs_->str() + " * " + rhs_->str() + ")";
  }
  return "?";
}

std::string Premise::str() const {
  switch (mode) {
    case Mode::Equal:
      return lhs.str() + " = " + rhs.str();
    case Mode::BoundedBy:
      return lhs.str() + " =[" + bound.str() + "] " + rhs.str();
    case Mode::Bind:
      return lhs.str() + " =[" + label + "] " + rhs.str();
  }
  return "?";
}

std::string Conclusion::str() const {
  if (!quantitative) return lhs.str() + " = " + rhs.str();
  return lhs.str() + " =[" + eps.str() + "] " + rhs.str();
}

std::string HornClause::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < premises.size(); ++i) {
    if (i) os << ", ";
    os << premises[i].str();
  }
  if (!premises.empty()) os << " ";
  os << "|- " << conclusion.str();
  return os.str();
}

bool check_basic(const HornClause& h) {
  for (const auto& p : h.premises)
    if (!p.lhs.is_var() || !p.rhs.is_var()) return false;
  return true;
}

Theory extend_by_space(const Theory& th, const FiniteSpace& space) {
  if (space.kind() != th.kind)
    throw Error("space kind " + space.kind().str() +
                " does not match theory kind " + th.kind.str());
  Theory out = th;
  std::set<std::string> taken = th.carrier_set();
  for (const auto& d : th.sig.ops()) taken.insert(d.sym.family);
  for (const auto& p : space.points()) {
    if (taken.count(p))
      throw Error("point '" + p + "' collides with an existing constant");
    out.carrier.push_back(p);
  }
  for (const auto& a : space.points())
    for (const auto& b : space.points()) {
      HornClause clause;
      clause.conclusion = {Term::constant(a), Term::constant(b), true,
                           EpsExpr::constant(space.d(a, b).value())};
      out.axioms.push_back(std::move(clause));
    }
  return out;
}

namespace {

void check_term(const Term& t, const Theory& th) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return;
    case Term::Kind::Const:
      if (!th.carrier_set().count(t.name()))
        throw Error("unknown constant '" + t.name() + "' in axiom");
      return;
    case Term::Kind::App: {
      const OpDecl& d = th.sig.require(t.sym());
      if (d.arity != t.args().size())
        throw Error("operation " + t.sym().str() + " applied to " +
                    std::to_string(t.args().size()) + " arguments");
      for (const Term& a : t.args()) check_term(a, th);
      return;
    }
  }
}

}  // namespace

void check_theory(const Theory& th) {
  for (const auto& clause : th.axioms) {
    std::set<std::string> bound;
    for (const auto& p : clause.premises) {
      check_term(p.lhs, th);
      check_term(p.rhs, th);
      if (p.mode == Premise::Mode::Bind) bound.insert(p.label);
    }
    check_term(clause.conclusion.lhs, th);
    check_term(clause.conclusion.rhs, th);
    if (clause.conclusion.quantitative)
      for (const auto& l : clause.conclusion.eps.labels())
        if (!bound.count(l))
          throw Error("conclusion references unbound label '" + l +
                      "' in clause: " + clause.str());
  }
}

}  // namespace qalg
