#include "qalg/algebra.hpp"

#include <sstream>

namespace qalg {

std::string element_str(const Element& e) {
  if (std::holds_alternative<std::string>(e)) return std::get<std::string>(e);
  return std::get<Dist>(e).str();
}

bool element_eq(const Element& a, const Element& b) { return a == b; }

const MetricKind& Algebra::kind() const {
  if (is_finite()) return finite().space.kind();
  return std::get<Procedural>(impl_).kind;
}

UnitValue Algebra::distance(const Element& a, const Element& b) const {
  if (is_finite())
    return finite().space.d(std::get<std::string>(a), std::get<std::string>(b));
  return std::get<Procedural>(impl_).distance(a, b);
}

Element Algebra::apply(const OpSym& op, const std::vector<Element>& args) const {
  if (!is_finite()) return std::get<Procedural>(impl_).apply(op, args);
  const Finite& f = finite();
  auto table = f.op_tables.find(op);
  if (table == f.op_tables.end())
    throw Error("algebra does not interpret " + op.str());
  std::vector<std::size_t> idx;
  idx.reserve(args.size());
  for (const auto& a : args)
    idx.push_back(f.space.index_of(std::get<std::string>(a)));
  auto it = table->second.find(idx);
  if (it == table->second.end())
    throw PartialOperation("operation " + op.str() +
                           " undefined on this tuple (depth truncation)");
  return f.space.points()[it->second];
}

Element Algebra::constant(const std::string& atom) const {
  if (!is_finite()) return std::get<Procedural>(impl_).constant(atom);
  const Finite& f = finite();
  auto it = f.const_table.find(atom);
  if (it == f.const_table.end()) throw Error("unknown constant '" + atom + "'");
  return f.space.points()[it->second];
}

Element Algebra::sample(std::mt19937& rng) const {
  if (is_finite()) {
    const auto& pts = finite().space.points();
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    return pts[pick(rng)];
  }
  return std::get<Procedural>(impl_).sample(rng);
}

std::vector<Element> Algebra::carrier() const {
  if (!is_finite()) throw Error("procedural algebra has no finite carrier");
  std::vector<Element> out;
  for (const auto& p : finite().space.points()) out.emplace_back(p);
  return out;
}

Element evaluate(const Term& t, const Algebra& alg,
                 const std::map<std::string, Element>& assignment,
                 const std::map<std::string, Element>* const_override) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = assignment.find(t.name());
      if (it == assignment.end())
        throw Error("unassigned variable '" + t.name() + "'");
      return it->second;
    }
    case Term::Kind::Const: {
      if (const_override) {
        auto it = const_override->find(t.name());
        if (it != const_override->end()) return it->second;
      }
      return alg.constant(t.name());
    }
    case Term::Kind::App: {
      std::vector<Element> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args())
        args.push_back(evaluate(a, alg, assignment, const_override));
      return alg.apply(t.sym(), args);
    }
  }
  throw Error("unreachable term kind");
}

std::string Verdict::str() const {
  std::ostringstream os;
  if (vacuous) return "holds (vacuously: no assignable variables)";
  if (holds) {
    os << "holds (" << checked << " assignments";
    if (partial_skips) os << ", " << partial_skips << " partial skips";
    os << ")";
    return os.str();
  }
  os << "counterexample:";
  for (const auto& [v, e] : *counterexample)
    os << " " << v << "=" << element_str(e);
  return os.str();
}

namespace {

// Checks one assignment; true when the clause's implication holds under it.
// Partial finite operations surface as PartialOperation, counted by caller.
bool clause_holds_under(const Algebra& alg, const HornClause& clause,
                        const std::map<std::string, Element>& assignment) {
  std::map<std::string, Rational> env;
  for (const auto& p : clause.premises) {
    Element l = evaluate(p.lhs, alg, assignment);
    Element r = evaluate(p.rhs, alg, assignment);
    switch (p.mode) {
      case Premise::Mode::Equal:
        if (!element_eq(l, r)) return true;  // premise fails, clause holds
        break;
      case Premise::Mode::BoundedBy:
        if (alg.distance(l, r) > p.bound) return true;
        break;
      case Premise::Mode::Bind:
        env[p.label] = alg.distance(l, r).value();
        break;
    }
  }
  Element cl = evaluate(clause.conclusion.lhs, alg, assignment);
  Element cr = evaluate(clause.conclusion.rhs, alg, assignment);
  if (!clause.conclusion.quantitative) return element_eq(cl, cr);
  Rational eps = clause.conclusion.eps.eval(env);
  if (eps > 1) eps = 1;
  if (eps < 0) eps = 0;
  return alg.distance(cl, cr).value() <= eps;
}

}  // namespace

Verdict satisfies(const Algebra& alg, const HornClause& clause,
                  const SatisfyMode& mode) {
  std::set<std::string> vars;
  for (const auto& p : clause.premises) {
    p.lhs.collect_vars(vars);
    p.rhs.collect_vars(vars);
  }
  clause.conclusion.lhs.collect_vars(vars);
  clause.conclusion.rhs.collect_vars(vars);
  std::vector<std::string> var_list(vars.begin(), vars.end());

  Verdict verdict;
  auto run_one = [&](const std::map<std::string, Element>& assignment) {
    try {
      if (!clause_holds_under(alg, clause, assignment)) {
        verdict.holds = false;
        verdict.counterexample = assignment;
        return false;
      }
      ++verdict.checked;
    } catch (const PartialOperation&) {
      ++verdict.partial_skips;
    }
    return true;
  };

  if (mode.exhaustive_mode) {
    if (!alg.is_finite())
      throw Error("exhaustive satisfaction needs a finite algebra");
    std::vector<Element> carrier = alg.carrier();
    if (carrier.empty() && !var_list.empty()) {
      verdict.vacuous = true;
      return verdict;
    }
    std::vector<std::size_t> idx(var_list.size(), 0);
    while (true) {
      std::map<std::string, Element> assignment;
      for (std::size_t k = 0; k < var_list.size(); ++k)
        assignment[var_list[k]] = carrier[idx[k]];
      if (!run_one(assignment)) return verdict;
      std::size_t k = 0;
      for (; k < idx.size(); ++k) {
        if (++idx[k] < carrier.size()) break;
        idx[k] = 0;
      }
      if (k == idx.size()) break;
      if (var_list.empty()) break;
    }
    return verdict;
  }

  std::mt19937 rng(static_cast<std::uint32_t>(mode.seed));
  for (std::size_t s = 0; s < mode.samples; ++s) {
    std::map<std::string, Element> assignment;
    for (const auto& v : var_list) assignment[v] = alg.sample(rng);
    if (!run_one(assignment)) return verdict;
  }
  return verdict;
}

NonexpansivenessReport check_algebra_nonexpansive(const Algebra& alg,
                                                  const Signature& sig) {
  if (!alg.is_finite())
    throw Error("exhaustive nonexpansiveness check needs a finite algebra");
  const FiniteSpace& space = alg.finite().space;
  NonexpansivenessReport report;
  for (const auto& decl : sig.ops()) {
    if (decl.arity == 0) continue;
    std::vector<std::vector<std::size_t>> tuples{{}};
    for (std::size_t i = 0; i < decl.arity; ++i) {
      std::vector<std::vector<std::size_t>> next;
      for (const auto& t : tuples)
        for (std::size_t k = 0; k < space.size(); ++k) {
          auto u = t;
          u.push_back(k);
          next.push_back(std::move(u));
        }
      tuples = std::move(next);
    }
    auto as_points = [&](const std::vector<std::size_t>& t) {
      std::vector<std::string> pts;
      for (std::size_t k : t) pts.push_back(space.points()[k]);
      return pts;
    };
    for (const auto& s : tuples)
      for (const auto& t : tuples) {
        Element es, et;
        try {
          std::vector<Element> args_s, args_t;
          for (std::size_t k : s) args_s.emplace_back(space.points()[k]);
          for (std::size_t k : t) args_t.emplace_back(space.points()[k]);
          es = alg.apply(decl.sym, args_s);
          et = alg.apply(decl.sym, args_t);
        } catch (const PartialOperation&) {
          ++report.skipped_partial;
          continue;
        }
        UnitValue actual = alg.distance(es, et);
        UnitValue allowed =
            lift_value(decl.lifting, space, as_points(s), as_points(t));
        if (actual > allowed)
          report.violations.push_back({decl.sym, s, t, actual, allowed});
      }
  }
  return report;
}

Algebra lk_algebra(const FiniteSpace& space) {
  if (space.kind() != MetricKind::named("DMet"))
    throw Error("lk_algebra requires a DMet space, got " + space.kind().str());
  ValidationReport v = validate_space(space);
  if (!v.ok()) throw Error("lk_algebra: base space invalid: " + v.str());

  Algebra::Procedural p;
  p.kind = space.kind();
  p.distance = [space](const Element& a, const Element& b) {
    return lk_distance(space, std::get<Dist>(a), std::get<Dist>(b));
  };
  p.apply = [](const OpSym& op, const std::vector<Element>& args) -> Element {
    if (!op.param || args.size() != 2)
      throw Error("lk_algebra interprets only binary convex operations, not " +
                  op.str());
    return convex_combine(UnitValue(*op.param), std::get<Dist>(args[0]),
                          std::get<Dist>(args[1]));
  };
  p.constant = [](const std::string& atom) -> Element {
    return Dist::dirac(atom);
  };
  std::vector<std::string> atoms = space.points();
  p.sample = [atoms](std::mt19937& rng) -> Element {
    return random_dist(atoms, 24, rng);
  };
  return Algebra(std::move(p));
}

}  // namespace qalg
