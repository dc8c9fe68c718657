#include "qalg/theory_file.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace qalg {

namespace {

// ---------------------------------------------------------------------------
// Tiny expression language shared by parameter slots, lifting literals and
// epsilon annotations: rationals, identifiers, + - * / and parentheses.

struct FExpr {
  enum class K { Const, Ref, Add, Sub, Mul, Div };
  K k = K::Const;
  Rational value;
  std::string ref;
  std::vector<FExpr> kids;

  void refs(std::set<std::string>& out) const {
    if (k == K::Ref) out.insert(ref);
    for (const auto& c : kids) c.refs(out);
  }

  Rational eval(const std::map<std::string, Rational>& env, int line) const {
    switch (k) {
      case K::Const:
        return value;
      case K::Ref: {
        auto it = env.find(ref);
        if (it == env.end())
          throw ParseError("unknown name '" + ref + "' in expression", line);
        return it->second;
      }
      case K::Add:
        return kids[0].eval(env, line) + kids[1].eval(env, line);
      case K::Sub:
        return kids[0].eval(env, line) - kids[1].eval(env, line);
      case K::Mul:
        return kids[0].eval(env, line) * kids[1].eval(env, line);
      case K::Div: {
        Rational d = kids[1].eval(env, line);
        if (d == 0) throw ParseError("division by zero in expression", line);
        return kids[0].eval(env, line) / d;
      }
    }
    throw ParseError("unreachable expression node", line);
  }
};

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;
  int line;

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c, const char* where) {
    if (!eat(c))
      throw ParseError(std::string("expected '") + c + "' in " + where, line);
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_' || text[pos] == '.'))
      ++pos;
    if (start == pos)
      throw ParseError("expected identifier at '" +
                           text.substr(pos, 8) + "'",
                       line);
    return text.substr(start, pos - start);
  }
  Rational number() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (pos < text.size() && text[pos] == '/') {
      ++pos;
      while (pos < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[pos])))
        ++pos;
    }
    return parse_rational(text.substr(start, pos - start));
  }
};

FExpr parse_expr(Cursor& c);

FExpr parse_factor(Cursor& c) {
  if (c.eat('(')) {
    FExpr e = parse_expr(c);
    c.expect(')', "expression");
    return e;
  }
  FExpr e;
  if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
    e.k = FExpr::K::Const;
    e.value = c.number();
  } else {
    e.k = FExpr::K::Ref;
    e.ref = c.ident();
  }
  return e;
}

FExpr parse_term_expr(Cursor& c) {
  FExpr e = parse_factor(c);
  while (true) {
    char op = c.peek();
    if (op != '*' && op != '/') return e;
    c.eat(op);
    FExpr rhs = parse_factor(c);
    FExpr parent;
    parent.k = op == '*' ? FExpr::K::Mul : FExpr::K::Div;
    parent.kids = {std::move(e), std::move(rhs)};
    e = std::move(parent);
  }
}

FExpr parse_expr(Cursor& c) {
  FExpr e = parse_term_expr(c);
  while (true) {
    char op = c.peek();
    if (op != '+' && op != '-') return e;
    c.eat(op);
    FExpr rhs = parse_term_expr(c);
    FExpr parent;
    parent.k = op == '+' ? FExpr::K::Add : FExpr::K::Sub;
    parent.kids = {std::move(e), std::move(rhs)};
    e = std::move(parent);
  }
}

// Folds an expression (metavariables already substituted) into a monotone
// EpsExpr: labels may only sit under + and *.
EpsExpr to_eps(const FExpr& e, const std::map<std::string, Rational>& params,
               int line) {
  std::set<std::string> rs;
  e.refs(rs);
  bool constant = true;
  for (const auto& r : rs)
    if (!params.count(r)) constant = false;
  if (constant) return EpsExpr::constant(e.eval(params, line));
  switch (e.k) {
    case FExpr::K::Ref:
      return EpsExpr::label(e.ref);
    case FExpr::K::Add:
      return EpsExpr::add(to_eps(e.kids[0], params, line),
                          to_eps(e.kids[1], params, line));
    case FExpr::K::Mul:
      return EpsExpr::mul(to_eps(e.kids[0], params, line),
                          to_eps(e.kids[1], params, line));
    default:
      throw ParseError(
          "premise labels may only appear under + and * in an epsilon "
          "expression",
          line);
  }
}

// ---------------------------------------------------------------------------
// Schema terms: concrete terms with expressions in the parameter slot.

struct STerm {
  bool is_app = false;
  std::string name;  // identifier or operation family
  std::optional<FExpr> param;
  std::vector<STerm> args;

  void collect_param_refs(std::set<std::string>& out) const {
    if (param) param->refs(out);
    for (const auto& a : args) a.collect_param_refs(out);
  }
};

STerm parse_sterm(Cursor& c) {
  STerm t;
  t.name = c.ident();
  if (c.peek() != '(') return t;
  c.eat('(');
  t.is_app = true;
  // Try an expression followed by ';' -- the parameter slot.
  std::size_t saved = c.pos;
  try {
    FExpr e = parse_expr(c);
    if (c.eat(';'))
      t.param = std::move(e);
    else
      c.pos = saved;
  } catch (const ParseError&) {
    c.pos = saved;
  }
  if (c.eat(')')) return t;
  while (true) {
    t.args.push_back(parse_sterm(c));
    if (c.eat(')')) return t;
    c.expect(',', "argument list");
  }
}

struct SAtom {
  STerm lhs, rhs;
  bool quantitative = false;
  std::optional<FExpr> eps;
};

struct SClause {
  std::vector<SAtom> premises;
  SAtom conclusion;
  int line;
};

SAtom parse_satom(Cursor& c) {
  SAtom a;
  a.lhs = parse_sterm(c);
  c.expect('=', "equation");
  if (c.eat('[')) {
    a.quantitative = true;
    a.eps = parse_expr(c);
    c.expect(']', "epsilon annotation");
  }
  a.rhs = parse_sterm(c);
  return a;
}

SClause parse_sclause(const std::string& text, int line) {
  SClause clause;
  clause.line = line;
  std::size_t bar = text.find("|-");
  std::string premise_part, conclusion_part;
  if (bar == std::string::npos) {
    conclusion_part = text;
  } else {
    premise_part = text.substr(0, bar);
    conclusion_part = text.substr(bar + 2);
  }
  Cursor pc{premise_part, 0, line};
  if (!pc.at_end())
    while (true) {
      clause.premises.push_back(parse_satom(pc));
      if (pc.at_end()) break;
      pc.expect(',', "premise list");
    }
  Cursor cc{conclusion_part, 0, line};
  clause.conclusion = parse_satom(cc);
  if (!cc.at_end())
    throw ParseError("trailing input after conclusion", line);
  return clause;
}

// ---------------------------------------------------------------------------

struct OpLine {
  std::string family;
  std::size_t arity;
  std::string lifting_text;
  int line;
};

Lifting parse_lifting_literal(const std::string& text, std::size_t arity,
                              const std::map<std::string, Rational>& env,
                              int line) {
  Cursor c{text, 0, line};
  std::string head = c.ident();
  auto one_param = [&]() {
    c.expect('(', "lifting literal");
    FExpr e = parse_expr(c);
    c.expect(')', "lifting literal");
    return UnitValue(e.eval(env, line));
  };
  Lifting out = [&] {
    if (head == "sup") return Lifting::sup_product(arity);
    if (head == "discrete") return Lifting::discrete(arity);
    if (head == "identity") return Lifting::identity();
    if (head == "scaled") return Lifting::scaled(one_param());
    if (head == "kantorovich") return Lifting::kantorovich(one_param());
    if (head == "lk") return Lifting::lukaszyk_karmowski(one_param());
    throw ParseError("unknown lifting '" + head + "'", line);
  }();
  if (!c.at_end())
    throw ParseError("trailing input after lifting literal", line);
  if (out.arity() != arity)
    throw ParseError("lifting " + out.str() + " has arity " +
                         std::to_string(out.arity()) + ", operation declares " +
                         std::to_string(arity),
                     line);
  return out;
}

FiniteSpace parse_space_block(const std::string& body, const MetricKind& kind,
                              int line) {
  std::vector<std::string> points;
  std::map<std::pair<std::string, std::string>, UnitValue> entries;
  std::stringstream ss(body);
  std::string stmt;
  while (std::getline(ss, stmt, ';')) {
    Cursor c{stmt, 0, line};
    if (c.at_end()) continue;
    std::string head = c.ident();
    if (head == "points") {
      while (true) {
        points.push_back(c.ident());
        if (c.at_end()) break;
        c.expect(',', "point list");
      }
    } else if (head == "d") {
      std::string a = c.ident();
      std::string b = c.ident();
      c.expect('=', "distance entry");
      UnitValue v(c.number());
      if (!c.at_end())
        throw ParseError("trailing input after distance entry", line);
      entries[{a, b}] = v;
    } else {
      throw ParseError("unknown space statement '" + head + "'", line);
    }
  }
  if (points.empty()) throw ParseError("space block declares no points", line);
  std::set<std::string> point_set(points.begin(), points.end());
  for (const auto& [key, v] : entries)
    if (!point_set.count(key.first) || !point_set.count(key.second))
      throw ParseError("distance entry names unknown point '" + key.first +
                           "' or '" + key.second + "'",
                       line);
  // Symmetric completion, then defaults.
  if (kind.has(Axiom::Sym))
    for (const auto& a : points)
      for (const auto& b : points) {
        auto fwd = entries.find({a, b});
        if (fwd != entries.end() && !entries.count({b, a}))
          entries[{b, a}] = fwd->second;
      }
  std::vector<std::vector<UnitValue>> m(points.size(),
                                        std::vector<UnitValue>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j) {
      auto it = entries.find({points[i], points[j]});
      if (it != entries.end())
        m[i][j] = it->second;
      else if (i == j)
        m[i][j] = kind.has(Axiom::Refl) ? UnitValue::zero() : UnitValue::one();
      else
        m[i][j] = UnitValue::one();
    }
  return FiniteSpace(points, std::move(m), kind);
}

// Resolves a schema term under a metavariable assignment; nullopt when an
// instantiated operation is not in the signature (incomplete closure).
std::optional<Term> instantiate(const STerm& t, const Signature& sig,
                                const std::set<std::string>& atoms,
                                const std::map<std::string, Rational>& env,
                                int line) {
  if (!t.is_app) {
    OpSym nullary{t.name, std::nullopt};
    if (sig.find(nullary)) return Term::app(nullary, {});
    if (atoms.count(t.name)) return Term::constant(t.name);
    return Term::var(t.name);
  }
  std::optional<Rational> param;
  if (t.param) param = t.param->eval(env, line);
  OpSym sym{t.name, param};
  const OpDecl* decl = sig.find(sym);
  if (!decl) {
    if (!sig.has_family(t.name))
      throw ParseError("unknown operation '" + t.name + "'", line);
    return std::nullopt;  // family exists, this parameter does not
  }
  if (decl->arity != t.args.size())
    throw ParseError("operation " + sym.str() + " expects " +
                         std::to_string(decl->arity) + " arguments",
                     line);
  std::vector<Term> args;
  for (const auto& a : t.args) {
    auto sub = instantiate(a, sig, atoms, env, line);
    if (!sub) return std::nullopt;
    args.push_back(*sub);
  }
  return Term::app(sym, std::move(args));
}

}  // namespace

LoadedTheory parse_theory_text(const std::string& text) {
  std::optional<MetricKind> kind;
  std::vector<OpLine> op_lines;
  std::map<std::string, std::vector<Rational>> family_params;
  std::vector<std::pair<std::string, int>> axiom_lines;
  std::optional<std::string> space_body;
  int space_line = 0;
  int closure_rounds = 1;

  std::stringstream ss(text);
  std::string raw;
  int lineno = 0;
  bool in_space = false;
  std::string space_acc;
  auto consume_space_chunk = [&](const std::string& chunk) {
    std::size_t close = chunk.find('}');
    if (close == std::string::npos) {
      space_acc += chunk + "\n";
      return;
    }
    space_acc += chunk.substr(0, close);
    Cursor rest{chunk, close + 1, lineno};
    if (!rest.at_end())
      throw ParseError("trailing input after space block", lineno);
    space_body = space_acc;
    in_space = false;
  };
  while (std::getline(ss, raw)) {
    ++lineno;
    std::string lineText = raw.substr(0, raw.find('#'));
    if (in_space) {
      consume_space_chunk(lineText);
      continue;
    }
    Cursor c{lineText, 0, lineno};
    if (c.at_end()) continue;
    std::string head = c.ident();
    if (head == "kind") {
      if (kind) throw ParseError("duplicate kind directive", lineno);
      kind = MetricKind::named(c.ident());
      if (!c.at_end()) throw ParseError("trailing input after kind", lineno);
    } else if (head == "op") {
      OpLine op;
      op.family = c.ident();
      if (c.ident() != "arity")
        throw ParseError("expected 'arity' in op directive", lineno);
      Rational n = c.number();
      using boost::multiprecision::denominator;
      using boost::multiprecision::numerator;
      if (denominator(n) != 1 || n < 0)
        throw ParseError("arity must be a natural number", lineno);
      op.arity = static_cast<std::size_t>(numerator(n).convert_to<unsigned>());
      if (c.ident() != "lifting")
        throw ParseError("expected 'lifting' in op directive", lineno);
      c.skip_ws();
      op.lifting_text = lineText.substr(c.pos);
      op.line = lineno;
      op_lines.push_back(std::move(op));
    } else if (head == "params") {
      std::string family = c.ident();
      c.expect('{', "params directive");
      std::vector<Rational> ps;
      while (true) {
        ps.push_back(c.number());
        if (c.eat('}')) break;
        c.expect(',', "parameter list");
      }
      if (!c.at_end()) throw ParseError("trailing input after params", lineno);
      family_params[family] = std::move(ps);
    } else if (head == "option") {
      std::string name = c.ident();
      if (name == "param_closure") {
        Rational n = c.number();
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        if (denominator(n) != 1 || n < 0)
          throw ParseError("param_closure must be a natural number", lineno);
        closure_rounds = numerator(n).convert_to<int>();
      } else {
        throw ParseError("unknown option '" + name + "'", lineno);
      }
    } else if (head == "axiom") {
      c.skip_ws();
      axiom_lines.emplace_back(lineText.substr(c.pos), lineno);
    } else if (head == "space") {
      c.expect('{', "space directive");
      in_space = true;
      space_line = lineno;
      space_acc.clear();
      consume_space_chunk(lineText.substr(c.pos));
    } else {
      throw ParseError("unknown directive '" + head + "'", lineno);
    }
  }
  if (in_space) throw ParseError("unterminated space block", space_line);
  if (!kind) throw ParseError("theory file declares no kind", lineno);

  LoadedTheory out;
  out.theory.kind = *kind;
  out.param_closure_rounds = closure_rounds;

  // Parameter closure, then signature instantiation.
  std::map<std::string, ParamClosure> closed;
  for (const auto& [family, ps] : family_params)
    closed[family] = close_params(ps, closure_rounds);
  for (const auto& op : op_lines) {
    auto fam = closed.find(op.family);
    if (fam == closed.end()) {
      Lifting l = parse_lifting_literal(op.lifting_text, op.arity, {}, op.line);
      out.theory.sig.add({OpSym{op.family, std::nullopt}, op.arity, l});
    } else {
      for (const Rational& p : fam->second.params) {
        Lifting l = parse_lifting_literal(op.lifting_text, op.arity,
                                          {{"p", p}}, op.line);
        out.theory.sig.add({OpSym{op.family, p}, op.arity, l});
      }
      if (!fam->second.complete) out.theory.param_closure_complete = false;
    }
  }
  for (const auto& [family, ps] : family_params)
    if (!out.theory.sig.has_family(family))
      throw ParseError("params declared for undeclared operation '" + family +
                       "'");

  if (space_body) out.space = parse_space_block(*space_body, *kind, space_line);
  std::set<std::string> atoms = out.atom_set();

  // The metavariable universe: every closed parameter of every family.
  std::set<Rational> all_params;
  for (const auto& [family, pc] : closed)
    all_params.insert(pc.params.begin(), pc.params.end());

  std::set<std::string> emitted;
  for (const auto& [clause_text, clause_line] : axiom_lines) {
    SClause schema = parse_sclause(clause_text, clause_line);
    std::set<std::string> metavars;
    schema.conclusion.lhs.collect_param_refs(metavars);
    schema.conclusion.rhs.collect_param_refs(metavars);
    for (const auto& p : schema.premises) {
      p.lhs.collect_param_refs(metavars);
      p.rhs.collect_param_refs(metavars);
    }
    std::vector<std::string> mv(metavars.begin(), metavars.end());
    if (!mv.empty() && all_params.empty())
      throw ParseError("axiom uses parameter metavariables but no params are "
                       "declared",
                       clause_line);

    std::vector<std::map<std::string, Rational>> assignments{{}};
    for (const auto& v : mv) {
      std::vector<std::map<std::string, Rational>> next;
      for (const auto& env : assignments)
        for (const Rational& p : all_params) {
          auto e = env;
          e[v] = p;
          next.push_back(std::move(e));
        }
      assignments = std::move(next);
    }

    for (const auto& env : assignments) {
      auto build_atom = [&](const SAtom& a, bool is_premise)
          -> std::optional<std::pair<Premise, Conclusion>> {
        auto lhs = instantiate(a.lhs, out.theory.sig, atoms, env, clause_line);
        auto rhs = instantiate(a.rhs, out.theory.sig, atoms, env, clause_line);
        if (!lhs || !rhs) return std::nullopt;
        Premise prem{*lhs, *rhs, Premise::Mode::Equal, UnitValue::zero(), ""};
        Conclusion conc{*lhs, *rhs, a.quantitative, EpsExpr::constant(0)};
        if (a.quantitative) {
          std::set<std::string> rs;
          a.eps->refs(rs);
          bool constant = true;
          for (const auto& r : rs)
            if (!env.count(r)) constant = false;
          if (is_premise) {
            if (constant) {
              prem.mode = Premise::Mode::BoundedBy;
              prem.bound = UnitValue(a.eps->eval(env, clause_line));
            } else if (a.eps->k == FExpr::K::Ref) {
              prem.mode = Premise::Mode::Bind;
              prem.label = a.eps->ref;
            } else {
              throw ParseError(
                  "a premise epsilon must be a constant or a bare label",
                  clause_line);
            }
          } else {
            conc.eps = to_eps(*a.eps, env, clause_line);
          }
        } else if (is_premise) {
          prem.mode = Premise::Mode::Equal;
        }
        return std::make_pair(std::move(prem), std::move(conc));
      };

      HornClause clause;
      bool viable = true;
      for (const auto& p : schema.premises) {
        auto built = build_atom(p, true);
        if (!built) {
          viable = false;
          break;
        }
        clause.premises.push_back(built->first);
      }
      if (!viable) continue;
      auto built = build_atom(schema.conclusion, false);
      if (!built) continue;
      clause.conclusion = built->second;
      if (emitted.insert(clause.str()).second)
        out.theory.axioms.push_back(std::move(clause));
    }
  }
  return out;
}

LoadedTheory load_theory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open theory file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_theory_text(buffer.str());
}

Dist parse_dist_literal(const std::string& text) {
  Cursor c{text, 0, 0};
  c.expect('{', "distribution literal");
  std::map<std::string, Rational> w;
  while (true) {
    std::string atom = c.ident();
    c.expect(':', "distribution literal");
    w[atom] += c.number();
    if (c.eat('}')) break;
    c.expect(',', "distribution literal");
  }
  if (!c.at_end())
    throw ParseError("trailing input after distribution literal");
  return Dist::from_weights(std::move(w));
}

}  // namespace qalg
