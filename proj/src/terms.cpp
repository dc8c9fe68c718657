#include "qalg/terms.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace qalg {

void Signature::add(OpDecl decl) {
  if (decl.lifting.arity() != decl.arity)
    throw Error("op " + decl.sym.str() + ": lifting arity " +
                std::to_string(decl.lifting.arity()) +
                " does not match declared arity " + std::to_string(decl.arity));
  if (find(decl.sym))
    throw Error("duplicate operation symbol " + decl.sym.str());
  ops_.push_back(std::move(decl));
  std::sort(ops_.begin(), ops_.end(),
            [](const OpDecl& a, const OpDecl& b) { return a.sym < b.sym; });
}

const OpDecl* Signature::find(const OpSym& sym) const {
  for (const auto& d : ops_)
    if (d.sym == sym) return &d;
  return nullptr;
}

const OpDecl& Signature::require(const OpSym& sym) const {
  const OpDecl* d = find(sym);
  if (!d) throw Error("unknown operation symbol " + sym.str());
  return *d;
}

bool Signature::has_family(const std::string& family) const {
  for (const auto& d : ops_)
    if (d.sym.family == family) return true;
  return false;
}

std::vector<Rational> Signature::family_params(const std::string& family) const {
  std::vector<Rational> out;
  for (const auto& d : ops_)
    if (d.sym.family == family && d.sym.param) out.push_back(*d.sym.param);
  return out;
}

ParamClosure close_params(std::vector<Rational> initial, int rounds) {
  std::set<Rational> set(initial.begin(), initial.end());
  for (const Rational& p : set)
    if (p <= 0 || p >= 1) throw Error("family parameter outside (0,1)");
  bool complete = true;
  for (int r = 0; r < rounds + 1; ++r) {
    std::set<Rational> next = set;
    for (const Rational& p : set)
      for (const Rational& q : set) {
        next.insert(p * q);
        next.insert(p * (1 - q) / (1 - p * q));
      }
    if (next == set) break;
    if (r == rounds) {
      // One further round would still grow the set.
      complete = false;
      break;
    }
    set = std::move(next);
  }
  return {std::vector<Rational>(set.begin(), set.end()), complete};
}

Term Term::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::constant(std::string atom) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->name = std::move(atom);
  return Term(std::move(n));
}

Term Term::app(OpSym sym, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->sym = std::move(sym);
  int d = 0;
  for (const Term& a : args) d = std::max(d, a.depth());
  n->depth = d + (args.empty() ? 0 : 1);
  n->args = std::move(args);
  return Term(std::move(n));
}

std::string Term::str() const {
  switch (kind()) {
    case Kind::Var:
    case Kind::Const:
      return name();
    case Kind::App: {
      if (args().empty()) return sym().family;
      std::ostringstream os;
      os << sym().family << "(";
      if (sym().param) os << rational_to_string(*sym().param) << "; ";
      for (std::size_t i = 0; i < args().size(); ++i) {
        if (i) os << ", ";
        os << args()[i].str();
      }
      os << ")";
      return os.str();
    }
  }
  return "?";
}

int Term::compare(const Term& o) const {
  if (node_ == o.node_) return 0;
  if (depth() != o.depth()) return depth() < o.depth() ? -1 : 1;
  auto rank = [](Kind k) {
    return k == Kind::Const ? 0 : (k == Kind::Var ? 1 : 2);
  };
  if (rank(kind()) != rank(o.kind()))
    return rank(kind()) < rank(o.kind()) ? -1 : 1;
  if (kind() != Kind::App)
    return name() < o.name() ? -1 : (name() == o.name() ? 0 : 1);
  if (sym() != o.sym()) return sym() < o.sym() ? -1 : 1;
  if (args().size() != o.args().size())
    return args().size() < o.args().size() ? -1 : 1;
  for (std::size_t i = 0; i < args().size(); ++i) {
    int c = args()[i].compare(o.args()[i]);
    if (c != 0) return c;
  }
  return 0;
}

bool Term::operator==(const Term& o) const { return compare(o) == 0; }

void Term::collect_vars(std::set<std::string>& out) const {
  if (is_var()) {
    out.insert(name());
  } else if (is_app()) {
    for (const Term& a : args()) a.collect_vars(out);
  }
}

std::set<std::string> Term::vars() const {
  std::set<std::string> out;
  collect_vars(out);
  return out;
}

Term substitute(const Term& t, const std::map<std::string, Term>& mapping) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = mapping.find(t.name());
      return it == mapping.end() ? t : it->second;
    }
    case Term::Kind::Const:
      return t;
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(substitute(a, mapping));
      return Term::app(t.sym(), std::move(args));
    }
  }
  throw Error("unreachable term kind");
}

std::vector<Term> enumerate_ground_terms(const Signature& sig,
                                         const std::vector<std::string>& carrier,
                                         int depth, std::size_t budget) {
  if (depth < 0) throw Error("negative depth");
  std::vector<Term> all;
  auto guard = [&] {
    if (all.size() > budget)
      throw Error("term universe exceeds budget of " + std::to_string(budget));
  };
  for (const auto& a : carrier) all.push_back(Term::constant(a));
  for (const auto& d : sig.ops())
    if (d.arity == 0) all.push_back(Term::app(d.sym, {}));
  guard();

  std::size_t level_begin = 0;  // terms of the previous depth band
  for (int lvl = 1; lvl <= depth; ++lvl) {
    std::size_t level_end = all.size();
    std::vector<Term> fresh;
    for (const auto& d : sig.ops()) {
      if (d.arity == 0 || level_end == 0) continue;
      // Argument tuples over terms of depth < lvl with at least one
      // argument from the newest band, so each term is generated once.
      std::vector<std::size_t> idx(d.arity, 0);
      while (true) {
        bool has_new = false;
        for (std::size_t i : idx)
          if (i >= level_begin) has_new = true;
        if (has_new || lvl == 1) {
          std::vector<Term> args;
          args.reserve(d.arity);
          for (std::size_t i : idx) args.push_back(all[i]);
          fresh.push_back(Term::app(d.sym, std::move(args)));
          if (all.size() + fresh.size() > budget)
            throw Error("term universe exceeds budget of " +
                        std::to_string(budget));
        }
        std::size_t k = 0;
        for (; k < idx.size(); ++k) {
          if (++idx[k] < level_end) break;
          idx[k] = 0;
        }
        if (k == idx.size()) break;
      }
    }
    level_begin = level_end;
    all.insert(all.end(), fresh.begin(), fresh.end());
    guard();
  }
  std::sort(all.begin(), all.end());
  return all;
}

namespace {

struct TermLexer {
  std::string text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
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
  void expect(char c) {
    if (!eat(c))
      throw ParseError(std::string("expected '") + c + "' in term at offset " +
                       std::to_string(pos));
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_' || text[pos] == '.'))
      ++pos;
    if (start == pos)
      throw ParseError("expected identifier in term at offset " +
                       std::to_string(pos));
    return text.substr(start, pos - start);
  }
  std::string number() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '/'))
      ++pos;
    return text.substr(start, pos - start);
  }
};

Term parse_term_inner(TermLexer& lex, const Signature& sig,
                      const std::set<std::string>& carrier) {
  std::string id = lex.ident();
  if (lex.peek() != '(') {
    OpSym nullary{id, std::nullopt};
    if (sig.find(nullary)) return Term::app(nullary, {});
    if (carrier.count(id)) return Term::constant(id);
    return Term::var(id);
  }
  lex.expect('(');
  std::optional<Rational> param;
  if (std::isdigit(static_cast<unsigned char>(lex.peek()))) {
    // Could be a parameter "1/2;" or nothing (identifiers cannot start
    // with a digit, so a digit here must start a parameter).
    param = parse_rational(lex.number());
    lex.expect(';');
  }
  OpSym sym{id, param};
  const OpDecl& decl = sig.require(sym);
  std::vector<Term> args;
  if (!lex.eat(')')) {
    while (true) {
      args.push_back(parse_term_inner(lex, sig, carrier));
      if (lex.eat(')')) break;
      lex.expect(',');
    }
  }
  if (args.size() != decl.arity)
    throw ParseError("operation " + sym.str() + " expects " +
                     std::to_string(decl.arity) + " arguments, got " +
                     std::to_string(args.size()));
  return Term::app(sym, std::move(args));
}

}  // namespace

Term parse_term(const std::string& text, const Signature& sig,
                const std::set<std::string>& carrier_atoms) {
  TermLexer lex{text};
  Term t = parse_term_inner(lex, sig, carrier_atoms);
  if (!lex.at_end())
    throw ParseError("trailing input after term: '" + text.substr(lex.pos) +
                     "'");
  return t;
}

}  // namespace qalg
