#include "qalg/saturation.hpp"

#include <algorithm>
#include <sstream>

namespace qalg {

namespace {

int uf_find(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

std::vector<int> SaturationResult::members(int class_id) const {
  std::vector<int> out;
  auto parent = parent_;
  for (int i = 0; i < static_cast<int>(universe_.size()); ++i)
    if (uf_find(parent, i) == class_id) out.push_back(i);
  return out;
}

int SaturationResult::class_of_index(int universe_index) const {
  auto parent = parent_;
  return uf_find(parent, universe_index);
}

std::optional<int> SaturationResult::try_class_of(const Term& t) const {
  switch (t.kind()) {
    case Term::Kind::Var:
      return std::nullopt;
    case Term::Kind::Const: {
      auto it = term_index_.find(t);
      if (it == term_index_.end()) return std::nullopt;
      return class_of_index(it->second);
    }
    case Term::Kind::App: {
      std::vector<int> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) {
        auto c = try_class_of(a);
        if (!c) return std::nullopt;
        args.push_back(*c);
      }
      auto table = nodes_.find(t.sym());
      if (table == nodes_.end()) return std::nullopt;
      auto it = table->second.find(args);
      if (it == table->second.end()) return std::nullopt;
      return it->second;
    }
  }
  return std::nullopt;
}

int SaturationResult::class_of(const Term& t) const {
  auto c = try_class_of(t);
  if (!c) throw Error("term outside the saturated universe: " + t.str());
  return *c;
}

const UnitValue& SaturationResult::dist(int a, int b) const {
  return dist_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

std::string SaturationResult::dump(bool tsv) const {
  std::ostringstream os;
  std::map<int, int> renumber;
  for (std::size_t k = 0; k < roots_.size(); ++k)
    renumber[roots_[k]] = static_cast<int>(k);
  for (int r : roots_) {
    if (tsv)
      os << "class\t" << renumber[r] << "\t" << representative(r).str() << "\n";
    else
      os << "class " << renumber[r] << ": " << representative(r).str() << "\n";
  }
  for (int a : roots_)
    for (int b : roots_) {
      if (tsv)
        os << "d\t" << renumber[a] << "\t" << renumber[b] << "\t"
           << dist(a, b).str() << "\n";
      else
        os << "d(" << renumber[a] << ", " << renumber[b]
           << ") = " << dist(a, b).str() << "\n";
    }
  return os.str();
}

std::optional<std::string> SaturationResult::verify_lne_log() const {
  for (std::size_t k = 0; k < lne_log_.size(); ++k) {
    const LneApplication& app = lne_log_[k];
    std::vector<std::string> pts;
    for (int c : app.premise_classes) pts.push_back("c" + std::to_string(c));
    FiniteSpace premise(pts, app.premise_matrix, kind_);
    if (!validate_space(premise).ok())
      return "L-NE log entry " + std::to_string(k) + " (op " + app.op.str() +
             ", round " + std::to_string(app.round) +
             ") had an invalid premise space";
  }
  return std::nullopt;
}

UnitValue derived_distance(const SaturationResult& r, const Term& s,
                           const Term& t) {
  return r.dist(r.class_of(s), r.class_of(t));
}

bool same_class(const SaturationResult& r, const Term& s, const Term& t) {
  return r.class_of(s) == r.class_of(t);
}

// ---------------------------------------------------------------------------
// The engine.

class Saturator {
public:
  Saturator(const Theory& th, const SaturationConfig& cfg)
      : th_(th), cfg_(cfg) {}

  SaturationResult run() {
    build_universe();
    init_distances();
    rebuild_nodes();
    std::size_t round = 0;
    bool fixpoint = false;
    while (round < cfg_.max_rounds) {
      ++round;
      changed_ = false;
      round_ = round;
      congruence_close();
      fire_axioms();
      kind_closure();
      lne_pass();
      if (!changed_) {
        fixpoint = true;
        break;
      }
    }
    return finish(fixpoint, round);
  }

private:
  // --- setup ---------------------------------------------------------------

  void build_universe() {
    universe_ = enumerate_ground_terms(th_.sig, th_.carrier, cfg_.depth,
                                       cfg_.materialization_budget);
    n_ = static_cast<int>(universe_.size());
    for (int i = 0; i < n_; ++i) term_index_[universe_[i]] = i;
    parent_.resize(n_);
    for (int i = 0; i < n_; ++i) parent_[i] = i;
  }

  void init_distances() {
    dist_.assign(n_, std::vector<UnitValue>(n_, UnitValue::one()));
    if (th_.kind.has(Axiom::Refl))
      for (int i = 0; i < n_; ++i) dist_[i][i] = UnitValue::zero();
  }

  // --- union-find and congruence -------------------------------------------

  int find(int x) { return uf_find(parent_, x); }

  void merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    int root = std::min(a, b);  // canonical representative: least index
    int gone = std::max(a, b);
    parent_[gone] = root;
    changed_ = true;
    // Representatives are interchangeable: fold rows/columns by minimum.
    UnitValue diag = min(min(dist_[root][root], dist_[gone][gone]),
                         min(dist_[root][gone], dist_[gone][root]));
    for (int x = 0; x < n_; ++x) {
      dist_[root][x] = min(dist_[root][x], dist_[gone][x]);
      dist_[x][root] = min(dist_[x][root], dist_[x][gone]);
    }
    dist_[root][root] = diag;
  }

  void rebuild_nodes() {
    nodes_.clear();
    by_result_.clear();
    for (int i = 0; i < n_; ++i) {
      const Term& t = universe_[i];
      if (!t.is_app()) continue;
      std::vector<int> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(find(term_index_.at(a)));
      nodes_[t.sym()][args] = find(i);
    }
    for (const auto& [sym, table] : nodes_)
      for (const auto& [args, result] : table)
        by_result_[{sym, result}].push_back(&args);
  }

  // Propagates App congruence: equal argument classes force equal results.
  void congruence_close() {
    while (true) {
      std::map<std::pair<OpSym, std::vector<int>>, int> seen;
      std::vector<std::pair<int, int>> pending;
      for (int i = 0; i < n_; ++i) {
        const Term& t = universe_[i];
        if (!t.is_app()) continue;
        std::vector<int> args;
        for (const Term& a : t.args()) args.push_back(find(term_index_.at(a)));
        auto [it, fresh] = seen.emplace(std::make_pair(t.sym(), std::move(args)),
                                        find(i));
        if (!fresh && it->second != find(i)) pending.emplace_back(it->second, i);
      }
      if (pending.empty()) break;
      for (auto [a, b] : pending) merge(a, b);
    }
    rebuild_nodes();
  }

  // --- pattern matching for axiom instantiation ----------------------------

  std::optional<int> eval_pattern(const Term& t,
                                  const std::map<std::string, int>& env) {
    switch (t.kind()) {
      case Term::Kind::Var: {
        auto it = env.find(t.name());
        if (it == env.end()) return std::nullopt;
        return find(it->second);
      }
      case Term::Kind::Const: {
        auto it = term_index_.find(t);
        if (it == term_index_.end()) return std::nullopt;
        return find(it->second);
      }
      case Term::Kind::App: {
        std::vector<int> args;
        for (const Term& a : t.args()) {
          auto c = eval_pattern(a, env);
          if (!c) return std::nullopt;
          args.push_back(*c);
        }
        auto table = nodes_.find(t.sym());
        if (table == nodes_.end()) return std::nullopt;
        auto it = table->second.find(args);
        if (it == table->second.end()) return std::nullopt;
        return it->second;
      }
    }
    return std::nullopt;
  }

  // Matches a pattern against a class, extending env; calls k() for every
  // consistent extension. Continuations are type-erased: the recursion
  // nests them one level per pattern node.
  void match(const Term& pattern, int target, std::map<std::string, int>& env,
             const std::function<void()>& k) {
    target = find(target);
    switch (pattern.kind()) {
      case Term::Kind::Var: {
        auto it = env.find(pattern.name());
        if (it != env.end()) {
          if (find(it->second) == target) k();
          return;
        }
        env[pattern.name()] = target;
        k();
        env.erase(pattern.name());
        return;
      }
      case Term::Kind::Const: {
        auto it = term_index_.find(pattern);
        if (it != term_index_.end() && find(it->second) == target) k();
        return;
      }
      case Term::Kind::App: {
        auto lists = by_result_.find({pattern.sym(), target});
        if (lists == by_result_.end()) return;
        for (const std::vector<int>* args : lists->second)
          match_args(pattern.args(), *args, 0, env, k);
        return;
      }
    }
  }

  void match_args(const std::vector<Term>& patterns,
                  const std::vector<int>& targets, std::size_t i,
                  std::map<std::string, int>& env,
                  const std::function<void()>& k) {
    if (i == patterns.size()) {
      k();
      return;
    }
    match(patterns[i], targets[i], env,
          [&] { match_args(patterns, targets, i + 1, env, k); });
  }

  // Enumerates all bindings of the clause's variables for which every
  // structured (non-variable) term of the clause denotes a class.
  void for_each_binding(
      const HornClause& clause,
      const std::function<void(const std::map<std::string, int>&)>& k) {
    std::vector<const Term*> anchors;
    std::set<std::string> vars;
    auto note = [&](const Term& t) {
      t.collect_vars(vars);
      if (!t.is_var()) anchors.push_back(&t);
    };
    note(clause.conclusion.lhs);
    note(clause.conclusion.rhs);
    for (const auto& p : clause.premises) {
      note(p.lhs);
      note(p.rhs);
    }
    std::stable_sort(anchors.begin(), anchors.end(),
                     [](const Term* a, const Term* b) {
                       return a->depth() > b->depth();
                     });
    std::map<std::string, int> env;
    bind_anchor(clause, anchors, 0, vars, env, k);
  }

  void bind_anchor(
      const HornClause& clause, const std::vector<const Term*>& anchors,
      std::size_t i, const std::set<std::string>& vars,
      std::map<std::string, int>& env,
      const std::function<void(const std::map<std::string, int>&)>& k) {
    if (i == anchors.size()) {
      // Variables not occurring in any structured term range over all
      // classes.
      std::vector<std::string> leftover;
      for (const auto& v : vars)
        if (!env.count(v)) leftover.push_back(v);
      bind_leftover(leftover, 0, env, [&] { k(env); });
      return;
    }
    const Term& t = *anchors[i];
    bool all_bound = true;
    for (const auto& v : t.vars())
      if (!env.count(v)) all_bound = false;
    if (all_bound) {
      if (eval_pattern(t, env))
        bind_anchor(clause, anchors, i + 1, vars, env, k);
      return;
    }
    // Iterate the nodes of the head symbol.
    if (t.is_app()) {
      auto table = nodes_.find(t.sym());
      if (table == nodes_.end()) return;
      // Copy keys: merges are deferred, but lowering callbacks are safe.
      for (const auto& [args, result] : table->second)
        match_args(t.args(), args, 0, env, [&] {
          bind_anchor(clause, anchors, i + 1, vars, env, k);
        });
      return;
    }
    // Constant anchor with no variables: existence is the only constraint.
    if (eval_pattern(t, env))
      bind_anchor(clause, anchors, i + 1, vars, env, k);
  }

  void bind_leftover(const std::vector<std::string>& leftover, std::size_t i,
                     std::map<std::string, int>& env,
                     const std::function<void()>& k) {
    if (i == leftover.size()) {
      k();
      return;
    }
    for (int r = 0; r < n_; ++r) {
      if (find(r) != r) continue;
      env[leftover[i]] = r;
      bind_leftover(leftover, i + 1, env, k);
    }
    env.erase(leftover[i]);
  }

  // --- rule application ----------------------------------------------------

  void lower(int a, int b, const UnitValue& v) {
    a = find(a);
    b = find(b);
    if (v < dist_[a][b]) {
      dist_[a][b] = v;
      changed_ = true;
    }
  }

  void fire_axioms() {
    for (const auto& clause : th_.axioms) {
      std::vector<std::pair<int, int>> pending_merges;
      for_each_binding(clause, [&](const std::map<std::string, int>& env) {
        std::map<std::string, Rational> labels;
        for (const auto& p : clause.premises) {
          auto l = eval_pattern(p.lhs, env);
          auto r = eval_pattern(p.rhs, env);
          if (!l || !r) return;
          switch (p.mode) {
            case Premise::Mode::Equal:
              if (*l != *r) return;
              break;
            case Premise::Mode::BoundedBy:
              if (dist_[*l][*r] > p.bound) return;
              break;
            case Premise::Mode::Bind:
              labels[p.label] = dist_[*l][*r].value();
              break;
          }
        }
        auto cl = eval_pattern(clause.conclusion.lhs, env);
        auto cr = eval_pattern(clause.conclusion.rhs, env);
        if (!cl || !cr) return;
        if (!clause.conclusion.quantitative) {
          if (*cl != *cr) pending_merges.emplace_back(*cl, *cr);
          return;
        }
        Rational eps = clause.conclusion.eps.eval(labels);
        if (eps < 0 || eps > 1) {
          warn("epsilon " + rational_to_string(eps) +
               " outside [0,1] in clause '" + clause.str() +
               "', clamped to 1");
          eps = 1;
        }
        lower(*cl, *cr, UnitValue(eps));
      });
      if (!pending_merges.empty()) {
        for (auto [a, b] : pending_merges) merge(a, b);
        congruence_close();
      }
    }
  }

  void kind_closure() {
    while (true) {
      std::vector<int> roots;
      for (int i = 0; i < n_; ++i)
        if (find(i) == i) roots.push_back(i);

      if (th_.kind.has(Axiom::Sym))
        for (int a : roots)
          for (int b : roots) {
            if (a >= b) continue;
            UnitValue m = min(dist_[a][b], dist_[b][a]);
            if (dist_[a][b] != m || dist_[b][a] != m) {
              dist_[a][b] = m;
              dist_[b][a] = m;
              changed_ = true;
            }
          }

      if (th_.kind.has(Axiom::Tri))
        for (int k : roots)
          for (int a : roots)
            for (int b : roots) {
              Rational cand = dist_[a][k].value() + dist_[k][b].value();
              if (cand < dist_[a][b].value()) {
                dist_[a][b] = UnitValue(cand);
                changed_ = true;
              }
            }

      if (th_.kind.has(Axiom::StrongTri))
        for (int k : roots)
          for (int a : roots)
            for (int b : roots) {
              UnitValue cand = max(dist_[a][k], dist_[k][b]);
              if (cand < dist_[a][b]) {
                dist_[a][b] = cand;
                changed_ = true;
              }
            }

      if (!th_.kind.has(Axiom::IdOfInd)) break;
      std::vector<std::pair<int, int>> zero_pairs;
      for (int a : roots)
        for (int b : roots)
          if (a < b && (dist_[a][b].is_zero() || dist_[b][a].is_zero()))
            zero_pairs.emplace_back(a, b);
      if (zero_pairs.empty()) break;
      for (auto [a, b] : zero_pairs) merge(a, b);
      congruence_close();
    }
  }

  void lne_pass() {
    for (const auto& decl : th_.sig.ops()) {
      if (decl.arity == 0) continue;
      auto table = nodes_.find(decl.sym);
      if (table == nodes_.end()) continue;
      // Node lists are stable during the pass: L-NE only lowers distances.
      std::vector<std::pair<std::vector<int>, int>> nodes(
          table->second.begin(), table->second.end());
      for (const auto& [largs, lres] : nodes)
        for (const auto& [rargs, rres] : nodes)
          apply_lne(decl, largs, lres, rargs, rres);
    }
  }

  void apply_lne(const OpDecl& decl, const std::vector<int>& largs, int lres,
                 const std::vector<int>& rargs, int rres) {
    // Premise space: current distances on the distinct argument classes.
    std::vector<int> carrier;
    for (int c : largs)
      if (std::find(carrier.begin(), carrier.end(), c) == carrier.end())
        carrier.push_back(c);
    for (int c : rargs)
      if (std::find(carrier.begin(), carrier.end(), c) == carrier.end())
        carrier.push_back(c);
    std::sort(carrier.begin(), carrier.end());

    std::vector<std::string> pts;
    pts.reserve(carrier.size());
    for (int c : carrier) pts.push_back("c" + std::to_string(c));
    std::vector<std::vector<UnitValue>> m(carrier.size(),
                                          std::vector<UnitValue>(carrier.size()));
    for (std::size_t i = 0; i < carrier.size(); ++i)
      for (std::size_t j = 0; j < carrier.size(); ++j)
        m[i][j] = dist_[carrier[i]][carrier[j]];
    FiniteSpace premise(pts, m, th_.kind);
    // The rule's proviso: the premise distances form a space of the kind.
    if (!validate_space(premise).ok()) return;

    auto tuple_points = [&](const std::vector<int>& args) {
      std::vector<std::string> out;
      out.reserve(args.size());
      for (int c : args) out.push_back("c" + std::to_string(c));
      return out;
    };
    UnitValue delta = lift_value(decl.lifting, premise, tuple_points(largs),
                                 tuple_points(rargs));
    int a = find(lres), b = find(rres);
    if (delta < dist_[a][b]) {
      dist_[a][b] = delta;
      changed_ = true;
      lne_log_.push_back(
          {decl.sym, largs, rargs, carrier, std::move(m), delta, round_});
    }
  }

  void warn(const std::string& msg) {
    for (const auto& w : warnings_)
      if (w == msg) return;
    warnings_.push_back(msg);
  }

  SaturationResult finish(bool fixpoint, std::size_t rounds) {
    congruence_close();
    SaturationResult r;
    r.universe_ = universe_;
    r.term_index_ = term_index_;
    for (int i = 0; i < n_; ++i) find(i);  // compress paths
    r.parent_ = parent_;
    r.dist_ = dist_;
    for (int i = 0; i < n_; ++i)
      if (find(i) == i) r.roots_.push_back(i);
    r.nodes_ = nodes_;
    r.kind_ = th_.kind;
    r.fixpoint_ = fixpoint;
    r.rounds_ = rounds;
    r.warnings_ = warnings_;
    r.lne_log_ = lne_log_;
    return r;
  }

  const Theory& th_;
  SaturationConfig cfg_;
  std::vector<Term> universe_;
  std::map<Term, int> term_index_;
  std::vector<int> parent_;
  std::vector<std::vector<UnitValue>> dist_;
  std::map<OpSym, std::map<std::vector<int>, int>> nodes_;
  std::map<std::pair<OpSym, int>, std::vector<const std::vector<int>*>>
      by_result_;
  int n_ = 0;
  bool changed_ = false;
  std::size_t round_ = 0;
  std::vector<std::string> warnings_;
  std::vector<LneApplication> lne_log_;
};

SaturationResult saturate(const Theory& th, const SaturationConfig& cfg) {
  check_theory(th);
  return Saturator(th, cfg).run();
}

FiniteSpace quotient_space(const SaturationResult& r) {
  std::vector<std::string> points;
  for (int c : r.classes()) points.push_back(r.representative(c).str());
  std::vector<std::vector<UnitValue>> m(points.size(),
                                        std::vector<UnitValue>(points.size()));
  for (std::size_t i = 0; i < r.classes().size(); ++i)
    for (std::size_t j = 0; j < r.classes().size(); ++j)
      m[i][j] = r.dist(r.classes()[i], r.classes()[j]);
  return FiniteSpace(std::move(points), std::move(m), r.metric_kind());
}

QuotientAlgebra quotient_algebra(const SaturationResult& r, const Theory& th) {
  QuotientAlgebra out{Algebra(Algebra::Finite{}), r.classes(), {}};
  Algebra::Finite fin;
  fin.space = quotient_space(r);
  std::map<int, std::size_t> pos;
  for (std::size_t k = 0; k < r.classes().size(); ++k)
    pos[r.classes()[k]] = k;

  for (const auto& atom : th.carrier) {
    auto c = r.try_class_of(Term::constant(atom));
    if (c) fin.const_table[atom] = pos.at(*c);
  }
  for (const auto& decl : th.sig.ops()) {
    if (decl.arity == 0) {
      auto c = r.try_class_of(Term::app(decl.sym, {}));
      if (c) fin.const_table[decl.sym.family] = pos.at(*c);
      continue;
    }
    std::vector<std::vector<int>> tuples{{}};
    for (std::size_t i = 0; i < decl.arity; ++i) {
      std::vector<std::vector<int>> next;
      for (const auto& t : tuples)
        for (int c : r.classes()) {
          auto u = t;
          u.push_back(c);
          next.push_back(std::move(u));
        }
      tuples = std::move(next);
    }
    for (const auto& t : tuples) {
      std::vector<Term> args;
      for (int c : t) args.push_back(r.representative(c));
      auto res = r.try_class_of(Term::app(decl.sym, args));
      std::vector<std::size_t> key;
      for (int c : t) key.push_back(pos.at(c));
      if (res)
        fin.op_tables[decl.sym][key] = pos.at(*res);
      else
        out.partial.emplace_back(decl.sym, t);
    }
  }
  out.algebra = Algebra(std::move(fin));
  return out;
}

}  // namespace qalg
