#include "qalg/fixtures.hpp"

#include <map>

namespace qalg::fixtures {

namespace {

const char* kSemilattice = R"(# Quantitative semilattices: joins are nonexpansive for the product metric.
kind Met
op join arity 2 lifting sup
axiom join(x, y) = join(y, x)
axiom join(x, x) = x
axiom join(x, join(y, z)) = join(join(x, y), z)
space { points a, b; d a b = 1/2; }
)";

const char* kConvexKantorovich = R"(# Convex algebras with the Kantorovich lifting: the equational axioms
# alone generate the quantitative theory of convex algebras.
kind Met
op plus arity 2 lifting kantorovich(p)
params plus { 1/2 }
option param_closure 0
axiom plus(p; x, x) = x
axiom plus(p; x, y) = plus(1-p; y, x)
axiom plus(p; plus(q; x, y), z) = plus(p*q; x, plus(p*(1-q)/(1-p*q); y, z))
space { points a, b; d a b = 1; }
)";

const char* kConvexKantorovichRule = R"(# The same convex theory presented over the sup lifting, with the
# Kantorovich rule spelled out as an implicational axiom.
kind Met
op plus arity 2 lifting sup
params plus { 1/2 }
option param_closure 0
axiom plus(p; x, x) = x
axiom plus(p; x, y) = plus(1-p; y, x)
axiom plus(p; plus(q; x, y), z) = plus(p*q; x, plus(p*(1-q)/(1-p*q); y, z))
axiom x1 =[e1] y1, x2 =[e2] y2 |- plus(p; x1, x2) =[p*e1 + (1-p)*e2] plus(p; y1, y2)
space { points a, b; d a b = 1; }
)";

const char* kConvexLk = R"(# Convex algebras over diffuse metric spaces with the Lukaszyk-Karmowski
# lifting; the free model is D(A) with the LK distance.
kind DMet
op plus arity 2 lifting lk(p)
params plus { 1/2 }
option param_closure 0
axiom plus(p; x, x) = x
axiom plus(p; x, y) = plus(1-p; y, x)
axiom plus(p; plus(q; x, y), z) = plus(p*q; x, plus(p*(1-q)/(1-p*q); y, z))
)";

const char* kLkCounterexample = R"(# The convex LK theory over the two-point diffuse metric space whose
# mixtures drift apart: self-distances 1/2, cross distance 1.
kind DMet
op plus arity 2 lifting lk(p)
params plus { 1/2 }
option param_closure 0
axiom plus(p; x, x) = x
axiom plus(p; x, y) = plus(1-p; y, x)
axiom plus(p; plus(q; x, y), z) = plus(p*q; x, plus(p*(1-q)/(1-p*q); y, z))
space {
  points a, b;
  d a a = 1/2;
  d b b = 1/2;
  d a b = 1;
}
)";

const char* kDiscrete = R"(# Two constants and one binary operation, all carrying the discrete
# lifting; no axioms. Saturation can never move a distance below 1.
kind Met
op a arity 0 lifting discrete
op b arity 0 lifting discrete
op f arity 2 lifting discrete
)";

const std::map<std::string, const char*>& table() {
  static const std::map<std::string, const char*> t = {
      {"semilattice", kSemilattice},
      {"convex_kantorovich", kConvexKantorovich},
      {"convex_kantorovich_rule", kConvexKantorovichRule},
      {"convex_lk", kConvexLk},
      {"lk_counterexample", kLkCounterexample},
      {"discrete", kDiscrete},
  };
  return t;
}

}  // namespace

const std::vector<std::string>& names() {
  static const std::vector<std::string> n = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : table()) out.push_back(name);
    return out;
  }();
  return n;
}

const std::string& text(const std::string& name) {
  static std::map<std::string, std::string> cache;
  auto it = table().find(name);
  if (it == table().end()) throw Error("unknown fixture '" + name + "'");
  return cache.emplace(name, it->second).first->second;
}

LoadedTheory load(const std::string& name) {
  return parse_theory_text(text(name));
}

FiniteSpace lk_counterexample_space() {
  LoadedTheory lt = load("lk_counterexample");
  return *lt.space;
}

}  // namespace qalg::fixtures
