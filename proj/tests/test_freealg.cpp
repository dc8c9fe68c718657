#include "qalg/freealg.hpp"

#include "qalg/fixtures.hpp"
#include "qalg/theory_file.hpp"

#include <doctest.h>

using namespace qalg;

namespace {

struct LkSetup {
  Theory theory;
  FiniteSpace space;
  SaturationResult result;
  Algebra model;
};

LkSetup lk_setup(int depth) {
  LoadedTheory lt = fixtures::load("lk_counterexample");
  Theory th = lt.extended();
  return {th, *lt.space, saturate(th, {depth, 64, 4096}),
          lk_algebra(*lt.space)};
}

}  // namespace

TEST_CASE("the unit into the depth-1 LK quotient is an isometry") {
  LkSetup s = lk_setup(1);
  SpaceMap unit = unit_map(s.space, s.result);
  CHECK(unit.is_nonexpansive());
  CHECK(check_isometric_embedding(unit));
  // Self-distances survive the quotient.
  CHECK(unit.dst.d(unit.apply("a"), unit.apply("a")) == UnitValue(1, 2));
}

TEST_CASE("the unit of a one-point space is nonexpansive") {
  LoadedTheory lt = parse_theory_text(
      "kind Met\n"
      "op plus arity 2 lifting kantorovich(p)\n"
      "params plus { 1/2 }\n"
      "option param_closure 0\n"
      "axiom plus(p; x, x) = x\n"
      "space { points a; }\n");
  Theory th = lt.extended();
  SaturationResult r = saturate(th, {1, 64, 4096});
  SpaceMap unit = unit_map(*lt.space, r);
  CHECK(unit.is_nonexpansive());
}

TEST_CASE("evaluation in algebras") {
  LkSetup s = lk_setup(1);
  std::map<std::string, Element> empty;
  CHECK(element_eq(evaluate(Term::constant("a"), s.model, empty),
                   Element(Dist::dirac("a"))));
  Term mix = parse_term("plus(1/2; a, b)", s.theory.sig, s.theory.carrier_set());
  Dist expected = convex_combine(UnitValue(1, 2), Dist::dirac("a"),
                                 Dist::dirac("b"));
  CHECK(element_eq(evaluate(mix, s.model, empty), Element(expected)));
  CHECK_THROWS_AS(evaluate(Term::var("x"), s.model, empty), Error);
}

TEST_CASE("evaluation agrees with term_to_distribution on random terms") {
  LkSetup s = lk_setup(1);
  std::mt19937 rng(71);
  std::uniform_int_distribution<int> pick(0, 3);
  OpSym plus{"plus", Rational(1, 2)};
  std::function<Term(int)> random_convex = [&](int depth) -> Term {
    if (depth == 0 || pick(rng) == 0)
      return Term::constant(pick(rng) % 2 ? "a" : "b");
    return Term::app(plus,
                     {random_convex(depth - 1), random_convex(depth - 1)});
  };
  std::map<std::string, Element> empty;
  for (int i = 0; i < 200; ++i) {
    Term t = random_convex(3);
    CHECK(element_eq(evaluate(t, s.model, empty),
                     Element(term_to_distribution(t, s.space))));
  }
}

TEST_CASE("clauses over an empty carrier hold vacuously") {
  Algebra::Finite empty_algebra;
  Algebra alg(std::move(empty_algebra));
  HornClause clause;
  clause.conclusion = {Term::var("x"), Term::var("y"), false,
                       EpsExpr::constant(0)};
  Verdict v = satisfies(alg, clause, SatisfyMode::exhaustive());
  CHECK(v.holds);
  CHECK(v.vacuous);
}

TEST_CASE("exhaustive satisfaction on finite algebras") {
  LoadedTheory sl = fixtures::load("semilattice");
  Theory th = sl.extended();
  SaturationResult r = saturate(th, {2, 64, 4096});
  QuotientAlgebra q = quotient_algebra(r, th);
  for (const auto& clause : th.axioms) {
    Verdict v = satisfies(q.algebra, clause, SatisfyMode::exhaustive());
    CHECK(v.holds);
  }
  // A false equation has a concrete counterexample.
  HornClause everything_equal;
  everything_equal.conclusion = {Term::var("x"), Term::var("y"), false,
                                 EpsExpr::constant(0)};
  Verdict v = satisfies(q.algebra, everything_equal, SatisfyMode::exhaustive());
  CHECK(!v.holds);
  CHECK(v.counterexample.has_value());
}

TEST_CASE("the trivial upper-bound clause holds everywhere") {
  LkSetup s = lk_setup(1);
  HornClause one_bdd;
  one_bdd.conclusion = {Term::var("x"), Term::var("y"), true,
                        EpsExpr::constant(1)};
  CHECK(satisfies(s.model, one_bdd, SatisfyMode::sampled(200, 5)).holds);
}

TEST_CASE("finite-algebra nonexpansiveness validation") {
  LkSetup s = lk_setup(1);
  QuotientAlgebra q = quotient_algebra(s.result, s.theory);
  NonexpansivenessReport report =
      check_algebra_nonexpansive(q.algebra, s.theory.sig);
  CHECK(report.ok());
}

TEST_CASE("free extension along the Dirac embedding") {
  LkSetup s = lk_setup(1);
  std::map<std::string, Element> dirac{{"a", Dist::dirac("a")},
                                       {"b", Dist::dirac("b")}};
  FreeExtensionReport fx = free_extension(dirac, s.model, s.result);
  CHECK(fx.ok());
  // f*([plus(1/2; a, b)]) is the even mixture.
  int mix_class = s.result.class_of(
      parse_term("plus(1/2; a, b)", s.theory.sig, s.theory.carrier_set()));
  std::size_t pos = 0;
  for (std::size_t k = 0; k < s.result.classes().size(); ++k)
    if (s.result.classes()[k] == mix_class) pos = k;
  CHECK(element_eq(fx.image[pos],
                   Element(convex_combine(UnitValue(1, 2), Dist::dirac("a"),
                                          Dist::dirac("b")))));
  // f* after the unit is f.
  for (const auto& p : s.space.points()) {
    int cls = s.result.class_of(Term::constant(p));
    for (std::size_t k = 0; k < s.result.classes().size(); ++k)
      if (s.result.classes()[k] == cls)
        CHECK(element_eq(fx.image[k], dirac.at(p)));
  }
}

TEST_CASE("unit followed by the free extension of the inclusion recovers it") {
  LkSetup s = lk_setup(1);
  // The quotient itself is a model; extend the inclusion of generators.
  QuotientAlgebra q = quotient_algebra(s.result, s.theory);
  std::map<std::string, Element> inclusion;
  SpaceMap unit = unit_map(s.space, s.result);
  for (const auto& p : s.space.points()) inclusion[p] = unit.apply(p);
  FreeExtensionReport fx = free_extension(inclusion, q.algebra, s.result);
  CHECK(fx.ok());
  for (std::size_t k = 0; k < s.result.classes().size(); ++k)
    CHECK(std::get<std::string>(fx.image[k]) ==
          s.result.representative(s.result.classes()[k]).str());
}

TEST_CASE("map_terms along the identity is the identity") {
  LkSetup s = lk_setup(1);
  std::map<std::string, std::string> id;
  for (const auto& p : s.space.points()) id[p] = p;
  ClassMapReport r = map_terms(SpaceMap(s.space, s.space, id), s.result,
                               s.result);
  CHECK(r.ok());
  for (std::size_t k = 0; k < s.result.classes().size(); ++k)
    CHECK(r.image[k] == s.result.classes()[k]);
}

TEST_CASE("collapsing the carrier collapses depth-1 convex terms") {
  LoadedTheory lt = parse_theory_text(
      "kind Met\n"
      "op plus arity 2 lifting kantorovich(p)\n"
      "params plus { 1/2 }\n"
      "option param_closure 0\n"
      "axiom plus(p; x, x) = x\n"
      "axiom plus(p; x, y) = plus(1-p; y, x)\n"
      "space { points a, b; d a b = 1; }\n");
  Theory th = lt.extended();
  SaturationResult src = saturate(th, {1, 64, 4096});
  FiniteSpace one({"z"}, {{UnitValue::zero()}}, MetricKind::named("Met"));
  Theory th_one = extend_by_space(lt.theory, one);
  SaturationResult dst = saturate(th_one, {1, 64, 4096});
  CHECK(dst.classes().size() == 1);
  ClassMapReport r = map_terms(
      SpaceMap(*lt.space, one, {{"a", "z"}, {"b", "z"}}), src, dst);
  CHECK(r.ok());
  for (const auto& image : r.image) CHECK(*image == dst.classes()[0]);
}

TEST_CASE("soundness of the LK saturation against its free model") {
  LkSetup s = lk_setup(1);
  SoundnessReport report = check_soundness(s.result, s.model);
  CHECK(report.ok());
  CHECK(report.pairs_checked > 0);
}

TEST_CASE("empty-axiom theories are sound against any model") {
  LoadedTheory lt = parse_theory_text(
      "kind DMet\n"
      "op plus arity 2 lifting lk(p)\n"
      "params plus { 1/2 }\n"
      "option param_closure 0\n"
      "space { points a, b; d a a = 1/2; d b b = 1/2; d a b = 1; }\n");
  Theory th = lt.extended();
  SaturationResult r = saturate(th, {1, 64, 4096});
  SoundnessReport report = check_soundness(r, lk_algebra(*lt.space));
  CHECK(report.ok());
}

TEST_CASE("a corrupted distance table is caught") {
  LkSetup s = lk_setup(1);
  int a = s.result.class_of(Term::constant("a"));
  int b = s.result.class_of(Term::constant("b"));
  s.result.override_distance(a, b, UnitValue(1, 4));  // the truth is 1
  SoundnessReport report = check_soundness(s.result, s.model);
  CHECK(!report.ok());
}

TEST_CASE("relabeled quotients carry the class distances") {
  LkSetup s = lk_setup(1);
  auto [space, table] = relabeled_quotient(s.result, "q");
  CHECK(space.size() == s.result.classes().size());
  for (const auto& [name_i, ci] : table)
    for (const auto& [name_j, cj] : table)
      CHECK(space.d(name_i, name_j) == s.result.dist(ci, cj));
}
