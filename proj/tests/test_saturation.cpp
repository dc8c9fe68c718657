#include "qalg/saturation.hpp"

#include "qalg/distributions.hpp"
#include "qalg/fixtures.hpp"
#include "qalg/sampling.hpp"
#include "qalg/theory_file.hpp"

#include <doctest.h>

using namespace qalg;

namespace {

Theory empty_theory_with_constants() {
  Theory th;
  th.kind = MetricKind::named("Met");
  th.sig.add({OpSym{"a", std::nullopt}, 0, Lifting::sup_product(0)});
  th.sig.add({OpSym{"b", std::nullopt}, 0, Lifting::sup_product(0)});
  return th;
}

Term parse_in(const Theory& th, const std::string& text) {
  return parse_term(text, th.sig, th.carrier_set());
}

}  // namespace

TEST_CASE("empty axioms at depth 0: only 1-bdd and reflexivity fire") {
  Theory th = empty_theory_with_constants();
  SaturationResult r = saturate(th, {0, 64, 4096});
  CHECK(r.fixpoint_reached());
  Term a = parse_in(th, "a"), b = parse_in(th, "b");
  CHECK(derived_distance(r, a, b) == UnitValue::one());
  CHECK(derived_distance(r, a, a) == UnitValue::zero());
  CHECK(!same_class(r, a, b));
}

TEST_CASE("the LK theory reproduces the worked 3/4 at depth 1") {
  LoadedTheory lt = fixtures::load("lk_counterexample");
  Theory th = lt.extended();
  SaturationResult r = saturate(th, {1, 64, 4096});
  CHECK(r.fixpoint_reached());
  Term mix = parse_in(th, "plus(1/2; a, b)");
  Term a = parse_in(th, "a");
  Term b = parse_in(th, "b");
  CHECK(derived_distance(r, mix, mix) == UnitValue(3, 4));
  CHECK(derived_distance(r, a, a) == UnitValue(1, 2));
  CHECK(derived_distance(r, a, b) == UnitValue::one());
  CHECK(derived_distance(r, a, b) == derived_distance(r, b, a));

  // Cross-checked against the analytic oracle.
  FiniteSpace space = *lt.space;
  Dist dmix = term_to_distribution(mix, space);
  CHECK(lk_distance(space, dmix, dmix) == UnitValue(3, 4));
  CHECK(r.verify_lne_log() == std::nullopt);
}

TEST_CASE("semilattice congruence merges by rewriting") {
  LoadedTheory lt = fixtures::load("semilattice");
  // Carrier {a}: x v x = x collapses everything at depth 2.
  Theory th = lt.theory;
  FiniteSpace one({"a"}, {{UnitValue::zero()}}, MetricKind::named("Met"));
  th = extend_by_space(th, one);
  SaturationResult r = saturate(th, {2, 64, 4096});
  Term a = parse_in(th, "a");
  Term nested = parse_in(th, "join(a, join(a, a))");
  CHECK(same_class(r, a, nested));
  CHECK(derived_distance(r, a, nested) == UnitValue::zero());
  CHECK(r.classes().size() == 1);
}

TEST_CASE("commutativity instances merge without an explicit axiom instance") {
  LoadedTheory lt = fixtures::load("semilattice");
  Theory th = lt.extended();
  SaturationResult r = saturate(th, {1, 64, 4096});
  CHECK(same_class(r, parse_in(th, "join(a, b)"), parse_in(th, "join(b, a)")));
  CHECK(!same_class(r, parse_in(th, "a"), parse_in(th, "b")));
  // The Met kind forces zero self-distances on classes.
  CHECK(derived_distance(r, parse_in(th, "join(a, b)"),
                         parse_in(th, "join(b, a)")) == UnitValue::zero());
}

TEST_CASE("terms outside the universe are reported") {
  Theory th = empty_theory_with_constants();
  th.sig.add({OpSym{"f", std::nullopt}, 2, Lifting::sup_product(2)});
  SaturationResult r = saturate(th, {0, 64, 4096});
  CHECK_THROWS_AS(derived_distance(r, parse_in(th, "f(a, b)"),
                                   parse_in(th, "a")),
                  Error);
}

TEST_CASE("universe budget is enforced") {
  Theory th = empty_theory_with_constants();
  th.sig.add({OpSym{"f", std::nullopt}, 2, Lifting::sup_product(2)});
  CHECK_THROWS_AS(saturate(th, {3, 64, 10}), Error);
}

TEST_CASE("quotient of the one-point convex theory has one class") {
  LoadedTheory lt = parse_theory_text(
      "kind Met\n"
      "op plus arity 2 lifting kantorovich(p)\n"
      "params plus { 1/2 }\n"
      "option param_closure 0\n"
      "axiom plus(p; x, x) = x\n"
      "space { points a; }\n");
  Theory th = lt.extended();
  SaturationResult r = saturate(th, {1, 64, 4096});
  CHECK(r.classes().size() == 1);
  QuotientAlgebra q = quotient_algebra(r, th);
  CHECK(q.total());
  CHECK(q.algebra.finite().space.size() == 1);
}

TEST_CASE("the depth-1 LK quotient matches the oracle and validates") {
  LoadedTheory lt = fixtures::load("lk_counterexample");
  Theory th = lt.extended();
  SaturationResult r = saturate(th, {1, 64, 4096});
  FiniteSpace space = *lt.space;
  for (int ci : r.classes())
    for (int cj : r.classes()) {
      Dist di = term_to_distribution(r.representative(ci), space);
      Dist dj = term_to_distribution(r.representative(cj), space);
      CHECK(r.dist(ci, cj) == lk_distance(space, di, dj));
    }
  QuotientAlgebra q = quotient_algebra(r, th);
  CHECK(validate_space(q.algebra.finite().space).ok());
}

TEST_CASE("saturation is deterministic") {
  LoadedTheory lt = fixtures::load("lk_counterexample");
  SaturationResult r1 = saturate(lt.extended(), {1, 64, 4096});
  SaturationResult r2 = saturate(lt.extended(), {1, 64, 4096});
  CHECK(r1.dump() == r2.dump());
  CHECK(r1.dump(true) == r2.dump(true));
  CHECK(r1.round_count() == r2.round_count());
}

TEST_CASE("distances never increase across a longer run") {
  LoadedTheory lt = fixtures::load("lk_counterexample");
  SaturationResult tight = saturate(lt.extended(), {2, 64, 4096});
  SaturationResult budget = saturate(lt.extended(), {2, 3, 4096});
  // The short run stops early; every class pair of the longer run is at
  // most the early bound on the corresponding representatives.
  for (int ci : budget.classes())
    for (int cj : budget.classes()) {
      const Term& s = budget.representative(ci);
      const Term& t = budget.representative(cj);
      CHECK(derived_distance(tight, s, t) <= budget.dist(ci, cj));
    }
}

TEST_CASE("the two presentations of the convex theory agree at depth 2") {
  LoadedTheory lifting_form = fixtures::load("convex_kantorovich");
  LoadedTheory rule_form = fixtures::load("convex_kantorovich_rule");
  FiniteSpace space = *lifting_form.space;
  SaturationResult a = saturate(lifting_form.extended(), {2, 64, 4096});
  SaturationResult b = saturate(rule_form.extended(), {2, 64, 4096});
  REQUIRE(a.fixpoint_reached());
  REQUIRE(b.fixpoint_reached());
  REQUIRE(a.classes().size() == b.classes().size());
  for (int ci : a.classes())
    for (int cj : a.classes()) {
      const Term& s = a.representative(ci);
      const Term& t = a.representative(cj);
      UnitValue oracle = kantorovich_distance(
          space, term_to_distribution(s, space), term_to_distribution(t, space));
      CHECK(a.dist(ci, cj) == oracle);
      CHECK(derived_distance(b, s, t) == oracle);
    }
}

TEST_CASE("depth-0 saturation of an extension reproduces a valid matrix") {
  std::mt19937 rng(2);
  for (const char* kind_name : {"Met", "DMet"}) {
    LoadedTheory lt = parse_theory_text(
        std::string("kind ") + kind_name +
        "\nop plus arity 2 lifting " +
        (std::string(kind_name) == "Met" ? "kantorovich(p)" : "lk(p)") +
        "\nparams plus { 1/2 }\noption param_closure 0\n"
        "axiom plus(p; x, x) = x\n");
    for (int i = 0; i < 10; ++i) {
      FiniteSpace space = random_space(MetricKind::named(kind_name), 4, rng);
      Theory th = extend_by_space(lt.theory, space);
      SaturationResult r = saturate(th, {0, 64, 4096});
      REQUIRE(r.classes().size() == space.size());
      for (const auto& x : space.points())
        for (const auto& y : space.points())
          CHECK(derived_distance(r, Term::constant(x), Term::constant(y)) ==
                space.d(x, y));
    }
  }
}

TEST_CASE("closure-expanded parameter sets stay sound upper bounds") {
  // Closing {1/2} one round adds the operations +_{1/4} and +_{1/3}, but
  // the skew-associativity instances that would identify their terms with
  // dyadic ones need parameters outside any finite closure. Distances on
  // such pairs then exceed the free-model values; they may never
  // undershoot them.
  LoadedTheory lt = parse_theory_text(
      "kind DMet\n"
      "op plus arity 2 lifting lk(p)\n"
      "params plus { 1/2 }\n"
      "option param_closure 1\n"
      "axiom plus(p; x, x) = x\n"
      "axiom plus(p; x, y) = plus(1-p; y, x)\n"
      "axiom plus(p; plus(q; x, y), z) = "
      "plus(p*q; x, plus(p*(1-q)/(1-p*q); y, z))\n"
      "space { points a, b; d a a = 1/2; d b b = 1/2; d a b = 1; }\n");
  CHECK(lt.theory.sig.ops().size() == 3);
  Theory th = lt.extended();
  FiniteSpace space = *lt.space;
  SaturationResult r = saturate(th, {2, 64, 4096});
  CHECK(r.fixpoint_reached());
  bool some_slack = false;
  for (int ci : r.classes())
    for (int cj : r.classes()) {
      UnitValue oracle = lk_distance(
          space, term_to_distribution(r.representative(ci), space),
          term_to_distribution(r.representative(cj), space));
      CHECK(r.dist(ci, cj) >= oracle);
      if (r.dist(ci, cj) > oracle) some_slack = true;
    }
  CHECK(some_slack);
}

TEST_CASE("epsilon clamping is reported") {
  LoadedTheory lt = parse_theory_text(
      "kind FRel\n"
      "op c arity 0 lifting sup\n"
      "op d arity 0 lifting sup\n"
      "axiom x =[e1] y, y =[e2] z |- x =[e1 + e2 + 1/2] z\n");
  SaturationResult r = saturate(lt.theory, {0, 8, 4096});
  CHECK(!r.warnings().empty());
}

TEST_CASE("machine-readable dump has one record per line") {
  Theory th = empty_theory_with_constants();
  SaturationResult r = saturate(th, {0, 8, 4096});
  std::string tsv = r.dump(true);
  CHECK(tsv.find("class\t0\ta\n") != std::string::npos);
  CHECK(tsv.find("d\t0\t1\t1\n") != std::string::npos);
}
