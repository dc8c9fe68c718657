#include "qalg/theory.hpp"

#include "qalg/fixtures.hpp"

#include <doctest.h>

using namespace qalg;

TEST_CASE("extending by the two-point diffuse space adds four axioms") {
  LoadedTheory lt = fixtures::load("convex_lk");
  FiniteSpace space = fixtures::lk_counterexample_space();
  std::size_t before = lt.theory.axioms.size();
  Theory extended = extend_by_space(lt.theory, space);
  REQUIRE(extended.axioms.size() == before + 4);
  CHECK(extended.carrier == std::vector<std::string>{"a", "b"});

  bool found_self = false;
  for (std::size_t i = before; i < extended.axioms.size(); ++i) {
    const HornClause& h = extended.axioms[i];
    CHECK(h.premises.empty());
    CHECK(h.conclusion.quantitative);
    if (h.conclusion.lhs == Term::constant("a") &&
        h.conclusion.rhs == Term::constant("a")) {
      CHECK(h.conclusion.eps.eval({}) == Rational(1, 2));
      found_self = true;
    }
  }
  CHECK(found_self);
  check_theory(extended);
}

TEST_CASE("extending by a one-point Met space adds one axiom") {
  Theory th;
  th.kind = MetricKind::named("Met");
  FiniteSpace one({"a"}, {{UnitValue::zero()}}, th.kind);
  Theory extended = extend_by_space(th, one);
  REQUIRE(extended.axioms.size() == 1);
  CHECK(extended.axioms[0].conclusion.eps.eval({}) == Rational(0));
}

TEST_CASE("extension rejects kind mismatch and name collisions") {
  LoadedTheory lt = fixtures::load("convex_lk");
  FiniteSpace met({"a"}, {{UnitValue::zero()}}, MetricKind::named("Met"));
  CHECK_THROWS_AS(extend_by_space(lt.theory, met), Error);

  FiniteSpace space = fixtures::lk_counterexample_space();
  Theory once = extend_by_space(lt.theory, space);
  CHECK_THROWS_AS(extend_by_space(once, space), Error);

  FiniteSpace clash({"plus"}, {{UnitValue(1, 2)}}, MetricKind::named("DMet"));
  CHECK_THROWS_AS(extend_by_space(lt.theory, clash), Error);
}

TEST_CASE("check_basic") {
  Term x1 = Term::var("x1"), y1 = Term::var("y1");
  Term x2 = Term::var("x2"), y2 = Term::var("y2");
  OpSym plus{"plus", Rational(1, 2)};

  HornClause kantorovich;
  kantorovich.premises = {
      {x1, y1, Premise::Mode::Bind, UnitValue::zero(), "e1"},
      {x2, y2, Premise::Mode::Bind, UnitValue::zero(), "e2"}};
  kantorovich.conclusion = {
      Term::app(plus, {x1, x2}), Term::app(plus, {y1, y2}), true,
      EpsExpr::add(
          EpsExpr::mul(EpsExpr::constant(Rational(1, 2)), EpsExpr::label("e1")),
          EpsExpr::mul(EpsExpr::constant(Rational(1, 2)),
                       EpsExpr::label("e2")))};
  CHECK(check_basic(kantorovich));

  HornClause structured;
  structured.premises = {{Term::app(plus, {x1, x1}), y1, Premise::Mode::Equal,
                          UnitValue::zero(), ""}};
  structured.conclusion = {x1, y1, false, EpsExpr::constant(0)};
  CHECK(!check_basic(structured));

  HornClause premise_free;
  premise_free.conclusion = {x1, x1, false, EpsExpr::constant(0)};
  CHECK(check_basic(premise_free));
}

TEST_CASE("epsilon expressions evaluate exactly") {
  EpsExpr e = EpsExpr::add(
      EpsExpr::mul(EpsExpr::constant(Rational(1, 3)), EpsExpr::label("e1")),
      EpsExpr::constant(Rational(1, 6)));
  CHECK(e.eval({{"e1", Rational(1, 2)}}) == Rational(1, 3));
  CHECK(e.labels() == std::set<std::string>{"e1"});
  CHECK(!e.is_constant());
  CHECK_THROWS_AS(e.eval({}), Error);
}

TEST_CASE("check_theory rejects unbound labels and unknown symbols") {
  Theory th;
  th.kind = MetricKind::named("Met");
  HornClause bad;
  bad.conclusion = {Term::var("x"), Term::var("y"), true,
                    EpsExpr::label("nowhere")};
  th.axioms.push_back(bad);
  CHECK_THROWS_AS(check_theory(th), Error);

  Theory unknown_op;
  unknown_op.kind = MetricKind::named("Met");
  HornClause app;
  app.conclusion = {Term::app(OpSym{"ghost", std::nullopt}, {Term::var("x")}),
                    Term::var("x"), false, EpsExpr::constant(0)};
  unknown_op.axioms.push_back(app);
  CHECK_THROWS_AS(check_theory(unknown_op), Error);
}

TEST_CASE("all bundled theories parse and type-check") {
  for (const auto& name : fixtures::names()) {
    LoadedTheory lt = fixtures::load(name);
    CHECK_NOTHROW(check_theory(lt.extended()));
    if (lt.space) CHECK(validate_space(*lt.space).ok());
  }
}
