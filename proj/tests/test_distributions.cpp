#include "qalg/distributions.hpp"

#include "qalg/algebra.hpp"
#include "qalg/fixtures.hpp"
#include "qalg/sampling.hpp"

#include <doctest.h>

#include <random>

using namespace qalg;

namespace {

FiniteSpace met01() {
  UnitValue z = UnitValue::zero();
  return FiniteSpace({"a", "b"}, {{z, UnitValue::one()}, {UnitValue::one(), z}},
                     MetricKind::named("Met"));
}

}  // namespace

TEST_CASE("distribution construction") {
  Dist d = Dist::dirac("a");
  CHECK(d.weight("a") == 1);
  CHECK(d.support_size() == 1);
  CHECK(d.str() == "{a:1}");

  CHECK_THROWS_AS(
      Dist::from_weights({{"a", Rational(1, 2)}, {"b", Rational(1, 3)}}),
      Error);
  CHECK_THROWS_AS(Dist::from_weights({{"a", Rational(0)}, {"b", Rational(1)}}),
                  Error);
}

TEST_CASE("convex combinations") {
  Dist da = Dist::dirac("a"), db = Dist::dirac("b");
  Dist mix = convex_combine(UnitValue(1, 2), da, db);
  CHECK(mix == Dist::from_weights({{"a", Rational(1, 2)},
                                   {"b", Rational(1, 2)}}));
  CHECK(convex_combine(UnitValue(1, 3), mix, mix) == mix);
  CHECK_THROWS_AS(convex_combine(UnitValue::one(), da, db), Error);

  // Skew-associativity transforms parameters as (p,q) -> (pq, p(1-q)/(1-pq)).
  Dist dc = Dist::dirac("c");
  Dist lhs = convex_combine(UnitValue(1, 3),
                            convex_combine(UnitValue(1, 2), da, db), dc);
  Dist rhs = convex_combine(
      UnitValue(1, 6), da, convex_combine(UnitValue(1, 5), db, dc));
  CHECK(lhs == rhs);
}

TEST_CASE("LK distance reproduces the worked values") {
  FiniteSpace space = fixtures::lk_counterexample_space();
  Dist da = Dist::dirac("a"), db = Dist::dirac("b");
  Dist mix = convex_combine(UnitValue(1, 2), da, db);
  CHECK(lk_distance(space, da, da) == UnitValue(1, 2));
  CHECK(lk_distance(space, db, db) == UnitValue(1, 2));
  CHECK(lk_distance(space, mix, mix) == UnitValue(3, 4));
  CHECK(lk_distance(space, da, db) == space.d("a", "b"));
}

TEST_CASE("the Dirac embedding is an LK isometry") {
  std::mt19937 rng(5);
  for (int i = 0; i < 30; ++i) {
    FiniteSpace s = random_space(MetricKind::named("DMet"), 5, rng);
    for (const auto& x : s.points())
      for (const auto& y : s.points())
        CHECK(lk_distance(s, Dist::dirac(x), Dist::dirac(y)) == s.d(x, y));
  }
}

TEST_CASE("Kantorovich on Diracs and mixtures") {
  FiniteSpace space = met01();
  Dist da = Dist::dirac("a"), db = Dist::dirac("b");
  CHECK(kantorovich_distance(space, da, db) == space.d("a", "b"));
  Dist mix = convex_combine(UnitValue(1, 2), da, db);
  UnitValue half = kantorovich_distance(space, mix, da);
  CHECK(half == UnitValue(1, 2));
  CHECK(half == bruteforce_kantorovich(space, mix, da));
  CHECK(kantorovich_distance(space, mix, mix) == UnitValue::zero());
}

TEST_CASE("Kantorovich is a metric-like oracle on random instances") {
  std::mt19937 rng(9);
  for (int i = 0; i < 60; ++i) {
    FiniteSpace s = random_space(MetricKind::named("Met"), 4, rng);
    Dist mu = random_dist(s.points(), 6, rng);
    Dist nu = random_dist(s.points(), 6, rng);
    UnitValue solver = kantorovich_distance(s, mu, nu);
    CHECK(solver == bruteforce_kantorovich(s, mu, nu));
    CHECK(kantorovich_distance(s, mu, mu) == UnitValue::zero());
    CHECK(solver == kantorovich_distance(s, nu, mu));
  }
}

TEST_CASE("transport plans are certified couplings") {
  std::mt19937 rng(13);
  FiniteSpace s = random_space(MetricKind::named("Met"), 4, rng);
  Dist mu = random_dist(s.points(), 12, rng);
  Dist nu = random_dist(s.points(), 12, rng);
  TransportPlan plan = kantorovich_transport(s, mu, nu);
  Rational mass = 0;
  for (const auto& [cell, w] : plan.coupling) {
    CHECK(w > 0);
    mass += w;
  }
  CHECK(mass == 1);
  // Complementary slackness: positive cells are tight for the potentials.
  for (const auto& [cell, w] : plan.coupling)
    CHECK(plan.row_potential.at(cell.first) + plan.col_potential.at(cell.second)
          == s.d(cell.first, cell.second).value());
}

TEST_CASE("lift values") {
  FiniteSpace space = fixtures::lk_counterexample_space();
  CHECK(lk_lift_value(UnitValue(1, 2), space, {"a", "b"}, {"a", "b"}) ==
        UnitValue(3, 4));

  // The L-NE delta for premises e11=e22=0, e12=e21=1 at p=1/2.
  FiniteSpace met = met01();
  CHECK(lk_lift_value(UnitValue(1, 2), met, {"a", "b"}, {"a", "b"}) ==
        UnitValue(1, 2));

  FiniteSpace one({"z"}, {{UnitValue::zero()}}, MetricKind::named("Met"));
  CHECK(kant_lift_value(UnitValue(1, 2), one, {"z", "z"}, {"z", "z"}) ==
        UnitValue::zero());
}

TEST_CASE("terms evaluate to distributions") {
  FiniteSpace space = fixtures::lk_counterexample_space();
  Signature sig;
  sig.add({OpSym{"plus", Rational(1, 2)}, 2,
           Lifting::lukaszyk_karmowski(UnitValue(1, 2))});
  std::set<std::string> atoms{"a", "b"};

  Dist mix = term_to_distribution(parse_term("plus(1/2; a, b)", sig, atoms),
                                  space);
  CHECK(mix == Dist::from_weights({{"a", Rational(1, 2)},
                                   {"b", Rational(1, 2)}}));
  CHECK(term_to_distribution(parse_term("plus(1/2; a, a)", sig, atoms),
                             space) == Dist::dirac("a"));
  Term nested = parse_term("plus(1/2; plus(1/2; a, b), plus(1/2; a, b))", sig,
                           atoms);
  CHECK(term_to_distribution(nested, space) == mix);
  CHECK_THROWS_AS(term_to_distribution(Term::var("x"), space), Error);
  CHECK_THROWS_AS(term_to_distribution(Term::constant("zz"), space), Error);
}

TEST_CASE("the LK algebra satisfies the convex axioms on samples") {
  LoadedTheory lt = fixtures::load("convex_lk");
  Algebra model = lk_algebra(fixtures::lk_counterexample_space());
  for (const auto& clause : lt.theory.axioms) {
    Verdict v = satisfies(model, clause, SatisfyMode::sampled(500, 99));
    CHECK(v.holds);
  }
}

TEST_CASE("LK algebra operations meet the LK lifting with equality on Diracs") {
  FiniteSpace space = fixtures::lk_counterexample_space();
  Algebra model = lk_algebra(space);
  UnitValue p(1, 2);
  OpSym plus{"plus", p.value()};
  for (const auto& a1 : space.points())
    for (const auto& a2 : space.points())
      for (const auto& b1 : space.points())
        for (const auto& b2 : space.points()) {
          Element lhs = model.apply(
              plus, {Dist::dirac(a1), Dist::dirac(a2)});
          Element rhs = model.apply(
              plus, {Dist::dirac(b1), Dist::dirac(b2)});
          CHECK(model.distance(lhs, rhs) ==
                lk_lift_value(p, space, {a1, a2}, {b1, b2}));
        }
}

TEST_CASE("sampled LK distances form a diffuse metric") {
  FiniteSpace space = fixtures::lk_counterexample_space();
  std::mt19937 rng(21);
  for (int i = 0; i < 200; ++i) {
    Dist mu = random_dist(space.points(), 24, rng);
    Dist nu = random_dist(space.points(), 24, rng);
    Dist rho = random_dist(space.points(), 24, rng);
    CHECK(lk_distance(space, mu, nu) == lk_distance(space, nu, mu));
    CHECK(lk_distance(space, mu, rho).value() <=
          lk_distance(space, mu, nu).value() +
              lk_distance(space, nu, rho).value());
  }
}

TEST_CASE("lk_algebra rejects non-diffuse bases") {
  CHECK_THROWS_AS(lk_algebra(met01()), Error);
}

TEST_CASE("random distributions are reproducible and well-formed") {
  std::mt19937 a(3), b(3);
  std::vector<std::string> atoms{"x", "y", "z"};
  for (int i = 0; i < 50; ++i) {
    Dist da = random_dist(atoms, 24, a);
    Dist db = random_dist(atoms, 24, b);
    CHECK(da == db);
    Rational sum = 0;
    for (const auto& [atom, w] : da.weights()) sum += w;
    CHECK(sum == 1);
  }
}

TEST_CASE("distribution enumeration by denominator") {
  std::vector<Dist> all = all_dists_with_denominator({"a", "b"}, 4, 2);
  // Supports {a}, {b}: one each; {a,b}: compositions of 4 into 2 parts: 3.
  CHECK(all.size() == 5);
  for (const auto& d : all) {
    Rational sum = 0;
    for (const auto& [atom, w] : d.weights()) sum += w;
    CHECK(sum == 1);
  }
}
