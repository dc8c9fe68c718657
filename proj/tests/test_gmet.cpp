#include "qalg/gmet.hpp"
#include "qalg/sampling.hpp"

#include <doctest.h>

#include <random>

using namespace qalg;

namespace {

FiniteSpace one_point(const std::string& name, const UnitValue& self,
                      const std::string& kind) {
  return FiniteSpace({name}, {{self}}, MetricKind::named(kind));
}

// Independent axiom checker: plain loops over all 1-, 2- and 3-tuples,
// written without reference to validate_space.
bool naive_valid(const FiniteSpace& s) {
  std::size_t n = s.size();
  const MetricKind& k = s.kind();
  for (std::size_t a = 0; a < n; ++a) {
    if (k.has(Axiom::Refl) && !(s.d(a, a) == UnitValue::zero())) return false;
    for (std::size_t b = 0; b < n; ++b) {
      if (k.has(Axiom::Sym) && !(s.d(a, b) == s.d(b, a))) return false;
      if (k.has(Axiom::IdOfInd) && a != b && s.d(a, b) == UnitValue::zero())
        return false;
      for (std::size_t c = 0; c < n; ++c) {
        Rational sum = s.d(a, b).value() + s.d(b, c).value();
        if (k.has(Axiom::Tri) && s.d(a, c).value() > sum) return false;
        if (k.has(Axiom::StrongTri) && s.d(a, c) > max(s.d(a, b), s.d(b, c)))
          return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("named kinds carry the lattice's axiom sets") {
  auto axioms = [](const char* name) {
    std::vector<int> out;
    for (Axiom a : MetricKind::named(name).axioms())
      out.push_back(static_cast<int>(a));
    return out;
  };
  CHECK(axioms("FRel") == std::vector<int>{});
  CHECK(axioms("PSMet") == std::vector<int>{1, 2});
  CHECK(axioms("PQMet") == std::vector<int>{2, 4});
  CHECK(axioms("DMet") == std::vector<int>{1, 4});
  CHECK(axioms("MMet") == std::vector<int>{1, 3, 4});
  CHECK(axioms("SMet") == std::vector<int>{1, 2, 3});
  CHECK(axioms("QMet") == std::vector<int>{2, 3, 4});
  CHECK(axioms("PMet") == std::vector<int>{1, 2, 4});
  CHECK(axioms("Met") == std::vector<int>{1, 2, 3, 4});
  CHECK(axioms("UMet") == std::vector<int>{1, 2, 3, 4, 5});
  CHECK(MetricKind::named("Met").name() == std::string("Met"));
  CHECK_THROWS_AS(MetricKind::named("metric"), Error);
}

TEST_CASE("strong triangle implies triangle after normalization") {
  MetricKind k({Axiom::StrongTri});
  CHECK(k.has(Axiom::Tri));
}

TEST_CASE("validate_space on the worked one-point spaces") {
  CHECK(validate_space(one_point("a", UnitValue(1, 2), "DMet")).ok());
  ValidationReport r = validate_space(one_point("a", UnitValue(1, 2), "PMet"));
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].axiom == Axiom::Refl);
  CHECK(r.violations[0].witness == std::vector<std::string>{"a"});
}

TEST_CASE("validate_space finds the triangle violation") {
  UnitValue z = UnitValue::zero();
  FiniteSpace s({"a", "b", "c"},
                {{z, UnitValue(1, 5), UnitValue(9, 10)},
                 {UnitValue(1, 5), z, UnitValue(3, 10)},
                 {UnitValue(9, 10), UnitValue(3, 10), z}},
                MetricKind::named("Met"));
  ValidationReport r = validate_space(s);
  REQUIRE(!r.ok());
  // Brute force over ordered triples, independent of the implementation.
  std::vector<std::vector<std::string>> expected;
  for (const auto& x : s.points())
    for (const auto& y : s.points())
      for (const auto& w : s.points())
        if (s.d(x, w).value() > s.d(x, y).value() + s.d(y, w).value())
          expected.push_back({x, y, w});
  REQUIRE(expected.size() == r.violations.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(r.violations[i].axiom == Axiom::Tri);
    CHECK(r.violations[i].witness == expected[i]);
  }
  CHECK(expected[0] == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("validate_space agrees with a naive checker on random matrices") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(0, 6);
  std::uniform_int_distribution<std::size_t> size_pick(1, 4);
  for (const auto& name : MetricKind::all_names()) {
    MetricKind kind = MetricKind::named(name);
    for (int i = 0; i < 50; ++i) {
      std::size_t n = size_pick(rng);
      std::vector<std::string> pts;
      for (std::size_t k = 0; k < n; ++k) pts.push_back("p" + std::to_string(k));
      std::vector<std::vector<UnitValue>> m(n, std::vector<UnitValue>(n));
      for (auto& row : m)
        for (auto& v : row) v = UnitValue(num(rng), 6);
      FiniteSpace s(pts, m, kind);
      CHECK(validate_space(s).ok() == naive_valid(s));
    }
  }
}

TEST_CASE("structural errors are distinct from axiom violations") {
  CHECK_THROWS_AS(FiniteSpace({"a", "b"}, {{UnitValue::zero()}},
                              MetricKind::named("Met")),
                  Error);
  CHECK_THROWS_AS(FiniteSpace({"a", "a"},
                              {{UnitValue::zero(), UnitValue::zero()},
                               {UnitValue::zero(), UnitValue::zero()}},
                              MetricKind::named("Met")),
                  Error);
}

TEST_CASE("product takes the pointwise maximum") {
  UnitValue z = UnitValue::zero();
  FiniteSpace x({"a1", "a2"},
                {{z, UnitValue(3, 10)}, {UnitValue(3, 10), z}},
                MetricKind::named("Met"));
  FiniteSpace y({"b1", "b2"},
                {{z, UnitValue(7, 10)}, {UnitValue(7, 10), z}},
                MetricKind::named("Met"));
  FiniteSpace p = product({x, y});
  CHECK(p.size() == 4);
  CHECK(p.d("(a1,b1)", "(a2,b2)") == UnitValue(7, 10));
  CHECK(p.d("(a1,b1)", "(a2,b1)") == UnitValue(3, 10));

  FiniteSpace with_terminal = product({x, terminal(x.kind())});
  for (const auto& a : x.points())
    for (const auto& b : x.points())
      CHECK(with_terminal.d("(" + a + ",())", "(" + b + ",())") == x.d(a, b));
}

TEST_CASE("terminal self-distance depends on reflexivity") {
  CHECK(terminal(MetricKind::named("Met")).d(0, 0) == UnitValue::zero());
  CHECK(terminal(MetricKind::named("DMet")).d(0, 0) == UnitValue::one());
  CHECK(terminal(MetricKind::named("FRel")).d(0, 0) == UnitValue::one());
}

TEST_CASE("coproduct keeps components and separates them at 1") {
  FiniteSpace met_pt = one_point("a", UnitValue::zero(), "Met");
  FiniteSpace c = coproduct({met_pt, met_pt});
  CHECK(c.d("0.a", "1.a") == UnitValue::one());
  CHECK(c.d("0.a", "0.a") == UnitValue::zero());

  FiniteSpace dmet_pt = one_point("a", UnitValue(1, 2), "DMet");
  FiniteSpace cd = coproduct({dmet_pt, dmet_pt});
  CHECK(cd.d("0.a", "1.a") == UnitValue::one());
  CHECK(cd.d("0.a", "0.a") == UnitValue(1, 2));
  CHECK(cd.d("1.a", "1.a") == UnitValue(1, 2));
}

TEST_CASE("mixed kinds are rejected") {
  FiniteSpace a = one_point("a", UnitValue::zero(), "Met");
  FiniteSpace b = one_point("a", UnitValue(1, 2), "DMet");
  CHECK_THROWS_AS(product({a, b}), Error);
  CHECK_THROWS_AS(coproduct({a, b}), Error);
}

TEST_CASE("product and coproduct preserve every axiom subset") {
  std::mt19937 rng(11);
  for (const auto& name : MetricKind::all_names()) {
    MetricKind kind = MetricKind::named(name);
    for (int i = 0; i < 20; ++i) {
      FiniteSpace x = random_space(kind, 6, rng);
      FiniteSpace y = random_space(kind, 6, rng);
      CHECK(validate_space(product({x, y})).ok());
      CHECK(validate_space(coproduct({x, y})).ok());
    }
  }
}

TEST_CASE("restriction") {
  UnitValue z = UnitValue::zero();
  FiniteSpace s({"a", "b", "c"},
                {{z, UnitValue(1, 2), UnitValue(1, 4)},
                 {UnitValue(1, 2), z, UnitValue(1, 2)},
                 {UnitValue(1, 4), UnitValue(1, 2), z}},
                MetricKind::named("Met"));
  FiniteSpace full = restrict_space(s, {"a", "b", "c"});
  CHECK(full.points() == s.points());
  for (const auto& x : s.points())
    for (const auto& y : s.points()) CHECK(full.d(x, y) == s.d(x, y));

  FiniteSpace ac = restrict_space(s, {"a", "c"});
  CHECK(ac.d("a", "c") == UnitValue(1, 4));
  CHECK_THROWS_AS(restrict_space(s, {"z"}), Error);

  // Any valid space restricts to a valid space of the same kind; the
  // inclusion is an isometric embedding.
  std::mt19937 rng(3);
  for (const auto& name : MetricKind::all_names()) {
    for (int i = 0; i < 10; ++i) {
      FiniteSpace space = random_space(MetricKind::named(name), 6, rng);
      std::vector<std::string> subset;
      for (std::size_t k = 0; k < space.size(); k += 2)
        subset.push_back(space.points()[k]);
      FiniteSpace r = restrict_space(space, subset);
      CHECK(validate_space(r).ok());
      std::map<std::string, std::string> inc;
      for (const auto& p : subset) inc[p] = p;
      CHECK(check_isometric_embedding(SpaceMap(r, space, inc)));
    }
  }
}

TEST_CASE("isometric embeddings") {
  UnitValue z = UnitValue::zero();
  FiniteSpace s({"a", "b"}, {{z, UnitValue(1, 2)}, {UnitValue(1, 2), z}},
                MetricKind::named("Met"));
  std::map<std::string, std::string> id{{"a", "a"}, {"b", "b"}};
  CHECK(check_isometric_embedding(SpaceMap(s, s, id)));
  std::map<std::string, std::string> constant{{"a", "a"}, {"b", "a"}};
  CHECK(!check_isometric_embedding(SpaceMap(s, s, constant)));
}
