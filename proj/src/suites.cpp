#include "qalg/suites.hpp"

#include "qalg/fixtures.hpp"
#include "qalg/freealg.hpp"
#include "qalg/sampling.hpp"
#include "qalg/saturation.hpp"
#include "qalg/theory_file.hpp"

#include <functional>
#include <sstream>

namespace qalg {

namespace {

std::mt19937 seeded(std::uint64_t seed, int salt) {
  return std::mt19937(static_cast<std::uint32_t>(seed * 1000003u + salt));
}

CheckResult pass(const std::string& id, const std::string& detail) {
  return {id, true, detail};
}
CheckResult fail(const std::string& id, const std::string& detail) {
  return {id, false, detail};
}

// The convex theory at parameter closure 0: the single operation +_{1/2}.
// Small enough that a three-level tower of term universes materializes.
const char* kTowerBase = R"(kind Met
op plus arity 2 lifting kantorovich(p)
params plus { 1/2 }
option param_closure 0
axiom plus(p; x, x) = x
axiom plus(p; x, y) = plus(1-p; y, x)
axiom plus(p; plus(q; x, y), z) = plus(p*q; x, plus(p*(1-q)/(1-p*q); y, z))
space { points a, b; d a b = 1; }
)";

// --- C1 ----------------------------------------------------------------

CheckResult c1_lk_counterexample() {
  const std::string id = "C1-lk-counterexample";
  FiniteSpace space = fixtures::lk_counterexample_space();
  Dist da = Dist::dirac("a"), db = Dist::dirac("b");
  Dist mix = convex_combine(UnitValue(1, 2), da, db);
  UnitValue laa = lk_distance(space, da, da);
  UnitValue lbb = lk_distance(space, db, db);
  UnitValue lmm = lk_distance(space, mix, mix);
  if (laa != UnitValue(1, 2))
    return fail(id, "lk(da,da) = " + laa.str() + ", expected 1/2");
  if (lbb != UnitValue(1, 2))
    return fail(id, "lk(db,db) = " + lbb.str() + ", expected 1/2");
  if (lmm != UnitValue(3, 4))
    return fail(id, "lk(mix,mix) = " + lmm.str() + ", expected 3/4");
  if (!(max(laa, lbb) < lmm))
    return fail(id, "mixture did not exceed the sup-product bound");

  // The same facts as a failing sup-product L-NE clause in the model: the
  // Dirac pair is a concrete counterexample.
  OpSym half{"plus", Rational(1, 2)};
  HornClause clause;
  clause.premises = {
      {Term::var("x1"), Term::var("y1"), Premise::Mode::BoundedBy,
       UnitValue(1, 2), ""},
      {Term::var("x2"), Term::var("y2"), Premise::Mode::BoundedBy,
       UnitValue(1, 2), ""}};
  clause.conclusion = {Term::app(half, {Term::var("x1"), Term::var("x2")}),
                       Term::app(half, {Term::var("y1"), Term::var("y2")}),
                       true, EpsExpr::constant(Rational(1, 2))};
  Algebra model = lk_algebra(space);
  std::map<std::string, Element> dirac_pair{
      {"x1", da}, {"y1", da}, {"x2", db}, {"y2", db}};
  bool premises_hold = lk_distance(space, da, da) <= UnitValue(1, 2) &&
                       lk_distance(space, db, db) <= UnitValue(1, 2);
  Element l = evaluate(clause.conclusion.lhs, model, dirac_pair);
  Element r = evaluate(clause.conclusion.rhs, model, dirac_pair);
  bool conclusion_holds = model.distance(l, r) <= UnitValue(1, 2);
  if (!premises_hold || conclusion_holds)
    return fail(id, "Dirac pair is not a counterexample to the sup-NE clause");
  return pass(id, "1/2 = lk(da,da) < lk(mix,mix) = 3/4; Dirac pair breaks sup-NE");
}

// --- C2 ----------------------------------------------------------------

CheckResult c2_lk_diffuse(std::uint64_t seed) {
  const std::string id = "C2-lk-diffuse-metric";
  auto rng = seeded(seed, 2);
  MetricKind dmet = MetricKind::named("DMet");
  for (int i = 0; i < 1000; ++i) {
    FiniteSpace space = random_space(dmet, 5, rng);
    Dist mu = random_dist(space.points(), 24, rng);
    Dist nu = random_dist(space.points(), 24, rng);
    Dist rho = random_dist(space.points(), 24, rng);
    if (lk_distance(space, mu, nu) != lk_distance(space, nu, mu))
      return fail(id, "symmetry failed at sample " + std::to_string(i));
    UnitValue lhs = lk_distance(space, mu, rho);
    Rational rhs = lk_distance(space, mu, nu).value() +
                   lk_distance(space, nu, rho).value();
    if (lhs.value() > rhs)
      return fail(id, "triangle inequality failed at sample " +
                          std::to_string(i));
  }
  return pass(id, "symmetry and triangle exact on 1000 samples");
}

// --- C3 ----------------------------------------------------------------

CheckResult c3_lk_bilinear(std::uint64_t seed) {
  const std::string id = "C3-lk-bilinear-equality";
  auto rng = seeded(seed, 3);
  MetricKind dmet = MetricKind::named("DMet");
  const std::vector<UnitValue> ps = {UnitValue(1, 4), UnitValue(1, 2),
                                     UnitValue(2, 3)};
  for (int i = 0; i < 1000; ++i) {
    const UnitValue& p = ps[static_cast<std::size_t>(i) % ps.size()];
    Rational pv = p.value(), pb = 1 - pv;
    FiniteSpace space = random_space(dmet, 5, rng);
    Dist mu = random_dist(space.points(), 24, rng);
    Dist nu = random_dist(space.points(), 24, rng);
    Dist mu2 = random_dist(space.points(), 24, rng);
    Dist nu2 = random_dist(space.points(), 24, rng);
    UnitValue lhs = lk_distance(space, convex_combine(p, mu, nu),
                                convex_combine(p, mu2, nu2));
    Rational rhs = pv * pv * lk_distance(space, mu, mu2).value() +
                   pv * pb * lk_distance(space, mu, nu2).value() +
                   pb * pv * lk_distance(space, nu, mu2).value() +
                   pb * pb * lk_distance(space, nu, nu2).value();
    if (lhs.value() != rhs)
      return fail(id, "bilinear identity failed at sample " +
                          std::to_string(i) + " (p=" + p.str() + ")");
  }
  return pass(id, "nonexpansiveness-as-equality exact on 1000 samples");
}

// --- C4 ----------------------------------------------------------------

CheckResult c4_embedding_preservation(std::uint64_t seed) {
  const std::string id = "C4-embedding-preservation";
  auto rng = seeded(seed, 4);
  const std::vector<UnitValue> ps = {UnitValue(1, 4), UnitValue(1, 2),
                                     UnitValue(2, 3)};
  std::size_t checked = 0;
  for (int round = 0; round < 20; ++round) {
    for (bool lk : {true, false}) {
      MetricKind kind = MetricKind::named(lk ? "DMet" : "Met");
      FiniteSpace space = random_space(kind, 5, rng);
      const UnitValue& p = ps[static_cast<std::size_t>(round) % ps.size()];
      Lifting lifting =
          lk ? Lifting::lukaszyk_karmowski(p) : Lifting::kantorovich(p);
      // All non-empty subsets of the carrier.
      std::size_t n = space.size();
      for (std::size_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::string> subset;
        for (std::size_t i = 0; i < n; ++i)
          if (mask & (1u << i)) subset.push_back(space.points()[i]);
        if (!check_embedding_preservation(lifting, space, subset))
          return fail(id, std::string(lk ? "LK" : "Kantorovich") +
                              " lifting failed to commute with restriction");
        ++checked;
      }
    }
  }
  return pass(id, std::to_string(checked) + " (lifting, space, subset) triples");
}

// --- C5 ----------------------------------------------------------------

CheckResult c5_kantorovich_exact(std::uint64_t seed) {
  const std::string id = "C5-kantorovich-exactness";
  auto rng = seeded(seed, 5);
  MetricKind met = MetricKind::named("Met");
  std::size_t pairs = 0;
  for (int s = 0; s < 3; ++s) {
    FiniteSpace space = random_space(met, 4, rng);
    std::vector<Dist> dists =
        all_dists_with_denominator(space.points(), 6, 3);
    for (const Dist& mu : dists)
      for (const Dist& nu : dists) {
        // kantorovich_distance verifies the duality certificate internally.
        UnitValue solver = kantorovich_distance(space, mu, nu);
        UnitValue brute = bruteforce_kantorovich(space, mu, nu);
        if (solver != brute)
          return fail(id, "solver " + solver.str() + " != brute force " +
                              brute.str() + " on " + mu.str() + " vs " +
                              nu.str());
        ++pairs;
      }
  }
  return pass(id, std::to_string(pairs) +
                      " instances match brute force; certificates verified");
}

// --- C6 ----------------------------------------------------------------

CheckResult c6_kantorovich_rule(std::uint64_t seed) {
  const std::string id = "C6-kantorovich-rule";
  auto rng = seeded(seed, 6);
  MetricKind met = MetricKind::named("Met");
  const std::vector<UnitValue> ps = {UnitValue(1, 4), UnitValue(1, 2),
                                     UnitValue(2, 3)};
  for (int i = 0; i < 1000; ++i) {
    const UnitValue& p = ps[static_cast<std::size_t>(i) % ps.size()];
    FiniteSpace space = random_space(met, 4, rng);
    Dist mu = random_dist(space.points(), 24, rng);
    Dist mu2 = random_dist(space.points(), 24, rng);
    Dist nu = random_dist(space.points(), 24, rng);
    Dist nu2 = random_dist(space.points(), 24, rng);
    UnitValue lhs = kantorovich_distance(space, convex_combine(p, mu, nu),
                                         convex_combine(p, mu2, nu2));
    Rational rhs = p.value() * kantorovich_distance(space, mu, mu2).value() +
                   (1 - p.value()) * kantorovich_distance(space, nu, nu2).value();
    if (lhs.value() > rhs)
      return fail(id, "rule violated at sample " + std::to_string(i));
  }
  return pass(id, "K(mix,mix') <= p K + (1-p) K on 1000 samples");
}

// --- C7 ----------------------------------------------------------------

CheckResult c7_term_algebra(std::uint64_t) {
  const std::string id = "C7-term-algebra-vs-free-model";
  LoadedTheory lt = fixtures::load("lk_counterexample");
  Theory th = lt.extended();
  FiniteSpace space = *lt.space;
  SaturationConfig cfg;
  cfg.depth = 2;
  SaturationResult r = saturate(th, cfg);
  if (!r.fixpoint_reached())
    return fail(id, "saturation hit the round budget before fixpoint");

  // Distribution of each class via its representative; check every class
  // pair (which covers every universe pair through the congruence).
  std::vector<Dist> dist_of;
  for (int c : r.classes())
    dist_of.push_back(term_to_distribution(r.representative(c), space));
  // All members of a class must denote one distribution.
  for (std::size_t k = 0; k < r.classes().size(); ++k)
    for (int member : r.members(r.classes()[k]))
      if (term_to_distribution(r.universe()[member], space) != dist_of[k])
        return fail(id, "class " + r.representative(r.classes()[k]).str() +
                            " conflates distinct distributions");
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < r.classes().size(); ++i)
    for (std::size_t j = 0; j < r.classes().size(); ++j) {
      UnitValue derived = r.dist(r.classes()[i], r.classes()[j]);
      UnitValue oracle = lk_distance(space, dist_of[i], dist_of[j]);
      if (derived != oracle)
        return fail(id, "d(" + r.representative(r.classes()[i]).str() + ", " +
                            r.representative(r.classes()[j]).str() +
                            ") = " + derived.str() + ", oracle " +
                            oracle.str());
      if (i != j && dist_of[i] == dist_of[j])
        return fail(id, "distinct classes share the distribution " +
                            dist_of[i].str());
      ++pairs;
    }
  return pass(id, std::to_string(r.universe().size()) + " terms, " +
                      std::to_string(r.classes().size()) + " classes, " +
                      std::to_string(pairs) + " pairs exact; fixpoint in " +
                      std::to_string(r.round_count()) + " rounds");
}

// --- C8 ----------------------------------------------------------------

CheckResult c8_soundness(std::uint64_t) {
  const std::string id = "C8-soundness";
  LoadedTheory lk = fixtures::load("lk_counterexample");
  SaturationConfig cfg;
  cfg.depth = 2;
  SaturationResult r = saturate(lk.extended(), cfg);
  SoundnessReport lk_report = check_soundness(r, lk_algebra(*lk.space));
  if (!lk_report.ok()) return fail(id, "LK model: " + lk_report.summary());

  LoadedTheory sl = fixtures::load("semilattice");
  Theory sl_th = sl.extended();
  SaturationResult sr = saturate(sl_th, cfg);
  QuotientAlgebra q = quotient_algebra(sr, sl_th);
  SoundnessReport sl_report = check_soundness(sr, q.algebra);
  if (!sl_report.ok())
    return fail(id, "semilattice quotient: " + sl_report.summary());
  return pass(id, "LK model: " + std::to_string(lk_report.pairs_checked) +
                      " pairs; semilattice quotient: " +
                      std::to_string(sl_report.pairs_checked) + " pairs");
}

// --- C9 ----------------------------------------------------------------

struct Tower {
  Theory base;
  FiniteSpace space;                       // A
  SaturationResult t1, t2, t3;             // T(A), T(T A), T(T(T A))
  FiniteSpace q1s, q2s;                    // relabeled quotient carriers
  std::map<std::string, int> q1, q2;       // point -> class id
  std::map<int, std::string> q1name, q2name;
  std::map<std::string, Term> q1rep, q2rep;
};

Tower build_tower() {
  LoadedTheory lt = parse_theory_text(kTowerBase);
  Tower t;
  t.base = lt.theory;
  t.space = *lt.space;
  SaturationConfig cfg;
  cfg.depth = 1;
  t.t1 = saturate(extend_by_space(t.base, t.space), cfg);
  std::tie(t.q1s, t.q1) = relabeled_quotient(t.t1, "q");
  for (const auto& [name, cls] : t.q1) {
    t.q1name[cls] = name;
    t.q1rep.emplace(name, t.t1.representative(cls));
  }
  t.t2 = saturate(extend_by_space(t.base, t.q1s), cfg);
  std::tie(t.q2s, t.q2) = relabeled_quotient(t.t2, "r");
  for (const auto& [name, cls] : t.q2) {
    t.q2name[cls] = name;
    t.q2rep.emplace(name, t.t2.representative(cls));
  }
  t.t3 = saturate(extend_by_space(t.base, t.q2s), cfg);
  return t;
}

CheckResult c9_monad_laws(std::uint64_t) {
  const std::string id = "C9-monad-laws";
  Tower t = build_tower();

  auto pos_of = [](const SaturationResult& r, int cls) {
    for (std::size_t k = 0; k < r.classes().size(); ++k)
      if (r.classes()[k] == cls) return k;
    throw Error("class not found");
  };

  ClassMapReport mu1 = flatten(t.t2, t.t1, t.q1rep);
  if (!mu1.ill_defined.empty() || !mu1.expansive.empty())
    return fail(id, "flatten T2->T1: " + mu1.summary());

  // Left unit: flatten(eta_{T A}(c)) = c for every class of T1.
  for (int cls : t.t1.classes()) {
    int eta = t.t2.class_of(Term::constant(t.q1name.at(cls)));
    auto image = mu1.image[pos_of(t.t2, eta)];
    if (!image || *image != cls)
      return fail(id, "left unit fails at " + t.t1.representative(cls).str());
  }

  // Right unit: flatten(map_terms(eta)(c)) = c for every class of T1.
  std::map<std::string, std::string> eta_table;
  for (const auto& a : t.space.points())
    eta_table[a] = t.q1name.at(t.t1.class_of(Term::constant(a)));
  SpaceMap eta(t.space, t.q1s, eta_table);
  if (!eta.is_nonexpansive()) return fail(id, "unit map is expansive");
  ClassMapReport teta = map_terms(eta, t.t1, t.t2);
  if (!teta.ok()) return fail(id, "T(eta): " + teta.summary());
  for (std::size_t k = 0; k < t.t1.classes().size(); ++k) {
    auto mid = teta.image[k];
    if (!mid) return fail(id, "T(eta) undefined on a class");
    auto back = mu1.image[pos_of(t.t2, *mid)];
    if (!back || *back != t.t1.classes()[k])
      return fail(id, "right unit fails at " +
                          t.t1.representative(t.t1.classes()[k]).str());
  }

  // Associativity: flatten the tower along both routes, member-wise, and
  // compare wherever both routes resolve. Depth truncation makes the
  // routes partial; partiality is counted, never ignored.
  ClassMapReport muT = flatten(t.t3, t.t2, t.q2rep);
  if (!muT.ill_defined.empty() || !muT.expansive.empty())
    return fail(id, "flatten T3->T2: " + muT.summary());
  std::map<std::string, Term> via_mu;  // r-name -> q-name constant
  std::size_t g_partial = 0;
  for (const auto& [rname, cls] : t.q2) {
    auto image = mu1.image[pos_of(t.t2, cls)];
    if (image)
      via_mu.emplace(rname, Term::constant(t.q1name.at(*image)));
    else
      ++g_partial;
  }
  ClassMapReport tmu = flatten(t.t3, t.t2, via_mu);
  if (!tmu.ill_defined.empty() || !tmu.expansive.empty())
    return fail(id, "T(mu): " + tmu.summary());

  std::size_t agreed = 0, undefined = 0;
  for (std::size_t k = 0; k < t.t3.classes().size(); ++k) {
    std::optional<int> route_a, route_b;
    if (muT.image[k]) route_a = mu1.image[pos_of(t.t2, *muT.image[k])];
    if (tmu.image[k]) route_b = mu1.image[pos_of(t.t2, *tmu.image[k])];
    if (!route_a || !route_b) {
      ++undefined;
      continue;
    }
    if (*route_a != *route_b)
      return fail(id, "associativity fails at " +
                          t.t3.representative(t.t3.classes()[k]).str());
    ++agreed;
  }
  if (agreed == 0) return fail(id, "associativity domain is empty");

  // Naturality of the unit under a collapse map.
  FiniteSpace one({"z"}, {{UnitValue::zero()}}, t.space.kind());
  SpaceMap collapse(t.space, one, {{"a", "z"}, {"b", "z"}});
  SaturationConfig cfg;
  cfg.depth = 1;
  SaturationResult tb = saturate(extend_by_space(t.base, one), cfg);
  ClassMapReport nat = map_terms(collapse, t.t1, tb);
  if (!nat.ok()) return fail(id, "T(collapse): " + nat.summary());
  for (const auto& a : t.space.points()) {
    auto via_map = nat.image[pos_of(t.t1, t.t1.class_of(Term::constant(a)))];
    int via_unit = tb.class_of(Term::constant(collapse.apply(a)));
    if (!via_map || *via_map != via_unit)
      return fail(id, "naturality square fails at point " + a);
  }

  std::ostringstream detail;
  detail << "unit laws on " << t.t1.classes().size()
         << " classes; associativity on " << agreed << " classes ("
         << undefined << " truncated, " << g_partial
         << " collapsed constants); naturality on "
         << t.space.points().size() << " points";
  return pass(id, detail.str());
}

// --- C10 ---------------------------------------------------------------

CheckResult c10_freeness(std::uint64_t) {
  const std::string id = "C10-freeness";
  LoadedTheory lt = fixtures::load("lk_counterexample");
  FiniteSpace space = *lt.space;
  SaturationConfig cfg;
  cfg.depth = 1;
  SaturationResult r = saturate(lt.extended(), cfg);
  Algebra model = lk_algebra(space);
  std::map<std::string, Element> dirac;
  for (const auto& a : space.points()) dirac[a] = Dist::dirac(a);
  FreeExtensionReport fx = free_extension(dirac, model, r);
  if (!fx.ok()) return fail(id, fx.summary());
  // f* composed with the unit recovers f on every generator.
  std::map<int, std::size_t> pos;
  for (std::size_t k = 0; k < r.classes().size(); ++k)
    pos[r.classes()[k]] = k;
  for (const auto& a : space.points()) {
    Element img = fx.image[pos.at(r.class_of(Term::constant(a)))];
    if (!element_eq(img, dirac.at(a)))
      return fail(id, "f* . unit differs from f at " + a);
  }
  // Exactness against the oracle on all class pairs: in the free model the
  // derived distance is the LK distance itself.
  for (std::size_t i = 0; i < r.classes().size(); ++i)
    for (std::size_t j = 0; j < r.classes().size(); ++j) {
      UnitValue model_d = model.distance(fx.image[i], fx.image[j]);
      if (model_d != r.dist(r.classes()[i], r.classes()[j]))
        return fail(id, "f* is not isometric on depth-1 classes");
    }
  return pass(id, "f* factors the Dirac embedding through " +
                      std::to_string(r.classes().size()) +
                      " classes, homomorphically and isometrically");
}

// --- C11 ---------------------------------------------------------------

CheckResult c11_product_coproduct(std::uint64_t seed) {
  const std::string id = "C11-product-coproduct";
  std::size_t checked = 0;
  for (const auto& name : MetricKind::all_names()) {
    MetricKind kind = MetricKind::named(name);
    auto rng = seeded(seed, 11000 + static_cast<int>(checked));
    for (int i = 0; i < 200; ++i) {
      FiniteSpace x = random_space(kind, 4, rng);
      FiniteSpace y = random_space(kind, 4, rng);
      if (!validate_space(product({x, y})).ok())
        return fail(id, name + ": product violated its axioms");
      if (!validate_space(coproduct({x, y})).ok())
        return fail(id, name + ": coproduct violated its axioms");
      ++checked;
    }
  }
  return pass(id, std::to_string(checked) + " space pairs over all 10 kinds");
}

// --- C12 ---------------------------------------------------------------

CheckResult c12_discrete_degeneracy(std::uint64_t) {
  const std::string id = "C12-discrete-degeneracy";
  LoadedTheory lt = fixtures::load("discrete");
  for (int depth = 0; depth <= 2; ++depth) {
    SaturationConfig cfg;
    cfg.depth = depth;
    SaturationResult r = saturate(lt.theory, cfg);
    if (!r.fixpoint_reached())
      return fail(id, "no fixpoint at depth " + std::to_string(depth));
    if (r.classes().size() != r.universe().size())
      return fail(id, "classes merged at depth " + std::to_string(depth));
    for (int a : r.classes())
      for (int b : r.classes()) {
        UnitValue expect = a == b ? UnitValue::zero() : UnitValue::one();
        if (r.dist(a, b) != expect)
          return fail(id, "d(" + r.representative(a).str() + ", " +
                              r.representative(b).str() + ") = " +
                              r.dist(a, b).str() + " at depth " +
                              std::to_string(depth));
      }
  }
  return pass(id, "distances are 0 on the diagonal and 1 elsewhere at depths 0-2");
}

}  // namespace

std::vector<CheckResult> run_all_criteria(std::uint64_t seed) {
  return {
      c1_lk_counterexample(),
      c2_lk_diffuse(seed),
      c3_lk_bilinear(seed),
      c4_embedding_preservation(seed),
      c5_kantorovich_exact(seed),
      c6_kantorovich_rule(seed),
      c7_term_algebra(seed),
      c8_soundness(seed),
      c9_monad_laws(seed),
      c10_freeness(seed),
      c11_product_coproduct(seed),
      c12_discrete_degeneracy(seed),
  };
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"paper", "props", "monad"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& suite,
                                   std::uint64_t seed) {
  if (suite == "paper")
    return {c1_lk_counterexample(), c7_term_algebra(seed), c8_soundness(seed),
            c12_discrete_degeneracy(seed)};
  if (suite == "props")
    return {c2_lk_diffuse(seed),     c3_lk_bilinear(seed),
            c4_embedding_preservation(seed), c5_kantorovich_exact(seed),
            c6_kantorovich_rule(seed),       c11_product_coproduct(seed)};
  if (suite == "monad") return {c9_monad_laws(seed), c10_freeness(seed)};
  throw Error("unknown suite '" + suite + "' (paper, props, monad)");
}

}  // namespace qalg
