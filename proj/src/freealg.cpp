#include "qalg/freealg.hpp"

#include <sstream>

namespace qalg {

SpaceMap unit_map(const FiniteSpace& space, const SaturationResult& r) {
  FiniteSpace quotient = quotient_space(r);
  std::map<std::string, std::string> table;
  for (const auto& a : space.points())
    table[a] = r.representative(r.class_of(Term::constant(a))).str();
  return SpaceMap(space, std::move(quotient), std::move(table));
}

std::pair<FiniteSpace, std::map<std::string, int>> relabeled_quotient(
    const SaturationResult& r, const std::string& prefix) {
  std::vector<std::string> points;
  std::map<std::string, int> table;
  for (std::size_t k = 0; k < r.classes().size(); ++k) {
    std::string name = prefix + std::to_string(k);
    points.push_back(name);
    table[name] = r.classes()[k];
  }
  std::vector<std::vector<UnitValue>> m(points.size(),
                                        std::vector<UnitValue>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j)
      m[i][j] = r.dist(r.classes()[i], r.classes()[j]);
  return {FiniteSpace(std::move(points), std::move(m), r.metric_kind()),
          std::move(table)};
}

std::string ClassMapReport::summary() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (const auto& s : partial) os << "partial: " << s << "\n";
  for (const auto& s : ill_defined) os << "ill-defined: " << s << "\n";
  for (const auto& s : expansive) os << "expansive: " << s << "\n";
  return os.str();
}

namespace {

Term replace_constants(const Term& t, const std::map<std::string, Term>& subst) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t;
    case Term::Kind::Const: {
      auto it = subst.find(t.name());
      return it == subst.end() ? t : it->second;
    }
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args())
        args.push_back(replace_constants(a, subst));
      return Term::app(t.sym(), std::move(args));
    }
  }
  throw Error("unreachable term kind");
}

// Maps every class of `src` by rewriting each member with `rewrite` and
// resolving it in `dst`; members must agree.
ClassMapReport class_map(const SaturationResult& src,
                         const SaturationResult& dst,
                         const std::function<Term(const Term&)>& rewrite) {
  ClassMapReport report;
  report.image.resize(src.classes().size());
  for (std::size_t k = 0; k < src.classes().size(); ++k) {
    int cls = src.classes()[k];
    std::optional<int> image;
    bool disagreement = false;
    for (int member : src.members(cls)) {
      auto target = dst.try_class_of(rewrite(src.universe()[member]));
      if (!target) continue;
      if (!image)
        image = target;
      else if (*image != *target)
        disagreement = true;
    }
    if (!image)
      report.partial.push_back(src.representative(cls).str());
    else if (disagreement)
      report.ill_defined.push_back(src.representative(cls).str());
    report.image[k] = image;
  }
  // Nonexpansiveness on all pairs that mapped.
  for (std::size_t i = 0; i < src.classes().size(); ++i)
    for (std::size_t j = 0; j < src.classes().size(); ++j) {
      if (!report.image[i] || !report.image[j]) continue;
      UnitValue before = src.dist(src.classes()[i], src.classes()[j]);
      UnitValue after = dst.dist(*report.image[i], *report.image[j]);
      if (after > before)
        report.expansive.push_back(
            src.representative(src.classes()[i]).str() + " , " +
            src.representative(src.classes()[j]).str() + ": " + before.str() +
            " -> " + after.str());
    }
  return report;
}

}  // namespace

ClassMapReport flatten(const SaturationResult& outer,
                       const SaturationResult& inner,
                       const std::map<std::string, Term>& const_to_inner_rep) {
  return class_map(outer, inner, [&](const Term& t) {
    return replace_constants(t, const_to_inner_rep);
  });
}

ClassMapReport map_terms(const SpaceMap& f, const SaturationResult& src,
                         const SaturationResult& dst) {
  std::map<std::string, Term> subst;
  for (const auto& a : f.src.points())
    subst[a] = Term::constant(f.apply(a));
  return class_map(src, dst,
                   [subst](const Term& t) { return replace_constants(t, subst); });
}

std::string FreeExtensionReport::summary() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (const auto& s : representative_dependence)
    os << "representative-dependent: " << s << "\n";
  for (const auto& s : hom_violations) os << "not a homomorphism: " << s << "\n";
  for (const auto& s : expansive) os << "expansive: " << s << "\n";
  return os.str();
}

FreeExtensionReport free_extension(const std::map<std::string, Element>& f,
                                   const Algebra& alg,
                                   const SaturationResult& r) {
  FreeExtensionReport report;
  report.image.resize(r.classes().size());
  std::map<std::string, Element> no_vars;
  for (std::size_t k = 0; k < r.classes().size(); ++k) {
    int cls = r.classes()[k];
    std::optional<Element> image;
    for (int member : r.members(cls)) {
      Element e;
      try {
        e = evaluate(r.universe()[member], alg, no_vars, &f);
      } catch (const PartialOperation&) {
        ++report.partial_skips;
        continue;
      }
      if (!image) {
        image = e;
      } else if (!element_eq(*image, e)) {
        report.representative_dependence.push_back(
            r.representative(cls).str() + " vs " +
            r.universe()[member].str() + ": " + element_str(*image) + " != " +
            element_str(e));
      }
    }
    if (!image)
      throw Error("free extension: no member of class " +
                  r.representative(cls).str() + " is evaluable");
    report.image[k] = *image;
  }

  std::map<int, std::size_t> pos;
  for (std::size_t k = 0; k < r.classes().size(); ++k)
    pos[r.classes()[k]] = k;

  // Homomorphism property on every application node of the universe.
  for (std::size_t k = 0; k < r.classes().size(); ++k) {
    int cls = r.classes()[k];
    for (int member : r.members(cls)) {
      const Term& t = r.universe()[member];
      if (!t.is_app() || t.args().empty()) continue;
      std::vector<Element> args;
      bool skip = false;
      for (const Term& a : t.args()) {
        auto c = r.try_class_of(a);
        if (!c) {
          skip = true;
          break;
        }
        args.push_back(report.image[pos.at(*c)]);
      }
      if (skip) continue;
      Element applied;
      try {
        applied = alg.apply(t.sym(), args);
      } catch (const PartialOperation&) {
        ++report.partial_skips;
        continue;
      }
      if (!element_eq(applied, report.image[k]))
        report.hom_violations.push_back(t.str());
    }
  }

  // Nonexpansiveness against the derived distances.
  for (std::size_t i = 0; i < r.classes().size(); ++i)
    for (std::size_t j = 0; j < r.classes().size(); ++j) {
      UnitValue model = alg.distance(report.image[i], report.image[j]);
      UnitValue derived = r.dist(r.classes()[i], r.classes()[j]);
      if (model > derived)
        report.expansive.push_back(
            r.representative(r.classes()[i]).str() + " , " +
            r.representative(r.classes()[j]).str() + ": model " + model.str() +
            " > derived " + derived.str());
    }
  return report;
}

std::string SoundnessReport::summary() const {
  if (ok())
    return "sound (" + std::to_string(pairs_checked) + " pairs)";
  std::ostringstream os;
  for (const auto& v : violations) os << v << "\n";
  return os.str();
}

SoundnessReport check_soundness(const SaturationResult& r, const Algebra& alg) {
  SoundnessReport report;
  std::map<std::string, Element> no_vars;
  std::vector<std::optional<Element>> value(r.classes().size());
  std::map<int, std::size_t> pos;
  for (std::size_t k = 0; k < r.classes().size(); ++k)
    pos[r.classes()[k]] = k;

  // Class equality must be model equality: all members of a class evaluate
  // to one element.
  for (std::size_t k = 0; k < r.classes().size(); ++k) {
    int cls = r.classes()[k];
    for (int member : r.members(cls)) {
      Element e;
      try {
        e = evaluate(r.universe()[member], alg, no_vars);
      } catch (const PartialOperation&) {
        ++report.partial_skips;
        continue;
      }
      if (!value[k]) {
        value[k] = e;
      } else if (!element_eq(*value[k], e)) {
        report.violations.push_back(
            "class " + r.representative(cls).str() +
            " maps to distinct model elements: " + element_str(*value[k]) +
            " vs " + element_str(e));
      }
    }
  }

  // Model distance is bounded by the derived distance.
  for (std::size_t i = 0; i < r.classes().size(); ++i)
    for (std::size_t j = 0; j < r.classes().size(); ++j) {
      if (!value[i] || !value[j]) continue;
      ++report.pairs_checked;
      UnitValue model = alg.distance(*value[i], *value[j]);
      UnitValue derived = r.dist(r.classes()[i], r.classes()[j]);
      if (model > derived)
        report.violations.push_back(
            "d(" + r.representative(r.classes()[i]).str() + ", " +
            r.representative(r.classes()[j]).str() + "): model " +
            model.str() + " exceeds derived " + derived.str());
    }
  return report;
}

}  // namespace qalg
