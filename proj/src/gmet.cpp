#include "qalg/gmet.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace qalg {

const char* axiom_name(Axiom a) {
  switch (a) {
    case Axiom::Sym: return "SYM";
    case Axiom::Refl: return "REFL";
    case Axiom::IdOfInd: return "IDOFIND";
    case Axiom::Tri: return "TRI";
    case Axiom::StrongTri: return "STRONGTRI";
  }
  return "?";
}

namespace {

struct NamedKind {
  const char* name;
  std::initializer_list<Axiom> axioms;
};

// Axiom subsets read off the lattice of generalized metric spaces.
const std::array<NamedKind, 10> kNamedKinds = {{
    {"FRel", {}},
    {"PSMet", {Axiom::Sym, Axiom::Refl}},
    {"PQMet", {Axiom::Refl, Axiom::Tri}},
    {"DMet", {Axiom::Sym, Axiom::Tri}},
    {"MMet", {Axiom::Sym, Axiom::IdOfInd, Axiom::Tri}},
    {"SMet", {Axiom::Sym, Axiom::Refl, Axiom::IdOfInd}},
    {"QMet", {Axiom::Refl, Axiom::IdOfInd, Axiom::Tri}},
    {"PMet", {Axiom::Sym, Axiom::Refl, Axiom::Tri}},
    {"Met", {Axiom::Sym, Axiom::Refl, Axiom::IdOfInd, Axiom::Tri}},
    {"UMet",
     {Axiom::Sym, Axiom::Refl, Axiom::IdOfInd, Axiom::Tri, Axiom::StrongTri}},
}};

}  // namespace

MetricKind::MetricKind(std::initializer_list<Axiom> axioms) {
  for (Axiom a : axioms) bits_ |= bit(a);
  normalize();
}

MetricKind::MetricKind(const std::vector<Axiom>& axioms) {
  for (Axiom a : axioms) bits_ |= bit(a);
  normalize();
}

void MetricKind::normalize() {
  // Strong triangle implies triangle.
  if (has(Axiom::StrongTri)) bits_ |= bit(Axiom::Tri);
}

MetricKind MetricKind::named(const std::string& name) {
  for (const auto& k : kNamedKinds)
    if (name == k.name) return MetricKind(k.axioms);
  throw Error("unknown metric kind: '" + name + "'");
}

const std::vector<std::string>& MetricKind::all_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& k : kNamedKinds) v.push_back(k.name);
    return v;
  }();
  return names;
}

std::vector<Axiom> MetricKind::axioms() const {
  std::vector<Axiom> out;
  for (Axiom a : {Axiom::Sym, Axiom::Refl, Axiom::IdOfInd, Axiom::Tri,
                  Axiom::StrongTri})
    if (has(a)) out.push_back(a);
  return out;
}

std::optional<std::string> MetricKind::name() const {
  for (const auto& k : kNamedKinds)
    if (*this == MetricKind(k.axioms)) return std::string(k.name);
  return std::nullopt;
}

std::string MetricKind::str() const {
  if (auto n = name()) return *n;
  std::string out = "{";
  bool first = true;
  for (Axiom a : axioms()) {
    if (!first) out += ",";
    out += axiom_name(a);
    first = false;
  }
  return out + "}";
}

FiniteSpace::FiniteSpace(std::vector<std::string> points,
                         std::vector<std::vector<UnitValue>> matrix,
                         MetricKind kind)
    : points_(std::move(points)), matrix_(std::move(matrix)), kind_(kind) {
  if (matrix_.size() != points_.size())
    throw Error("distance matrix has " + std::to_string(matrix_.size()) +
                " rows for " + std::to_string(points_.size()) + " points");
  for (const auto& row : matrix_)
    if (row.size() != points_.size())
      throw Error("distance matrix row has wrong width");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!index_.emplace(points_[i], i).second)
      throw Error("duplicate point '" + points_[i] + "'");
  }
}

std::size_t FiniteSpace::index_of(const std::string& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) throw Error("unknown point '" + p + "'");
  return it->second;
}

SpaceMap::SpaceMap(FiniteSpace s, FiniteSpace t,
                   std::map<std::string, std::string> m)
    : src(std::move(s)), dst(std::move(t)), table(std::move(m)) {
  for (const auto& p : src.points()) {
    auto it = table.find(p);
    if (it == table.end()) throw Error("map not total: missing '" + p + "'");
    dst.index_of(it->second);
  }
}

const std::string& SpaceMap::apply(const std::string& p) const {
  auto it = table.find(p);
  if (it == table.end()) throw Error("map not total: missing '" + p + "'");
  return it->second;
}

bool SpaceMap::is_nonexpansive() const {
  for (const auto& a : src.points())
    for (const auto& b : src.points())
      if (dst.d(apply(a), apply(b)) > src.d(a, b)) return false;
  return true;
}

std::string AxiomViolation::str() const {
  std::ostringstream os;
  os << axiom_name(axiom) << " at (";
  for (std::size_t i = 0; i < witness.size(); ++i) {
    if (i) os << ",";
    os << witness[i];
  }
  os << ")";
  return os.str();
}

std::string ValidationReport::str() const {
  if (ok()) return "valid";
  std::ostringstream os;
  for (const auto& v : violations) os << v.str() << "\n";
  return os.str();
}

ValidationReport validate_space(const FiniteSpace& s) {
  ValidationReport report;
  const std::size_t n = s.size();
  const MetricKind& k = s.kind();
  auto pt = [&](std::size_t i) { return s.points()[i]; };

  if (k.has(Axiom::Refl))
    for (std::size_t i = 0; i < n; ++i)
      if (!s.d(i, i).is_zero())
        report.violations.push_back({Axiom::Refl, {pt(i)}});

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (k.has(Axiom::Sym) && i < j && s.d(i, j) != s.d(j, i))
        report.violations.push_back({Axiom::Sym, {pt(i), pt(j)}});
      if (k.has(Axiom::IdOfInd) && i != j && s.d(i, j).is_zero())
        report.violations.push_back({Axiom::IdOfInd, {pt(i), pt(j)}});
    }

  if (k.has(Axiom::Tri) || k.has(Axiom::StrongTri))
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) {
          if (k.has(Axiom::Tri) && s.d(i, l) > s.d(i, j).plus_clamped(s.d(j, l)))
            report.violations.push_back({Axiom::Tri, {pt(i), pt(j), pt(l)}});
          if (k.has(Axiom::StrongTri) &&
              s.d(i, l) > max(s.d(i, j), s.d(j, l)))
            report.violations.push_back(
                {Axiom::StrongTri, {pt(i), pt(j), pt(l)}});
        }
  return report;
}

namespace {

void require_shared_kind(const std::vector<FiniteSpace>& spaces) {
  if (spaces.empty()) throw Error("empty space family");
  for (const auto& s : spaces)
    if (s.kind() != spaces.front().kind())
      throw Error("mixed metric kinds: " + spaces.front().kind().str() +
                  " vs " + s.kind().str());
}

}  // namespace

FiniteSpace product(const std::vector<FiniteSpace>& spaces) {
  require_shared_kind(spaces);
  std::vector<std::vector<std::size_t>> tuples{{}};
  for (const auto& s : spaces) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& t : tuples)
      for (std::size_t i = 0; i < s.size(); ++i) {
        auto u = t;
        u.push_back(i);
        next.push_back(std::move(u));
      }
    tuples = std::move(next);
  }
  std::vector<std::string> points;
  points.reserve(tuples.size());
  for (const auto& t : tuples) {
    std::string label = "(";
    for (std::size_t c = 0; c < t.size(); ++c) {
      if (c) label += ",";
      label += spaces[c].points()[t[c]];
    }
    points.push_back(label + ")");
  }
  std::vector<std::vector<UnitValue>> m(
      tuples.size(), std::vector<UnitValue>(tuples.size()));
  for (std::size_t i = 0; i < tuples.size(); ++i)
    for (std::size_t j = 0; j < tuples.size(); ++j) {
      UnitValue v = UnitValue::zero();
      for (std::size_t c = 0; c < spaces.size(); ++c)
        v = max(v, spaces[c].d(tuples[i][c], tuples[j][c]));
      m[i][j] = v;
    }
  return FiniteSpace(std::move(points), std::move(m), spaces.front().kind());
}

FiniteSpace terminal(const MetricKind& kind) {
  UnitValue self =
      kind.has(Axiom::Refl) ? UnitValue::zero() : UnitValue::one();
  return FiniteSpace({"()"}, {{self}}, kind);
}

FiniteSpace coproduct(const std::vector<FiniteSpace>& spaces) {
  require_shared_kind(spaces);
  std::vector<std::string> points;
  std::vector<std::pair<std::size_t, std::size_t>> origin;  // (component, index)
  for (std::size_t c = 0; c < spaces.size(); ++c)
    for (std::size_t i = 0; i < spaces[c].size(); ++i) {
      points.push_back(std::to_string(c) + "." + spaces[c].points()[i]);
      origin.emplace_back(c, i);
    }
  std::vector<std::vector<UnitValue>> m(points.size(),
                                        std::vector<UnitValue>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j) {
      auto [ci, pi] = origin[i];
      auto [cj, pj] = origin[j];
      m[i][j] = ci == cj ? spaces[ci].d(pi, pj) : UnitValue::one();
    }
  return FiniteSpace(std::move(points), std::move(m), spaces.front().kind());
}

FiniteSpace restrict_space(const FiniteSpace& space,
                           const std::vector<std::string>& subset) {
  std::vector<std::size_t> idx;
  idx.reserve(subset.size());
  for (const auto& p : subset) idx.push_back(space.index_of(p));
  std::vector<std::vector<UnitValue>> m(subset.size(),
                                        std::vector<UnitValue>(subset.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j)
      m[i][j] = space.d(idx[i], idx[j]);
  return FiniteSpace(subset, std::move(m), space.kind());
}

bool check_isometric_embedding(const SpaceMap& f) {
  // Injectivity.
  std::map<std::string, std::string> seen;
  for (const auto& p : f.src.points()) {
    auto [it, fresh] = seen.emplace(f.apply(p), p);
    if (!fresh) return false;
  }
  for (const auto& a : f.src.points())
    for (const auto& b : f.src.points())
      if (f.dst.d(f.apply(a), f.apply(b)) != f.src.d(a, b)) return false;
  return true;
}

}  // namespace qalg
