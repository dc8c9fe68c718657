#include "qalg/liftings.hpp"

#include "qalg/distributions.hpp"

#include <algorithm>

namespace qalg {

namespace {

void require_unit_open(const UnitValue& p, const char* what) {
  if (p.is_zero() || p.is_one())
    throw Error(std::string(what) + " parameter must lie in (0,1), got " +
                p.str());
}

}  // namespace

Lifting Lifting::sup_product(std::size_t arity) {
  return Lifting(LiftRule::SupProduct, arity, UnitValue::zero());
}

Lifting Lifting::discrete(std::size_t arity) {
  return Lifting(LiftRule::Discrete, arity, UnitValue::zero());
}

Lifting Lifting::scaled(const UnitValue& r) {
  require_unit_open(r, "scaled");
  return Lifting(LiftRule::Scaled, 1, r);
}

Lifting Lifting::identity() {
  return Lifting(LiftRule::Identity, 1, UnitValue::zero());
}

Lifting Lifting::kantorovich(const UnitValue& p) {
  require_unit_open(p, "kantorovich");
  return Lifting(LiftRule::Kantorovich, 2, p);
}

Lifting Lifting::lukaszyk_karmowski(const UnitValue& p) {
  require_unit_open(p, "lk");
  return Lifting(LiftRule::LukaszykKarmowski, 2, p);
}

Lifting Lifting::tabulated(std::size_t arity, Table table) {
  Lifting l(LiftRule::Tabulated, arity, UnitValue::zero());
  l.table_ = std::move(table);
  return l;
}

bool Lifting::operator==(const Lifting& o) const {
  if (rule_ != o.rule_ || arity_ != o.arity_ || param_ != o.param_)
    return false;
  if (rule_ == LiftRule::Tabulated) return false;
  return true;
}

std::string Lifting::str() const {
  switch (rule_) {
    case LiftRule::SupProduct: return "sup";
    case LiftRule::Discrete: return "discrete";
    case LiftRule::Scaled: return "scaled(" + param_.str() + ")";
    case LiftRule::Identity: return "identity";
    case LiftRule::Kantorovich: return "kantorovich(" + param_.str() + ")";
    case LiftRule::LukaszykKarmowski: return "lk(" + param_.str() + ")";
    case LiftRule::Tabulated: return "tabulated";
  }
  return "?";
}

namespace {

std::string tuple_label(const std::vector<std::string>& t) {
  if (t.empty()) return "()";
  if (t.size() == 1) return t[0];
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += t[i];
  }
  return s + ")";
}

UnitValue mixture_distance(bool kantorovich, const UnitValue& p,
                           const FiniteSpace& space,
                           const std::vector<std::string>& a,
                           const std::vector<std::string>& b) {
  UnitValue pbar = UnitValue(Rational(1) - p.value());
  Dist mu = convex_combine(p, Dist::dirac(a[0]), Dist::dirac(a[1]));
  Dist nu = convex_combine(p, Dist::dirac(b[0]), Dist::dirac(b[1]));
  if (kantorovich) return kantorovich_distance(space, mu, nu);
  // Closed bilinear form of the LK distance between the two mixtures.
  UnitValue v = p * p * space.d(a[0], b[0]);
  v = v.plus_clamped(p * pbar * space.d(a[0], b[1]));
  v = v.plus_clamped(pbar * p * space.d(a[1], b[0]));
  v = v.plus_clamped(pbar * pbar * space.d(a[1], b[1]));
  return v;
}

}  // namespace

UnitValue lift_value(const Lifting& l, const FiniteSpace& space,
                     const std::vector<std::string>& lhs,
                     const std::vector<std::string>& rhs) {
  if (lhs.size() != l.arity() || rhs.size() != l.arity())
    throw Error("tuple arity mismatch: lifting has arity " +
                std::to_string(l.arity()));
  switch (l.rule()) {
    case LiftRule::SupProduct: {
      if (l.arity() == 0)
        return space.kind().has(Axiom::Refl) ? UnitValue::zero()
                                             : UnitValue::one();
      UnitValue v = UnitValue::zero();
      for (std::size_t i = 0; i < lhs.size(); ++i)
        v = max(v, space.d(lhs[i], rhs[i]));
      return v;
    }
    case LiftRule::Discrete:
      return lhs == rhs ? UnitValue::zero() : UnitValue::one();
    case LiftRule::Scaled:
      return l.param() * space.d(lhs[0], rhs[0]);
    case LiftRule::Identity:
      return space.d(lhs[0], rhs[0]);
    case LiftRule::Kantorovich:
      return mixture_distance(true, l.param(), space, lhs, rhs);
    case LiftRule::LukaszykKarmowski:
      return mixture_distance(false, l.param(), space, lhs, rhs);
    case LiftRule::Tabulated: {
      FiniteSpace out = l.table()(space);
      return out.d(tuple_label(lhs), tuple_label(rhs));
    }
  }
  throw Error("unreachable lifting rule");
}

FiniteSpace apply(const Lifting& l, const FiniteSpace& space,
                  std::size_t materialization_budget) {
  if (l.rule() == LiftRule::Tabulated) return l.table()(space);
  if (l.arity() == 0) return terminal(space.kind());

  std::size_t count = 1;
  for (std::size_t i = 0; i < l.arity(); ++i) {
    count *= space.size();
    if (count > materialization_budget)
      throw Error("tuple space exceeds materialization budget of " +
                  std::to_string(materialization_budget));
  }

  std::vector<std::vector<std::string>> tuples{{}};
  for (std::size_t i = 0; i < l.arity(); ++i) {
    std::vector<std::vector<std::string>> next;
    for (const auto& t : tuples)
      for (const auto& p : space.points()) {
        auto u = t;
        u.push_back(p);
        next.push_back(std::move(u));
      }
    tuples = std::move(next);
  }

  std::vector<std::string> points;
  points.reserve(tuples.size());
  for (const auto& t : tuples) points.push_back(tuple_label(t));
  std::vector<std::vector<UnitValue>> m(tuples.size(),
                                        std::vector<UnitValue>(tuples.size()));
  for (std::size_t i = 0; i < tuples.size(); ++i)
    for (std::size_t j = 0; j < tuples.size(); ++j)
      m[i][j] = lift_value(l, space, tuples[i], tuples[j]);
  return FiniteSpace(std::move(points), std::move(m), space.kind());
}

bool check_embedding_preservation(const Lifting& l, const FiniteSpace& space,
                                  const std::vector<std::string>& subset) {
  FiniteSpace small = apply(l, restrict_space(space, subset));
  FiniteSpace big = apply(l, space);
  // Tuples over the subset, looked up in the big space by label.
  for (const auto& a : small.points())
    for (const auto& b : small.points())
      if (small.d(a, b) != big.d(a, b)) return false;
  return true;
}

}  // namespace qalg
