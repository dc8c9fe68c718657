#ifndef QALG_LIFTINGS_HPP
#define QALG_LIFTINGS_HPP

#include "qalg/gmet.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qalg {

enum class LiftRule {
  SupProduct,
  Discrete,
  Scaled,
  Identity,
  Kantorovich,
  LukaszykKarmowski,
  Tabulated,
};

/// A lifting of the n-ary product functor: maps a space (A,d) to a space on
/// A^n. The built-in rules cover the sup product, the discrete distance,
/// scaling, the Kantorovich lifting L_K^p and the Lukaszyk-Karmowski
/// lifting L_LK^p (both arity 2, parametrized by p in (0,1)).
class Lifting {
public:
  using Table = std::function<FiniteSpace(const FiniteSpace&)>;

  static Lifting sup_product(std::size_t arity);
  static Lifting discrete(std::size_t arity);
  static Lifting scaled(const UnitValue& r);
  static Lifting identity();
  static Lifting kantorovich(const UnitValue& p);
  static Lifting lukaszyk_karmowski(const UnitValue& p);
  /// User-supplied space-to-space function; preservation of isometric
  /// embeddings is only falsifiable by sampling, never proven.
  static Lifting tabulated(std::size_t arity, Table table);

  LiftRule rule() const { return rule_; }
  std::size_t arity() const { return arity_; }
  const UnitValue& param() const { return param_; }
  const Table& table() const { return table_; }

  /// Equal when rule, arity and parameter agree. Tabulated liftings only
  /// compare equal to themselves by identity of the callable target.
  bool operator==(const Lifting& o) const;
  bool operator!=(const Lifting& o) const { return !(*this == o); }

  /// Literal form used by theory files: sup, discrete, scaled(r),
  /// identity, kantorovich(p), lk(p).
  std::string str() const;

private:
  Lifting(LiftRule rule, std::size_t arity, UnitValue param)
      : rule_(rule), arity_(arity), param_(param) {}

  LiftRule rule_;
  std::size_t arity_;
  UnitValue param_;
  Table table_;
};

/// Distance between two arity-tuples of points under the lifted metric,
/// evaluated without materializing the tuple space.
UnitValue lift_value(const Lifting& l, const FiniteSpace& space,
                     const std::vector<std::string>& lhs,
                     const std::vector<std::string>& rhs);

/// Materializes the lifted space on n-tuples. Tuple points are labeled
/// "(a,b)"; arity-1 tuples keep the original point names, arity 0 yields
/// the terminal space. Fails when the tuple count exceeds the budget.
FiniteSpace apply(const Lifting& l, const FiniteSpace& space,
                  std::size_t materialization_budget = 4096);

/// True iff applying the lifting commutes with restriction to the subset,
/// distance for distance.
bool check_embedding_preservation(const Lifting& l, const FiniteSpace& space,
                                  const std::vector<std::string>& subset);

}  // namespace qalg

#endif
