#ifndef QALG_DISTRIBUTIONS_HPP
#define QALG_DISTRIBUTIONS_HPP

#include "qalg/gmet.hpp"
#include "qalg/terms.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace qalg {

/// A finitely supported probability distribution: strictly positive
/// rational weights summing to exactly 1, support kept in canonical order.
class Dist {
public:
  Dist() = default;

  static Dist dirac(const std::string& atom);
  static Dist from_weights(std::map<std::string, Rational> weights);

  const std::map<std::string, Rational>& weights() const { return w_; }
  Rational weight(const std::string& atom) const;
  std::size_t support_size() const { return w_.size(); }

  bool operator==(const Dist& o) const { return w_ == o.w_; }
  bool operator!=(const Dist& o) const { return w_ != o.w_; }
  bool operator<(const Dist& o) const { return w_ < o.w_; }

  std::string str() const;

private:
  std::map<std::string, Rational> w_;
};

/// Pointwise mixture p*mu + (1-p)*nu for p in (0,1).
Dist convex_combine(const UnitValue& p, const Dist& mu, const Dist& nu);

/// Lukaszyk-Karmowski distance: the exact double sum
/// sum_x sum_y mu(x) nu(y) d(x,y). Defined for any fuzzy relation; its
/// metric guarantees hold for diffuse metric inputs.
UnitValue lk_distance(const FiniteSpace& space, const Dist& mu, const Dist& nu);

/// Optimal transport plan together with the dual potentials certifying
/// optimality (primal value equals dual value).
struct TransportPlan {
  UnitValue value;
  std::map<std::pair<std::string, std::string>, Rational> coupling;
  std::map<std::string, Rational> row_potential;
  std::map<std::string, Rational> col_potential;
};

/// Exact minimum over couplings of the expected ground distance, computed
/// by a transportation simplex in rational arithmetic. Every call verifies
/// the strong-duality certificate before returning.
TransportPlan kantorovich_transport(const FiniteSpace& space, const Dist& mu,
                                    const Dist& nu);
UnitValue kantorovich_distance(const FiniteSpace& space, const Dist& mu,
                               const Dist& nu);

/// L_LK^p(d)((a1,a2),(b1,b2)): the LK distance between the two p-mixtures
/// of Diracs. Evaluates both the double sum and the closed bilinear form
/// and insists they agree.
UnitValue lk_lift_value(const UnitValue& p, const FiniteSpace& space,
                        const std::pair<std::string, std::string>& a,
                        const std::pair<std::string, std::string>& b);

/// L_K^p(d)((a1,a2),(b1,b2)): Kantorovich distance between the p-mixtures.
UnitValue kant_lift_value(const UnitValue& p, const FiniteSpace& space,
                          const std::pair<std::string, std::string>& a,
                          const std::pair<std::string, std::string>& b);

/// Evaluates a ground convex term (constants and +_p applications only)
/// to the distribution it denotes.
Dist term_to_distribution(const Term& t, const FiniteSpace& space);

/// Seeded random distribution over a subset of the atoms, weights with
/// denominator at most max_denominator.
Dist random_dist(const std::vector<std::string>& atoms, int max_denominator,
                 std::mt19937& rng);

}  // namespace qalg

#endif
