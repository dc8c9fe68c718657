#ifndef QALG_SAMPLING_HPP
#define QALG_SAMPLING_HPP

#include "qalg/distributions.hpp"
#include "qalg/gmet.hpp"

#include <random>

namespace qalg {

/// A random space of the requested kind: distances are drawn from a small
/// rational grid and repaired (symmetrization, zero diagonal, min-plus or
/// min-max closure) until the kind's axioms hold. The result always passes
/// validate_space.
FiniteSpace random_space(const MetricKind& kind, std::size_t max_points,
                         std::mt19937& rng);

/// Brute-force Kantorovich oracle: enumerates every coupling whose entries
/// are multiples of 1/lcm(weight denominators) and takes the cheapest. The
/// optimum of the transportation problem is attained at such a vertex, so
/// this is exact. Exponential; use on small supports only.
UnitValue bruteforce_kantorovich(const FiniteSpace& space, const Dist& mu,
                                 const Dist& nu);

/// Every distribution over the points with all weights multiples of
/// 1/denominator and support of size at most max_support.
std::vector<Dist> all_dists_with_denominator(
    const std::vector<std::string>& points, int denominator,
    std::size_t max_support);

}  // namespace qalg

#endif
