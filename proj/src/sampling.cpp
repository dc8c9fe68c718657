#include "qalg/sampling.hpp"

#include <algorithm>

namespace qalg {

FiniteSpace random_space(const MetricKind& kind, std::size_t max_points,
                         std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> size_pick(1, max_points);
  std::size_t n = size_pick(rng);
  std::uniform_int_distribution<int> num_pick(0, 12);
  auto draw = [&](bool allow_zero) {
    int v = num_pick(rng);
    if (!allow_zero && v == 0) v = 1;
    return Rational(v, 12);
  };

  bool need_positive = kind.has(Axiom::IdOfInd);
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j)
        m[i][j] = kind.has(Axiom::Refl) ? Rational(0) : draw(true);
      else if (kind.has(Axiom::Sym) && j < i)
        m[i][j] = m[j][i];
      else
        m[i][j] = draw(!need_positive);
    }

  if (kind.has(Axiom::Tri))
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          m[i][j] = std::min(m[i][j], Rational(m[i][k] + m[k][j]));
  if (kind.has(Axiom::StrongTri))
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          m[i][j] = std::min(m[i][j], std::max(m[i][k], m[k][j]));

  std::vector<std::string> points;
  for (std::size_t i = 0; i < n; ++i)
    points.push_back("p" + std::to_string(i));
  std::vector<std::vector<UnitValue>> units(n, std::vector<UnitValue>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) units[i][j] = UnitValue(m[i][j]);
  FiniteSpace space(std::move(points), std::move(units), kind);
  ValidationReport report = validate_space(space);
  if (!report.ok())
    throw Error("random_space produced an invalid space: " + report.str());
  return space;
}

UnitValue bruteforce_kantorovich(const FiniteSpace& space, const Dist& mu,
                                 const Dist& nu) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::denominator;
  cpp_int scale = 1;
  for (const auto& [a, w] : mu.weights())
    scale = boost::multiprecision::lcm(scale, denominator(w));
  for (const auto& [b, w] : nu.weights())
    scale = boost::multiprecision::lcm(scale, denominator(w));

  std::vector<std::string> rows, cols;
  std::vector<cpp_int> supply, demand;
  for (const auto& [a, w] : mu.weights()) {
    rows.push_back(a);
    supply.push_back(boost::multiprecision::numerator(Rational(w * scale)));
  }
  for (const auto& [b, w] : nu.weights()) {
    cols.push_back(b);
    demand.push_back(boost::multiprecision::numerator(Rational(w * scale)));
  }

  std::optional<Rational> best;
  std::vector<cpp_int> remaining = demand;
  std::vector<std::vector<cpp_int>> plan(
      rows.size(), std::vector<cpp_int>(cols.size(), cpp_int(0)));

  // Row-by-row enumeration of integer couplings at resolution 1/scale. An
  // optimal vertex of the transportation polytope has this form.
  std::function<void(std::size_t)> fill_row = [&](std::size_t i) {
    if (i == rows.size()) {
      Rational cost = 0;
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
          cost += Rational(plan[r][c], scale) * space.d(rows[r], cols[c]).value();
      if (!best || cost < *best) best = cost;
      return;
    }
    std::function<void(std::size_t, cpp_int)> fill_cell =
        [&](std::size_t j, cpp_int left) {
          if (j + 1 == cols.size()) {
            if (left > remaining[j]) return;
            plan[i][j] = left;
            remaining[j] -= left;
            fill_row(i + 1);
            remaining[j] += left;
            plan[i][j] = 0;
            return;
          }
          cpp_int cap = std::min(left, remaining[j]);
          for (cpp_int take = 0; take <= cap; ++take) {
            plan[i][j] = take;
            remaining[j] -= take;
            fill_cell(j + 1, left - take);
            remaining[j] += take;
            plan[i][j] = 0;
          }
        };
    fill_cell(0, supply[i]);
  };
  fill_row(0);
  if (!best) throw Error("bruteforce_kantorovich found no coupling");
  return UnitValue(*best);
}

std::vector<Dist> all_dists_with_denominator(
    const std::vector<std::string>& points, int denominator,
    std::size_t max_support) {
  std::vector<Dist> out;
  std::vector<std::string> chosen;
  std::function<void(std::size_t)> pick_support = [&](std::size_t from) {
    if (!chosen.empty()) {
      // Compositions of `denominator` into |chosen| positive parts.
      std::vector<int> parts(chosen.size());
      std::function<void(std::size_t, int)> comp = [&](std::size_t k, int left) {
        if (k + 1 == parts.size()) {
          if (left <= 0) return;
          parts[k] = left;
          std::map<std::string, Rational> w;
          for (std::size_t c = 0; c < chosen.size(); ++c)
            w[chosen[c]] = Rational(parts[c], denominator);
          out.push_back(Dist::from_weights(std::move(w)));
          return;
        }
        for (int take = 1; left - take >= static_cast<int>(parts.size() - k - 1);
             ++take) {
          parts[k] = take;
          comp(k + 1, left - take);
        }
      };
      comp(0, denominator);
    }
    if (chosen.size() == max_support) return;
    for (std::size_t i = from; i < points.size(); ++i) {
      chosen.push_back(points[i]);
      pick_support(i + 1);
      chosen.pop_back();
    }
  };
  pick_support(0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace qalg
