#include "qalg/distributions.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace qalg {

Dist Dist::dirac(const std::string& atom) {
  Dist d;
  d.w_[atom] = 1;
  return d;
}

Dist Dist::from_weights(std::map<std::string, Rational> weights) {
  Rational total = 0;
  for (const auto& [atom, w] : weights) {
    if (w <= 0)
      throw Error("distribution weight for '" + atom + "' not positive");
    total += w;
  }
  if (total != 1)
    throw Error("distribution weights sum to " + rational_to_string(total) +
                ", expected 1");
  Dist d;
  d.w_ = std::move(weights);
  return d;
}

Rational Dist::weight(const std::string& atom) const {
  auto it = w_.find(atom);
  return it == w_.end() ? Rational(0) : it->second;
}

std::string Dist::str() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [atom, w] : w_) {
    if (!first) os << ", ";
    os << atom << ":" << rational_to_string(w);
    first = false;
  }
  os << "}";
  return os.str();
}

Dist convex_combine(const UnitValue& p, const Dist& mu, const Dist& nu) {
  if (p.is_zero() || p.is_one())
    throw Error("convex combination parameter must lie in (0,1)");
  std::map<std::string, Rational> w;
  for (const auto& [atom, x] : mu.weights()) w[atom] += p.value() * x;
  for (const auto& [atom, x] : nu.weights())
    w[atom] += (1 - p.value()) * x;
  return Dist::from_weights(std::move(w));
}

UnitValue lk_distance(const FiniteSpace& space, const Dist& mu,
                      const Dist& nu) {
  Rational total = 0;
  for (const auto& [x, wx] : mu.weights())
    for (const auto& [y, wy] : nu.weights())
      total += wx * wy * space.d(x, y).value();
  return UnitValue(total);
}

namespace {

// Exact transportation simplex. Rows are the support of mu, columns the
// support of nu; Bland's least-index rule on entering and leaving cells
// keeps the pivoting free of cycles.
class TransportSimplex {
public:
  TransportSimplex(const FiniteSpace& space, const Dist& mu, const Dist& nu) {
    for (const auto& [a, w] : mu.weights()) {
      rows_.push_back(a);
      supply_.push_back(w);
    }
    for (const auto& [b, w] : nu.weights()) {
      cols_.push_back(b);
      demand_.push_back(w);
    }
    m_ = rows_.size();
    n_ = cols_.size();
    cost_.assign(m_, std::vector<Rational>(n_));
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        cost_[i][j] = space.d(rows_[i], cols_[j]).value();
    x_.assign(m_, std::vector<Rational>(n_, Rational(0)));
    basic_.assign(m_, std::vector<bool>(n_, false));
  }

  TransportPlan solve() {
    northwest_corner();
    for (int iter = 0; iter < kMaxPivots; ++iter) {
      compute_potentials();
      auto entering = find_entering();
      if (!entering) return extract();
      pivot(entering->first, entering->second);
    }
    throw Error("transportation simplex failed to terminate");
  }

private:
  static constexpr int kMaxPivots = 100000;

  void northwest_corner() {
    std::vector<Rational> a = supply_, b = demand_;
    std::size_t i = 0, j = 0;
    while (true) {
      basic_[i][j] = true;
      Rational t = std::min(a[i], b[j]);
      x_[i][j] = t;
      a[i] -= t;
      b[j] -= t;
      if (i + 1 == m_ && j + 1 == n_) break;
      if (a[i] == 0 && i + 1 < m_)
        ++i;
      else
        ++j;
    }
  }

  // Basis cells form a spanning tree on rows+cols; solve u_i + v_j = c_ij
  // with u_0 = 0 by walking that tree.
  void compute_potentials() {
    u_.assign(m_, Rational(0));
    v_.assign(n_, Rational(0));
    std::vector<bool> row_done(m_, false), col_done(n_, false);
    row_done[0] = true;
    std::deque<std::pair<bool, std::size_t>> queue{{true, 0}};
    while (!queue.empty()) {
      auto [is_row, k] = queue.front();
      queue.pop_front();
      if (is_row) {
        for (std::size_t j = 0; j < n_; ++j)
          if (basic_[k][j] && !col_done[j]) {
            v_[j] = cost_[k][j] - u_[k];
            col_done[j] = true;
            queue.emplace_back(false, j);
          }
      } else {
        for (std::size_t i = 0; i < m_; ++i)
          if (basic_[i][k] && !row_done[i]) {
            u_[i] = cost_[i][k] - v_[k];
            row_done[i] = true;
            queue.emplace_back(true, i);
          }
      }
    }
    for (bool d : row_done)
      if (!d) throw Error("transport basis is not connected");
    for (bool d : col_done)
      if (!d) throw Error("transport basis is not connected");
  }

  std::optional<std::pair<std::size_t, std::size_t>> find_entering() const {
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (!basic_[i][j] && cost_[i][j] - u_[i] - v_[j] < 0)
          return std::make_pair(i, j);
    return std::nullopt;
  }

  void pivot(std::size_t ei, std::size_t ej) {
    // Unique path from column ej back to row ei through the basis tree.
    // Nodes: rows 0..m-1, then columns m..m+n-1.
    std::size_t total = m_ + n_;
    std::vector<int> prev(total, -1);
    std::vector<bool> seen(total, false);
    std::deque<std::size_t> queue{m_ + ej};
    seen[m_ + ej] = true;
    while (!queue.empty()) {
      std::size_t node = queue.front();
      queue.pop_front();
      if (node == ei) break;
      if (node < m_) {
        for (std::size_t j = 0; j < n_; ++j)
          if (basic_[node][j] && !seen[m_ + j]) {
            seen[m_ + j] = true;
            prev[m_ + j] = static_cast<int>(node);
            queue.push_back(m_ + j);
          }
      } else {
        std::size_t j = node - m_;
        for (std::size_t i = 0; i < m_; ++i)
          if (basic_[i][j] && !seen[i]) {
            seen[i] = true;
            prev[i] = static_cast<int>(node);
            queue.push_back(i);
          }
      }
    }
    if (!seen[ei]) throw Error("transport basis is not a tree");

    // Path node sequence ei .. ej; consecutive nodes are basis cells and
    // alternate -,+ starting with - next to the entering cell.
    std::vector<std::size_t> path;
    for (int node = static_cast<int>(ei); node != -1; node = prev[node])
      path.push_back(static_cast<std::size_t>(node));
    std::vector<std::pair<std::size_t, std::size_t>> minus, plus;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      std::size_t a = path[k], b = path[k + 1];
      std::size_t i = a < m_ ? a : b;
      std::size_t j = (a < m_ ? b : a) - m_;
      if (k % 2 == 0)
        minus.emplace_back(i, j);
      else
        plus.emplace_back(i, j);
    }

    Rational theta = x_[minus[0].first][minus[0].second];
    std::pair<std::size_t, std::size_t> leaving = minus[0];
    for (const auto& [i, j] : minus)
      if (x_[i][j] < theta || (x_[i][j] == theta && std::make_pair(i, j) < leaving)) {
        theta = x_[i][j];
        leaving = {i, j};
      }

    x_[ei][ej] += theta;
    basic_[ei][ej] = true;
    for (const auto& [i, j] : plus) x_[i][j] += theta;
    for (const auto& [i, j] : minus) x_[i][j] -= theta;
    basic_[leaving.first][leaving.second] = false;
  }

  TransportPlan extract() const {
    TransportPlan plan;
    Rational primal = 0;
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        primal += x_[i][j] * cost_[i][j];
        if (x_[i][j] != 0) plan.coupling[{rows_[i], cols_[j]}] = x_[i][j];
      }
    plan.value = UnitValue(primal);
    for (std::size_t i = 0; i < m_; ++i) plan.row_potential[rows_[i]] = u_[i];
    for (std::size_t j = 0; j < n_; ++j) plan.col_potential[cols_[j]] = v_[j];
    return plan;
  }

  std::vector<std::string> rows_, cols_;
  std::vector<Rational> supply_, demand_, u_, v_;
  std::vector<std::vector<Rational>> cost_, x_;
  std::vector<std::vector<bool>> basic_;
  std::size_t m_ = 0, n_ = 0;
};

void verify_transport_certificate(const FiniteSpace& space, const Dist& mu,
                                  const Dist& nu, const TransportPlan& plan) {
  // Primal feasibility.
  std::map<std::string, Rational> row_sum, col_sum;
  Rational primal = 0;
  for (const auto& [cell, w] : plan.coupling) {
    if (w < 0) throw Error("transport certificate: negative coupling entry");
    row_sum[cell.first] += w;
    col_sum[cell.second] += w;
    primal += w * space.d(cell.first, cell.second).value();
  }
  for (const auto& [a, w] : mu.weights())
    if (row_sum[a] != w) throw Error("transport certificate: row marginal off");
  for (const auto& [b, w] : nu.weights())
    if (col_sum[b] != w) throw Error("transport certificate: column marginal off");
  if (primal != plan.value.value())
    throw Error("transport certificate: stated value differs from plan cost");
  // Dual feasibility and strong duality.
  Rational dual = 0;
  for (const auto& [a, wa] : mu.weights()) {
    for (const auto& [b, wb] : nu.weights()) {
      Rational slack = space.d(a, b).value() - plan.row_potential.at(a) -
                       plan.col_potential.at(b);
      if (slack < 0) throw Error("transport certificate: dual infeasible");
    }
    dual += plan.row_potential.at(a) * wa;
  }
  for (const auto& [b, wb] : nu.weights())
    dual += plan.col_potential.at(b) * wb;
  if (dual != primal)
    throw Error("transport certificate: duality gap " +
                rational_to_string(primal - dual));
}

}  // namespace

TransportPlan kantorovich_transport(const FiniteSpace& space, const Dist& mu,
                                    const Dist& nu) {
  for (const auto& [a, w] : mu.weights()) space.index_of(a);
  for (const auto& [b, w] : nu.weights()) space.index_of(b);
  TransportPlan plan = TransportSimplex(space, mu, nu).solve();
  verify_transport_certificate(space, mu, nu, plan);
  return plan;
}

UnitValue kantorovich_distance(const FiniteSpace& space, const Dist& mu,
                               const Dist& nu) {
  return kantorovich_transport(space, mu, nu).value;
}

UnitValue lk_lift_value(const UnitValue& p, const FiniteSpace& space,
                        const std::pair<std::string, std::string>& a,
                        const std::pair<std::string, std::string>& b) {
  Dist mu = convex_combine(p, Dist::dirac(a.first), Dist::dirac(a.second));
  Dist nu = convex_combine(p, Dist::dirac(b.first), Dist::dirac(b.second));
  UnitValue by_sum = lk_distance(space, mu, nu);
  Rational pv = p.value(), pb = 1 - pv;
  Rational bilinear = pv * pv * space.d(a.first, b.first).value() +
                      pv * pb * space.d(a.first, b.second).value() +
                      pb * pv * space.d(a.second, b.first).value() +
                      pb * pb * space.d(a.second, b.second).value();
  if (by_sum.value() != bilinear)
    throw Error("LK lift: double sum disagrees with bilinear form");
  return by_sum;
}

UnitValue kant_lift_value(const UnitValue& p, const FiniteSpace& space,
                          const std::pair<std::string, std::string>& a,
                          const std::pair<std::string, std::string>& b) {
  Dist mu = convex_combine(p, Dist::dirac(a.first), Dist::dirac(a.second));
  Dist nu = convex_combine(p, Dist::dirac(b.first), Dist::dirac(b.second));
  return kantorovich_distance(space, mu, nu);
}

Dist term_to_distribution(const Term& t, const FiniteSpace& space) {
  switch (t.kind()) {
    case Term::Kind::Const:
      space.index_of(t.name());
      return Dist::dirac(t.name());
    case Term::Kind::App: {
      if (!t.sym().param || t.args().size() != 2)
        throw Error("term_to_distribution: '" + t.sym().str() +
                    "' is not a binary convex operation");
      UnitValue p(*t.sym().param);
      return convex_combine(p, term_to_distribution(t.args()[0], space),
                            term_to_distribution(t.args()[1], space));
    }
    case Term::Kind::Var:
      throw Error("term_to_distribution: term contains variable '" +
                  t.name() + "'");
  }
  throw Error("unreachable term kind");
}

Dist random_dist(const std::vector<std::string>& atoms, int max_denominator,
                 std::mt19937& rng) {
  if (atoms.empty()) throw Error("random_dist: empty atom set");
  std::size_t max_support =
      std::min<std::size_t>(atoms.size(), 4);
  std::uniform_int_distribution<std::size_t> support_size(1, max_support);
  std::size_t k = support_size(rng);
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(k);

  std::uniform_int_distribution<int> den_pick(static_cast<int>(k),
                                              std::max<int>(max_denominator, static_cast<int>(k)));
  int den = den_pick(rng);
  // Random composition of den into k positive parts.
  std::vector<int> cuts;
  std::uniform_int_distribution<int> cut_pick(1, den - 1);
  std::set<int> cut_set;
  while (cut_set.size() + 1 < k) cut_set.insert(cut_pick(rng));
  cuts.assign(cut_set.begin(), cut_set.end());
  cuts.push_back(den);
  std::map<std::string, Rational> w;
  int prev = 0;
  for (std::size_t i = 0; i < k; ++i) {
    w[atoms[order[i]]] += Rational(cuts[i] - prev, den);
    prev = cuts[i];
  }
  return Dist::from_weights(std::move(w));
}

}  // namespace qalg
