#include "ttda/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "ttda/errors.hpp"

namespace ttda {
namespace {

void require_finite(const PersistenceDiagram& d, const char* which) {
  for (const auto& f : d.features) {
    if (!std::isfinite(f.birth) || !std::isfinite(f.death)) {
      throw DomainError(std::string(which) +
                        " diagram has an infinite feature; filter essential classes "
                        "(e.g. keep dimension 1 only) before computing the distance");
    }
  }
}

}  // namespace

double ground_cost(const PersistenceFeature& x, const PersistenceFeature& y) {
  return std::max(std::abs(x.birth - y.birth), std::abs(x.death - y.death));
}

double diagonal_cost(const PersistenceFeature& x) { return (x.death - x.birth) / 2.0; }

// Shortest augmenting path with row/column potentials (Jonker-Volgenant
// style), O(n^3).
std::vector<std::size_t> solve_assignment(const std::vector<double>& cost, std::size_t n) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  // 1-based with a virtual column 0, as in the classic formulation.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> row_of(n + 1, 0), way(n + 1, 0);
  std::vector<double> min_slack(n + 1);
  std::vector<bool> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    row_of[0] = i;
    std::size_t col = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[col] = true;
      const std::size_t row = row_of[col];
      double delta = kInf;
      std::size_t next = kNone;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double slack = cost[(row - 1) * n + (j - 1)] - u[row] - v[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = col;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          next = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      col = next;
    } while (row_of[col] != 0);
    do {
      const std::size_t prev = way[col];
      row_of[col] = row_of[prev];
      col = prev;
    } while (col != 0);
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t j = 1; j <= n; ++j) assignment[row_of[j] - 1] = j - 1;
  return assignment;
}

namespace {

std::vector<std::pair<double, double>> sorted_points(const PersistenceDiagram& d) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(d.features.size());
  for (const auto& f : d.features) pts.emplace_back(f.birth, f.death);
  std::sort(pts.begin(), pts.end());
  return pts;
}

Matching solve_matching(const PersistenceDiagram& d1, const PersistenceDiagram& d2) {
  const auto& a = d1.features;
  const auto& b = d2.features;
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  const std::size_t n = n1 + n2;
  Matching matching;
  if (n == 0) return matching;

  // Equal multisets: pair sorted copies directly so the distance is exactly 0.
  if (n1 == n2) {
    std::vector<std::size_t> ia(n1), ib(n2);
    for (std::size_t i = 0; i < n1; ++i) ia[i] = ib[i] = i;
    auto by_point = [](const auto& pts) {
      return [&pts](std::size_t x, std::size_t y) {
        return std::tie(pts[x].birth, pts[x].death) < std::tie(pts[y].birth, pts[y].death);
      };
    };
    std::sort(ia.begin(), ia.end(), by_point(a));
    std::sort(ib.begin(), ib.end(), by_point(b));
    bool equal = true;
    for (std::size_t i = 0; i < n1 && equal; ++i) {
      equal = a[ia[i]].birth == b[ib[i]].birth && a[ia[i]].death == b[ib[i]].death;
    }
    if (equal) {
      for (std::size_t i = 0; i < n1; ++i) {
        matching.pairs.push_back({{ia[i], a[ia[i]].birth, a[ia[i]].death},
                                  {ib[i], b[ib[i]].birth, b[ib[i]].death},
                                  0.0});
      }
      std::sort(matching.pairs.begin(), matching.pairs.end(),
                [](const auto& x, const auto& y) { return *x.first.feature < *y.first.feature; });
      return matching;
    }
  }

  // Rows: points of d1, then diagonal slots standing in for d2's points.
  // Columns: points of d2, then diagonal slots for d1's points.
  std::vector<double> cost(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double c = 0.0;
      if (i < n1 && j < n2) {
        c = ground_cost(a[i], b[j]);
      } else if (i < n1) {
        c = diagonal_cost(a[i]);
      } else if (j < n2) {
        c = diagonal_cost(b[j]);
      }
      cost[i * n + j] = c;
    }
  }
  const auto assignment = solve_assignment(cost, n);

  auto diagonal_of = [](const PersistenceFeature& f) {
    const double mid = (f.birth + f.death) / 2.0;
    return MatchEnd{std::nullopt, mid, mid};
  };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = assignment[i];
    if (i >= n1 && j >= n2) continue;  // diagonal to diagonal
    MatchedPair pair;
    if (i < n1 && j < n2) {
      pair.first = {i, a[i].birth, a[i].death};
      pair.second = {j, b[j].birth, b[j].death};
    } else if (i < n1) {
      pair.first = {i, a[i].birth, a[i].death};
      pair.second = diagonal_of(a[i]);
    } else {
      pair.first = diagonal_of(b[j]);
      pair.second = {j, b[j].birth, b[j].death};
    }
    pair.cost = cost[i * n + j];
    matching.pairs.push_back(pair);
  }

  auto order_key = [](const MatchedPair& p) {
    const auto key = [](const MatchEnd& e) {
      return e.feature ? static_cast<long long>(*e.feature) : std::numeric_limits<long long>::max();
    };
    return std::make_tuple(key(p.first), key(p.second));
  };
  std::sort(matching.pairs.begin(), matching.pairs.end(),
            [&](const auto& x, const auto& y) { return order_key(x) < order_key(y); });
  std::vector<double> costs;
  for (const auto& p : matching.pairs) costs.push_back(p.cost);
  std::sort(costs.begin(), costs.end());
  for (double c : costs) matching.total_cost += c;
  return matching;
}

}  // namespace

// The problem is always solved with the diagrams in a canonical order so that
// swapping the arguments mirrors the matching and keeps the cost bitwise equal.
Matching optimal_matching(const PersistenceDiagram& d1, const PersistenceDiagram& d2) {
  require_finite(d1, "first");
  require_finite(d2, "second");
  if (sorted_points(d2) >= sorted_points(d1)) return solve_matching(d1, d2);
  Matching m = solve_matching(d2, d1);
  for (auto& p : m.pairs) std::swap(p.first, p.second);
  auto key = [](const MatchEnd& e) {
    return e.feature ? static_cast<long long>(*e.feature) : std::numeric_limits<long long>::max();
  };
  std::sort(m.pairs.begin(), m.pairs.end(), [&](const auto& x, const auto& y) {
    return std::make_tuple(key(x.first), key(x.second)) < std::make_tuple(key(y.first), key(y.second));
  });
  return m;
}

double diagram_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2) {
  return optimal_matching(d1, d2).total_cost;
}

}  // namespace ttda
