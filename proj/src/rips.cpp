// Implicit Vietoris-Rips persistence in dimensions 0 and 1.
//
// Triangles are never stored. They are addressed through the combinatorial
// number system, index(a < b < c) = C(c,3) + C(b,2) + C(a,1), and ordered by
// (diameter ascending, index descending). Dimension 1 is computed as
// persistent cohomology: edge coboundary columns are reduced in reverse
// filtration order, a column's pivot being its earliest coface. Edges that
// merge components in dimension 0 are cleared up front.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <unordered_map>

#include "ttda/errors.hpp"
#include "ttda/persistence.hpp"

namespace ttda {
namespace {

using Index = std::int64_t;

struct Entry {
  double diameter;
  Index index;
};

// True when a enters strictly after b.
struct EntersLater {
  bool operator()(const Entry& a, const Entry& b) const {
    return a.diameter > b.diameter || (a.diameter == b.diameter && a.index < b.index);
  }
};

using Column = std::priority_queue<Entry, std::vector<Entry>, EntersLater>;

struct Edge {
  double diameter;
  Index index;
  int lo;
  int hi;
};

class Binomial {
 public:
  explicit Binomial(std::size_t n) : n_(n + 1), table_((n + 1) * 4, 0) {
    for (std::size_t i = 0; i <= n; ++i) {
      at(i, 0) = 1;
      for (std::size_t k = 1; k < 4 && k <= i; ++k) {
        at(i, k) = at(i - 1, k - 1) + (k <= i - 1 ? at(i - 1, k) : 0);
      }
    }
  }
  Index operator()(std::size_t i, std::size_t k) const { return table_[i * 4 + k]; }

 private:
  Index& at(std::size_t i, std::size_t k) { return table_[i * 4 + k]; }
  std::size_t n_;
  std::vector<Index> table_;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

class RipsEngine {
 public:
  RipsEngine(const DistanceMatrix& m, double threshold)
      : n_(m.size()), threshold_(threshold), binomial_(m.size()), dist_(n_ * n_, 0.0) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        dist_[i * n_ + j] = dist_[j * n_ + i] = m(i, j);
      }
    }
  }

  PersistenceDiagram run() {
    PersistenceDiagram diagram;
    std::vector<Edge> edges;
    for (std::size_t j = 1; j < n_; ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        const double d = dist(i, j);
        if (d <= threshold_) {
          edges.push_back({d, binomial_(j, 2) + static_cast<Index>(i), static_cast<int>(i),
                           static_cast<int>(j)});
        }
      }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return EntersLater{}({b.diameter, b.index}, {a.diameter, a.index});
    });

    // Dimension 0: every vertex is born at 0; a merging edge kills one class.
    UnionFind components(n_);
    std::vector<std::size_t> columns;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (components.unite(static_cast<std::size_t>(edges[e].lo),
                           static_cast<std::size_t>(edges[e].hi))) {
        if (edges[e].diameter > 0.0) diagram.features.push_back({0.0, edges[e].diameter, 0});
      } else {
        columns.push_back(e);
      }
    }
    for (std::size_t v = 0; v < n_; ++v) {
      if (components.find(v) == v) diagram.features.push_back({0.0, kInfinity, 0});
    }

    reduce_edges(edges, columns, diagram);
    diagram.canonicalize();
    return diagram;
  }

 private:
  double dist(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

  Index triangle_index(std::size_t a, std::size_t b, std::size_t c) const {
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    return binomial_(c, 3) + binomial_(b, 2) + static_cast<Index>(a);
  }

  // Visits cofaces in strictly decreasing index order; the visitor returns
  // false to stop early.
  template <typename Visit>
  void for_each_coface(const Edge& e, Visit&& visit) const {
    const auto lo = static_cast<std::size_t>(e.lo);
    const auto hi = static_cast<std::size_t>(e.hi);
    for (std::size_t k = n_; k-- > 0;) {
      if (k == lo || k == hi) continue;
      const double a = dist(lo, k);
      const double b = dist(hi, k);
      if (a > threshold_ || b > threshold_) continue;
      const Entry coface{std::max({e.diameter, a, b}), triangle_index(lo, hi, k)};
      if (!visit(coface)) return;
    }
  }

  void push_coboundary(const Edge& e, Column& column) const {
    for_each_coface(e, [&](const Entry& c) {
      column.push(c);
      return true;
    });
  }

  // Pops the earliest entry that survives mod-2 cancellation.
  static std::optional<Entry> pop_pivot(Column& column) {
    while (!column.empty()) {
      const Entry top = column.top();
      column.pop();
      if (!column.empty() && column.top().index == top.index) {
        column.pop();
        continue;
      }
      return top;
    }
    return std::nullopt;
  }

  static std::optional<Entry> get_pivot(Column& column) {
    auto pivot = pop_pivot(column);
    if (pivot) column.push(*pivot);
    return pivot;
  }

  void reduce_edges(const std::vector<Edge>& edges, const std::vector<std::size_t>& columns,
                    PersistenceDiagram& diagram) {
    std::unordered_map<Index, std::size_t> pivot_owner;
    pivot_owner.reserve(columns.size());
    // Edges added into each stored column, besides the column's own edge.
    std::unordered_map<std::size_t, std::vector<std::size_t>> reduction;

    for (auto it = columns.rbegin(); it != columns.rend(); ++it) {
      const std::size_t e = *it;
      const Edge& edge = edges[e];

      // Emergent pair: the first equal-diameter coface is the column's
      // pivot; if no earlier column owns it nothing needs reducing.
      std::optional<Entry> emergent;
      for_each_coface(edge, [&](const Entry& c) {
        if (c.diameter != edge.diameter) return true;
        if (!pivot_owner.contains(c.index)) emergent = c;
        return false;
      });
      if (emergent) {
        pivot_owner.emplace(emergent->index, e);
        continue;
      }

      Column column;
      push_coboundary(edge, column);
      std::vector<std::size_t> added;
      auto pivot = get_pivot(column);
      while (pivot) {
        const auto owner = pivot_owner.find(pivot->index);
        if (owner == pivot_owner.end()) break;
        const std::size_t other = owner->second;
        push_coboundary(edges[other], column);
        added.push_back(other);
        if (const auto r = reduction.find(other); r != reduction.end()) {
          for (std::size_t extra : r->second) {
            push_coboundary(edges[extra], column);
            added.push_back(extra);
          }
        }
        pivot = get_pivot(column);
      }

      if (!pivot) {
        diagram.features.push_back({edge.diameter, kInfinity, 1});
        continue;
      }
      if (pivot->diameter > edge.diameter) {
        diagram.features.push_back({edge.diameter, pivot->diameter, 1});
      }
      pivot_owner.emplace(pivot->index, e);
      if (!added.empty()) {
        // Mod 2: keep edges that were added an odd number of times.
        std::sort(added.begin(), added.end());
        std::vector<std::size_t> odd;
        for (std::size_t i = 0; i < added.size();) {
          std::size_t j = i;
          while (j < added.size() && added[j] == added[i]) ++j;
          if ((j - i) % 2 == 1) odd.push_back(added[i]);
          i = j;
        }
        if (!odd.empty()) reduction.emplace(e, std::move(odd));
      }
    }
  }

  std::size_t n_;
  double threshold_;
  Binomial binomial_;
  std::vector<double> dist_;
};

}  // namespace

PersistenceDiagram rips_persistence(const DistanceMatrix& m, const RipsOptions& opts) {
  if (m.size() == 0) throw DomainError("Rips persistence of an empty point set");
  if (opts.threshold && !(*opts.threshold > 0.0)) {
    throw DomainError("Rips threshold must be positive");
  }
  if (m.size() > 10000) throw DomainError("too many points for the Rips engine");
  const double threshold = opts.threshold ? *opts.threshold : enclosing_radius(m);
  return RipsEngine(m, threshold).run();
}

}  // namespace ttda
