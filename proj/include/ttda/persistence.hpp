#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ttda/embed.hpp"

namespace ttda {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Vertex tuple (ascending, unused slots -1) with its dimension and value.
struct FilteredSimplex {
  std::array<int, 3> vertices{-1, -1, -1};
  int dim = 0;
  double value = 0.0;

  auto key() const { return std::tie(value, dim, vertices); }
};

/// Simplices of dimension <= 2 ordered by (value, dimension, vertex tuple).
struct Filtration {
  std::vector<FilteredSimplex> simplices;
  std::size_t vertex_count = 0;
  double threshold = 0.0;

  std::size_t count(int dim) const;
};

/// Vietoris-Rips filtration truncated at `threshold` (default: the enclosing
/// radius). Edges enter at their length, triangles at their longest edge.
Filtration rips_filtration(const DistanceMatrix& m, int max_dim = 2,
                           std::optional<double> threshold = std::nullopt);

struct PersistenceFeature {
  double birth = 0.0;
  double death = kInfinity;
  int dim = 0;

  double persistence() const { return death - birth; }
  bool finite() const { return death != kInfinity; }
  friend bool operator==(const PersistenceFeature&, const PersistenceFeature&) = default;
  friend auto operator<=>(const PersistenceFeature&, const PersistenceFeature&) = default;
};

/// Multiset of (birth, death, dim), kept sorted by (dim, birth, death).
struct PersistenceDiagram {
  std::vector<PersistenceFeature> features;

  void canonicalize();
  PersistenceDiagram of_dimension(int dim) const;
  std::size_t count(int dim) const;
  bool all_finite() const;
};

/// Z/2 column reduction of the filtration boundary matrix with the twist
/// (clearing) optimisation. Returns dimension 0 and 1 features; pairs with
/// birth == death are dropped. Throws IntegrityError if some face is missing
/// or ordered after one of its cofaces.
PersistenceDiagram persistence(const Filtration& f);

struct RipsOptions {
  // Defaults to the enclosing radius.
  std::optional<double> threshold;
};

/// Dimension 0 and 1 persistence of the Rips filtration of `m`, computed
/// without materialising the triangles: union-find for dimension 0 and
/// reduction of the edge coboundary matrix (cohomology), with clearing of
/// spanning-tree edges and the emergent-pair shortcut for dimension 1.
/// Yields the same diagram as persistence(rips_filtration(m)).
PersistenceDiagram rips_persistence(const DistanceMatrix& m, const RipsOptions& opts = {});

/// Number of dim-k features with birth <= r < death.
std::size_t betti_curve(const PersistenceDiagram& d, int k, double r);

/// CSV with header `dim,birth,death`; essential classes print `inf`.
void write_diagram_csv(std::ostream& out, const PersistenceDiagram& d);
PersistenceDiagram read_diagram_csv(std::istream& in);

}  // namespace ttda
