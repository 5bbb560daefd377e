#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ttda/persistence.hpp"

namespace ttda {

/// One side of a matched pair: a feature of the diagram, or (when `feature`
/// is empty) the diagonal point ((b+d)/2, (b+d)/2) of the partner.
struct MatchEnd {
  std::optional<std::size_t> feature;
  double birth = 0.0;
  double death = 0.0;

  bool is_diagonal() const { return !feature.has_value(); }
};

struct MatchedPair {
  MatchEnd first;   // from the first diagram
  MatchEnd second;  // from the second diagram
  double cost = 0.0;
};

struct Matching {
  std::vector<MatchedPair> pairs;
  double total_cost = 0.0;
};

/// L-infinity distance between diagram points.
double ground_cost(const PersistenceFeature& x, const PersistenceFeature& y);

/// Cost of sending a point to its orthogonal diagonal projection, (d-b)/2.
double diagonal_cost(const PersistenceFeature& x);

/// Order-1 Wasserstein matching with L-infinity ground metric, solved
/// exactly on the diagonal-augmented (n1+n2) x (n1+n2) cost matrix.
/// Diagrams must be finite; features of different dimension are compared as
/// points regardless of their `dim` field.
Matching optimal_matching(const PersistenceDiagram& d1, const PersistenceDiagram& d2);

double diagram_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2);

/// Minimum-cost perfect assignment of a square cost matrix (row-major).
/// Returns the column assigned to each row.
std::vector<std::size_t> solve_assignment(const std::vector<double>& cost, std::size_t n);

}  // namespace ttda
