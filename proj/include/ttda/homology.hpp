#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace ttda {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Closure-complete complex; each simplex is a strictly increasing vertex
/// list, and the simplices of every dimension are kept in lexicographic
/// order (which fixes the row/column order of the boundary matrices).
class SimplicialComplex {
 public:
  using Simplex = std::vector<int>;

  SimplicialComplex() = default;

  /// Completes the closure of the given (maximal) simplices.
  static SimplicialComplex from_maximal(const std::vector<Simplex>& maximal);

  /// Inserts the simplex together with all of its faces. Vertex order in
  /// the argument is irrelevant; repeated or negative vertices are rejected.
  void add(Simplex simplex);

  /// Highest dimension present, -1 when empty.
  int dimension() const noexcept { return static_cast<int>(by_dim_.size()) - 1; }
  std::size_t count(int k) const noexcept;
  std::size_t vertex_count() const noexcept { return count(0); }
  const std::vector<Simplex>& simplices(int k) const;
  std::optional<std::size_t> index_of(const Simplex& simplex) const;

 private:
  void insert_one(Simplex simplex);

  std::vector<std::vector<Simplex>> by_dim_;
};

/// Signed incidence matrix of C_k -> C_{k-1}: entry (i, j) is (-1)^p when
/// face i is simplex j with its p-th vertex omitted. Requires 1 <= k <= dim.
IntMatrix boundary_matrix(const SimplicialComplex& complex, int k);

/// L_k = B_{k+1} B_{k+1}^T + B_k^T B_k, with boundary maps that leave the
/// complex treated as zero.
IntMatrix hodge_laplacian(const SimplicialComplex& complex, int k);

/// Rank by fraction-free (Bareiss) elimination in arbitrary precision.
std::size_t exact_rank(const IntMatrix& m);

/// Number of singular values above tol.
std::size_t numerical_rank(const Eigen::MatrixXd& m, double tol = 1e-8);

/// dim ker L_k; exact below 500x500, numerical (tolerance 1e-8) above.
std::size_t betti(const SimplicialComplex& complex, int k);

/// sum_k (-1)^k (number of k-simplices).
long euler_characteristic(const SimplicialComplex& complex);

}  // namespace ttda
