#include "ttda/homology.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <boost/multiprecision/cpp_int.hpp>

#include "ttda/errors.hpp"

namespace ttda {
namespace {

constexpr std::size_t kExactRankLimit = 500;

IntMatrix boundary_or_zero(const SimplicialComplex& complex, int k) {
  const auto rows = static_cast<Eigen::Index>(k >= 1 ? complex.count(k - 1) : 0);
  const auto cols = static_cast<Eigen::Index>(complex.count(k));
  if (k < 1 || k > complex.dimension()) return IntMatrix::Zero(rows, cols);
  return boundary_matrix(complex, k);
}

}  // namespace

SimplicialComplex SimplicialComplex::from_maximal(const std::vector<Simplex>& maximal) {
  SimplicialComplex complex;
  for (const auto& s : maximal) complex.add(s);
  return complex;
}

void SimplicialComplex::add(Simplex simplex) {
  if (simplex.empty()) throw DomainError("empty simplex");
  std::sort(simplex.begin(), simplex.end());
  if (std::adjacent_find(simplex.begin(), simplex.end()) != simplex.end()) {
    throw DomainError("simplex repeats a vertex");
  }
  if (simplex.front() < 0) throw DomainError("vertex ids must be non-negative");
  if (simplex.size() > 20) throw DomainError("simplex dimension above 19 is not supported");

  // Every non-empty subset is a face; enumerate them by bitmask.
  const std::size_t n = simplex.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    Simplex face;
    for (std::size_t b = 0; b < n; ++b) {
      if (mask & (1u << b)) face.push_back(simplex[b]);
    }
    insert_one(std::move(face));
  }
}

void SimplicialComplex::insert_one(Simplex simplex) {
  const std::size_t k = simplex.size() - 1;
  if (by_dim_.size() <= k) by_dim_.resize(k + 1);
  auto& list = by_dim_[k];
  const auto it = std::lower_bound(list.begin(), list.end(), simplex);
  if (it == list.end() || *it != simplex) list.insert(it, std::move(simplex));
}

std::size_t SimplicialComplex::count(int k) const noexcept {
  if (k < 0 || k > dimension()) return 0;
  return by_dim_[static_cast<std::size_t>(k)].size();
}

const std::vector<SimplicialComplex::Simplex>& SimplicialComplex::simplices(int k) const {
  static const std::vector<Simplex> none;
  if (k < 0 || k > dimension()) return none;
  return by_dim_[static_cast<std::size_t>(k)];
}

std::optional<std::size_t> SimplicialComplex::index_of(const Simplex& simplex) const {
  if (simplex.empty()) return std::nullopt;
  const auto& list = simplices(static_cast<int>(simplex.size()) - 1);
  const auto it = std::lower_bound(list.begin(), list.end(), simplex);
  if (it == list.end() || *it != simplex) return std::nullopt;
  return static_cast<std::size_t>(it - list.begin());
}

IntMatrix boundary_matrix(const SimplicialComplex& complex, int k) {
  if (k < 1 || k > complex.dimension()) {
    throw DomainError("boundary operator B_" + std::to_string(k) +
                      " is undefined for a complex of dimension " +
                      std::to_string(complex.dimension()));
  }
  const auto& faces = complex.simplices(k - 1);
  const auto& cells = complex.simplices(k);
  IntMatrix b = IntMatrix::Zero(static_cast<Eigen::Index>(faces.size()),
                                static_cast<Eigen::Index>(cells.size()));
  for (std::size_t j = 0; j < cells.size(); ++j) {
    for (std::size_t omit = 0; omit < cells[j].size(); ++omit) {
      SimplicialComplex::Simplex face;
      face.reserve(cells[j].size() - 1);
      for (std::size_t p = 0; p < cells[j].size(); ++p) {
        if (p != omit) face.push_back(cells[j][p]);
      }
      const auto row = std::lower_bound(faces.begin(), faces.end(), face) - faces.begin();
      b(row, static_cast<Eigen::Index>(j)) = (omit % 2 == 0) ? 1 : -1;
    }
  }
  return b;
}

IntMatrix hodge_laplacian(const SimplicialComplex& complex, int k) {
  if (k < 0) throw DomainError("Hodge Laplacian order must be non-negative");
  const IntMatrix up = boundary_or_zero(complex, k + 1);
  const IntMatrix down = boundary_or_zero(complex, k);
  return up * up.transpose() + down.transpose() * down;
}

std::size_t exact_rank(const IntMatrix& m) {
  using boost::multiprecision::cpp_int;
  const auto rows = static_cast<std::size_t>(m.rows());
  const auto cols = static_cast<std::size_t>(m.cols());
  std::vector<std::vector<cpp_int>> a(rows, std::vector<cpp_int>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      a[i][j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  std::size_t rank = 0;
  cpp_int previous = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = (a[rank][c] * a[i][j] - a[i][c] * a[rank][j]) / previous;
      }
      a[i][c] = 0;
    }
    previous = a[rank][c];
    ++rank;
  }
  return rank;
}

std::size_t numerical_rank(const Eigen::MatrixXd& m, double tol) {
  if (m.size() == 0) return 0;
  if (m.rows() == m.cols() && m.isApprox(m.transpose())) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    return static_cast<std::size_t>((solver.eigenvalues().array().abs() > tol).count());
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return static_cast<std::size_t>((svd.singularValues().array() > tol).count());
}

std::size_t betti(const SimplicialComplex& complex, int k) {
  if (k < 0 || k > complex.dimension()) return 0;
  const IntMatrix laplacian = hodge_laplacian(complex, k);
  const auto n = static_cast<std::size_t>(laplacian.rows());
  const std::size_t rank = n <= kExactRankLimit ? exact_rank(laplacian)
                                                : numerical_rank(laplacian.cast<double>());
  return n - rank;
}

long euler_characteristic(const SimplicialComplex& complex) {
  long chi = 0;
  for (int k = 0; k <= complex.dimension(); ++k) {
    chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(complex.count(k));
  }
  return chi;
}

}  // namespace ttda
