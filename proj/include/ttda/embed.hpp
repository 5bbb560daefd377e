#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ttda/signal.hpp"

namespace ttda {

struct EmbeddingConfig {
  std::size_t dimension = 2;
  std::size_t delay_samples = 1;
  // Keep every stride-th point; 1 keeps all of them.
  std::size_t stride = 1;
};

/// Ordered d-dimensional points stored row-major.
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(std::size_t dimension, std::vector<double> coords);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return dimension_ == 0 ? 0 : coords_.size() / dimension_; }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dimension_, dimension_};
  }
  const std::vector<double>& coords() const noexcept { return coords_; }

 private:
  std::size_t dimension_ = 0;
  std::vector<double> coords_;
};

/// Symmetric Euclidean distances, upper triangle stored row by row.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    return entries_[offset(i) + (j - i - 1)];
  }
  void set(std::size_t i, std::size_t j, double value);
  const std::vector<double>& entries() const noexcept { return entries_; }
  double max_entry() const noexcept;

 private:
  std::size_t offset(std::size_t i) const noexcept { return i * (2 * n_ - i - 1) / 2; }

  std::size_t n_ = 0;
  std::vector<double> entries_;
};

/// Largest delay satisfying (d-1) * delay < length.
std::size_t max_feasible_delay(std::size_t length, std::size_t dimension);

/// Point k = (s[k], s[k+tau], ..., s[k+(d-1)tau]).
PointCloud delay_embed(const Signal& s, const EmbeddingConfig& cfg);

DistanceMatrix distance_matrix(const PointCloud& pc);

/// min_i max_j d(i, j); the Rips complex is a cone at this radius.
double enclosing_radius(const DistanceMatrix& m);

struct PeriodFraction {
  long num = 1;
  long den = 2;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

/// Parses "p/q" or a bare integer.
PeriodFraction parse_period_fraction(std::string_view text);

/// round(fraction * sample_rate / f0) with halves rounded up; throws
/// DomainError when that is zero samples.
std::size_t delay_from_period(double f0, PeriodFraction fraction, double sample_rate);

}  // namespace ttda
