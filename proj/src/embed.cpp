#include "ttda/embed.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "ttda/errors.hpp"

namespace ttda {

PointCloud::PointCloud(std::size_t dimension, std::vector<double> coords)
    : dimension_(dimension), coords_(std::move(coords)) {
  if (dimension_ == 0) throw DomainError("point cloud dimension must be positive");
  if (coords_.size() % dimension_ != 0) {
    throw DomainError("coordinate count is not a multiple of the dimension");
  }
}

DistanceMatrix::DistanceMatrix(std::size_t n) : n_(n), entries_(n < 2 ? 0 : n * (n - 1) / 2) {}

void DistanceMatrix::set(std::size_t i, std::size_t j, double value) {
  if (i == j) return;
  if (i > j) std::swap(i, j);
  entries_[offset(i) + (j - i - 1)] = value;
}

double DistanceMatrix::max_entry() const noexcept {
  return entries_.empty() ? 0.0 : *std::max_element(entries_.begin(), entries_.end());
}

std::size_t max_feasible_delay(std::size_t length, std::size_t dimension) {
  if (dimension < 2 || length == 0) return 0;
  return (length - 1) / (dimension - 1);
}

PointCloud delay_embed(const Signal& s, const EmbeddingConfig& cfg) {
  validate(s);
  if (cfg.dimension < 2) throw DomainError("embedding dimension must be >= 2");
  if (cfg.delay_samples < 1) throw DomainError("embedding delay must be >= 1 sample");
  if (cfg.stride < 1) throw DomainError("embedding stride must be >= 1");
  const std::size_t span = (cfg.dimension - 1) * cfg.delay_samples;
  if (span >= s.size()) {
    const std::size_t max_tau = max_feasible_delay(s.size(), cfg.dimension);
    throw EmbeddingError("delay of " + std::to_string(cfg.delay_samples) + " samples needs more than " +
                             std::to_string(span) + " samples in dimension " +
                             std::to_string(cfg.dimension) + "; signal has " +
                             std::to_string(s.size()) + ", max feasible delay is " +
                             std::to_string(max_tau),
                         max_tau);
  }
  const std::size_t count = s.size() - span;
  std::vector<double> coords;
  coords.reserve(((count + cfg.stride - 1) / cfg.stride) * cfg.dimension);
  for (std::size_t k = 0; k < count; k += cfg.stride) {
    for (std::size_t c = 0; c < cfg.dimension; ++c) {
      coords.push_back(s.samples[k + c * cfg.delay_samples]);
    }
  }
  return PointCloud(cfg.dimension, std::move(coords));
}

DistanceMatrix distance_matrix(const PointCloud& pc) {
  const std::size_t n = pc.size();
  DistanceMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = pc.point(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto q = pc.point(j);
      double acc = 0.0;
      for (std::size_t c = 0; c < p.size(); ++c) {
        const double diff = p[c] - q[c];
        acc += diff * diff;
      }
      m.set(i, j, std::sqrt(acc));
    }
  }
  return m;
}

double enclosing_radius(const DistanceMatrix& m) {
  if (m.size() <= 1) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.size(); ++i) {
    double farthest = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) farthest = std::max(farthest, m(i, j));
    best = std::min(best, farthest);
  }
  return best;
}

std::string PeriodFraction::str() const { return std::to_string(num) + "/" + std::to_string(den); }

PeriodFraction parse_period_fraction(std::string_view text) {
  PeriodFraction f{0, 1};
  const auto slash = text.find('/');
  auto parse = [&](std::string_view part, long& out) {
    const auto* end = part.data() + part.size();
    const auto res = std::from_chars(part.data(), end, out);
    if (res.ec != std::errc() || res.ptr != end) {
      throw DomainError("malformed period fraction '" + std::string(text) + "'");
    }
  };
  if (slash == std::string_view::npos) {
    parse(text, f.num);
  } else {
    parse(text.substr(0, slash), f.num);
    parse(text.substr(slash + 1), f.den);
  }
  if (f.num <= 0 || f.den <= 0) {
    throw DomainError("period fraction '" + std::string(text) + "' must be positive");
  }
  return f;
}

std::size_t delay_from_period(double f0, PeriodFraction fraction, double sample_rate) {
  if (!(f0 > 0.0) || !(sample_rate > 0.0)) {
    throw DomainError("f0 and sample_rate must be positive");
  }
  const double exact = fraction.value() * sample_rate / f0;
  const double rounded = std::floor(exact + 0.5);
  if (rounded < 1.0) {
    throw DomainError("delay of " + fraction.str() + " period at f0=" + std::to_string(f0) +
                      " Hz rounds to 0 samples");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace ttda
