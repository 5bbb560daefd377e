#pragma once

#include <optional>
#include <span>
#include <vector>

namespace ttda {

/// Uniformly sampled real waveform.
struct Signal {
  std::vector<double> samples;
  double sample_rate = 0.0;
  std::optional<double> fundamental_hz;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  std::span<const double> view() const noexcept { return samples; }
};

/// Throws DomainError unless the signal is non-empty, finite and has a
/// positive sample rate.
void validate(const Signal& s);

}  // namespace ttda
