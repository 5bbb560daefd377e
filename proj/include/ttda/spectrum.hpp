#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ttda/signal.hpp"

namespace ttda {

struct Spectrum {
  std::vector<std::complex<double>> bins;
  double bin_resolution = 0.0;  // Hz per bin

  std::size_t size() const noexcept { return bins.size(); }
};

// Forward transform with the e^{-2 pi i k n / N} kernel and no scaling; the
// inverse carries the 1/N factor. Any length is accepted.
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x);
std::vector<std::complex<double>> idft(std::span<const std::complex<double>> x);

Spectrum dft(const Signal& s);

/// Real part of the inverse transform; bin_resolution * N gives the rate.
Signal idft(const Spectrum& sp);

/// |X_k| for k = 0..N/2.
std::vector<double> magnitude_half(const Spectrum& sp);

}  // namespace ttda
