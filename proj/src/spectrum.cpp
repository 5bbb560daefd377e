#include "ttda/spectrum.hpp"

#include <unsupported/Eigen/FFT>

#include "ttda/errors.hpp"

namespace ttda {
namespace {

using cplx = std::complex<double>;

std::vector<cplx> transform(std::span<const cplx> x, bool inverse) {
  if (x.empty()) throw DomainError("Fourier transform of an empty sequence");
  const std::vector<cplx> in(x.begin(), x.end());
  std::vector<cplx> out;
  Eigen::FFT<double> fft;
  if (inverse) {
    fft.inv(out, in);
  } else {
    fft.fwd(out, in);
  }
  return out;
}

}  // namespace

std::vector<cplx> dft(std::span<const cplx> x) { return transform(x, false); }

std::vector<cplx> idft(std::span<const cplx> x) { return transform(x, true); }

Spectrum dft(const Signal& s) {
  if (s.empty()) throw DomainError("Fourier transform of an empty signal");
  std::vector<cplx> x(s.samples.begin(), s.samples.end());
  Spectrum sp;
  sp.bins = dft(std::span<const cplx>(x));
  sp.bin_resolution = s.sample_rate / static_cast<double>(s.size());
  return sp;
}

Signal idft(const Spectrum& sp) {
  if (sp.bins.empty()) throw DomainError("inverse transform of an empty spectrum");
  const auto x = idft(std::span<const cplx>(sp.bins));
  Signal s;
  s.samples.reserve(x.size());
  for (const auto& v : x) s.samples.push_back(v.real());
  s.sample_rate = sp.bin_resolution * static_cast<double>(sp.bins.size());
  return s;
}

std::vector<double> magnitude_half(const Spectrum& sp) {
  std::vector<double> mag;
  mag.reserve(sp.bins.size() / 2 + 1);
  for (std::size_t k = 0; k <= sp.bins.size() / 2; ++k) mag.push_back(std::abs(sp.bins[k]));
  return mag;
}

}  // namespace ttda
