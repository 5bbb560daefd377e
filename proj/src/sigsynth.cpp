#include "ttda/sigsynth.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

#include "ttda/errors.hpp"
#include "ttda/spectrum.hpp"

namespace ttda {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sample_phase(double freq, std::size_t k, double fs) {
  return kTwoPi * freq * static_cast<double>(k) / fs;
}

bool is_noise(PresetKind kind) {
  return kind == PresetKind::white_noise || kind == PresetKind::pink_noise ||
         kind == PresetKind::brown_noise;
}

}  // namespace

bool WaveformPreset::has_noise() const { return is_noise(kind); }
bool WaveformPreset::has_harmonics() const { return !is_noise(kind); }

WaveformPreset make_preset(PresetKind kind) {
  auto zero_a = [](int) { return 0.0; };
  auto zero_b = [](double) { return 0.0; };
  auto inv_n = [](int n) { return 1.0 / n; };
  auto inv_n2 = [](int n) { return 1.0 / (static_cast<double>(n) * n); };
  switch (kind) {
    case PresetKind::triangle:
      return {kind, "triangle", inv_n2, HarmonicParity::odd, zero_b};
    case PresetKind::square:
      return {kind, "square", inv_n, HarmonicParity::odd, zero_b};
    case PresetKind::sawtooth:
      return {kind, "sawtooth", inv_n, HarmonicParity::all, zero_b};
    case PresetKind::modified_sawtooth:
      return {kind, "modified_sawtooth", inv_n2, HarmonicParity::all, zero_b};
    case PresetKind::white_noise:
      return {kind, "white_noise", zero_a, HarmonicParity::all, [](double) { return 1.0; }};
    case PresetKind::pink_noise:
      // DC weight forced to zero where the law diverges.
      return {kind, "pink_noise", zero_a, HarmonicParity::all,
              [](double f) { return f > 0.0 ? 1.0 / std::sqrt(f) : 0.0; }};
    case PresetKind::brown_noise:
      return {kind, "brown_noise", zero_a, HarmonicParity::all,
              [](double f) { return f > 0.0 ? 1.0 / f : 0.0; }};
  }
  throw ConfigError("unknown preset kind");
}

const std::vector<PresetKind>& all_preset_kinds() {
  static const std::vector<PresetKind> kinds = {
      PresetKind::triangle,    PresetKind::square,     PresetKind::sawtooth,
      PresetKind::modified_sawtooth, PresetKind::white_noise, PresetKind::pink_noise,
      PresetKind::brown_noise};
  return kinds;
}

std::string_view preset_name(PresetKind kind) {
  switch (kind) {
    case PresetKind::triangle: return "triangle";
    case PresetKind::square: return "square";
    case PresetKind::sawtooth: return "sawtooth";
    case PresetKind::modified_sawtooth: return "modified_sawtooth";
    case PresetKind::white_noise: return "white_noise";
    case PresetKind::pink_noise: return "pink_noise";
    case PresetKind::brown_noise: return "brown_noise";
  }
  return "unknown";
}

WaveformPreset preset_by_name(std::string_view name) {
  for (auto kind : all_preset_kinds()) {
    if (preset_name(kind) == name) return make_preset(kind);
  }
  throw ConfigError("unknown preset '" + std::string(name) +
                    "' (expected triangle, square, sawtooth, modified_sawtooth, "
                    "white_noise, pink_noise or brown_noise)");
}

std::size_t SynthesisConfig::sample_count() const {
  if (sample_count_override) return *sample_count_override;
  const double exact = duration * sample_rate;
  if (!(exact >= 0.0) || !std::isfinite(exact)) return 0;
  // Absorb representation error such as 0.02 * 48000 = 959.999...
  return static_cast<std::size_t>(std::floor(exact + 1e-9 * std::max(1.0, exact)));
}

void SynthesisConfig::validate() const {
  std::ostringstream msg;
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
    msg << "sample_rate must be positive (got " << sample_rate << ")";
  } else if (!(f0 > 0.0) || !(f0 < sample_rate / 2.0)) {
    msg << "f0 must lie in (0, sample_rate/2 = " << sample_rate / 2.0 << ") (got " << f0
        << ")";
  } else if (sample_count() < 2) {
    msg << "duration * sample_rate must give at least 2 samples (got " << sample_count()
        << ")";
  } else if (max_harmonic_order < 1) {
    msg << "max_harmonic_order must be >= 1 (got " << max_harmonic_order << ")";
  } else {
    return;
  }
  throw ConfigError(msg.str());
}

Signal sine(const SynthesisConfig& cfg) {
  cfg.validate();
  Signal s;
  s.sample_rate = cfg.sample_rate;
  s.fundamental_hz = cfg.f0;
  const std::size_t n = cfg.sample_count();
  s.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    s.samples[k] = std::sin(sample_phase(cfg.f0, k, cfg.sample_rate));
  }
  return s;
}

Signal harmonic_sum(const WaveformPreset& preset, const SynthesisConfig& cfg) {
  cfg.validate();
  Signal s;
  s.sample_rate = cfg.sample_rate;
  s.fundamental_hz = cfg.f0;
  const std::size_t count = cfg.sample_count();
  s.samples.assign(count, 0.0);
  const double nyquist = cfg.sample_rate / 2.0;
  const int step = preset.harmonic_parity == HarmonicParity::odd ? 2 : 1;
  for (int n = 1; n <= cfg.max_harmonic_order; n += step) {
    if (n * cfg.f0 >= nyquist) break;
    const double amp = preset.harmonic_amplitude(n);
    if (amp == 0.0) continue;
    for (std::size_t k = 0; k < count; ++k) {
      s.samples[k] += amp * std::sin(sample_phase(n * cfg.f0, k, cfg.sample_rate));
    }
  }
  return s;
}

Signal white_noise(const SynthesisConfig& cfg) {
  cfg.validate();
  Signal s;
  s.sample_rate = cfg.sample_rate;
  std::mt19937_64 rng(cfg.noise_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  s.samples.resize(cfg.sample_count());
  for (auto& v : s.samples) v = normal(rng);
  return s;
}

Signal shape_noise(const Signal& xi, const WaveformPreset& preset) {
  validate(xi);
  Spectrum sp = dft(xi);
  const std::size_t n = sp.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t mirrored = std::min(k, n - k);
    const double f = static_cast<double>(mirrored) * sp.bin_resolution;
    sp.bins[k] *= preset.noise_weight(f);
  }
  Signal out = idft(sp);
  out.sample_rate = xi.sample_rate;
  out.fundamental_hz = xi.fundamental_hz;
  return out;
}

Signal synthesize(const WaveformPreset& preset, double a, const SynthesisConfig& cfg) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw DomainError("harmonic strength a must lie in [0, 1] (got " + std::to_string(a) + ")");
  }
  Signal out = sine(cfg);
  const Signal harmonics = harmonic_sum(preset, cfg);
  std::vector<double> noise;
  if (preset.has_noise()) {
    noise = shape_noise(white_noise(cfg), preset).samples;
    double mean = 0.0;
    for (double v : noise) mean += v;
    mean /= static_cast<double>(noise.size());
    double var = 0.0;
    for (double v : noise) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(noise.size()));
    if (sd > 0.0) {
      for (double& v : noise) v /= sd;
    }
  }
  for (std::size_t k = 0; k < out.samples.size(); ++k) {
    double component = harmonics.samples[k];
    if (!noise.empty()) component += noise[k];
    out.samples[k] = (1.0 - a) * out.samples[k] + a * component;
  }
  return out;
}

Signal partials(const std::vector<std::pair<double, double>>& ratio_amplitude,
                const SynthesisConfig& cfg) {
  cfg.validate();
  Signal s;
  s.sample_rate = cfg.sample_rate;
  s.fundamental_hz = cfg.f0;
  const std::size_t count = cfg.sample_count();
  s.samples.assign(count, 0.0);
  for (const auto& [ratio, amp] : ratio_amplitude) {
    if (!(ratio > 0.0) || ratio * cfg.f0 >= cfg.sample_rate / 2.0) {
      throw ConfigError("partial ratio " + std::to_string(ratio) +
                        " must be positive and below Nyquist");
    }
    for (std::size_t k = 0; k < count; ++k) {
      s.samples[k] += amp * std::sin(sample_phase(ratio * cfg.f0, k, cfg.sample_rate));
    }
  }
  return s;
}

}  // namespace ttda
