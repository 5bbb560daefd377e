#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttda/signal.hpp"

namespace ttda {

enum class PresetKind {
  triangle,
  square,
  sawtooth,
  modified_sawtooth,
  white_noise,
  pink_noise,
  brown_noise,
};

enum class HarmonicParity { all, odd };

/// One harmonic/noise law pair A(n), B(f) of the synthesis model.
struct WaveformPreset {
  PresetKind kind;
  std::string name;
  std::function<double(int)> harmonic_amplitude;  // A(n)
  HarmonicParity harmonic_parity;
  std::function<double(double)> noise_weight;  // B(f), f in Hz

  bool has_noise() const;
  bool has_harmonics() const;
};

WaveformPreset make_preset(PresetKind kind);
/// Throws ConfigError for names outside the seven presets.
WaveformPreset preset_by_name(std::string_view name);
const std::vector<PresetKind>& all_preset_kinds();
std::string_view preset_name(PresetKind kind);

struct SynthesisConfig {
  double f0 = 150.0;
  double sample_rate = 48000.0;
  double duration = 0.02;
  int max_harmonic_order = 10;
  std::uint64_t noise_seed = 0;
  // Overrides floor(duration * sample_rate) when set.
  std::optional<std::size_t> sample_count_override;

  std::size_t sample_count() const;
  void validate() const;
};

/// sin(2 pi f0 k / fs), k = 0..sample_count-1.
Signal sine(const SynthesisConfig& cfg);

/// sum_n A(n) sin(2 pi n f0 t) over the preset's parity, n <= N, n f0 below
/// Nyquist.
Signal harmonic_sum(const WaveformPreset& preset, const SynthesisConfig& cfg);

/// i.i.d. standard normal samples seeded by cfg.noise_seed.
Signal white_noise(const SynthesisConfig& cfg);

/// Real part of idft(B(f) * dft(xi)), weights mirrored for conjugate
/// symmetry; B at DC is zero for the pink and brown laws.
Signal shape_noise(const Signal& xi, const WaveformPreset& preset);

/// (1-a) sin(2 pi f0 t) + a (harmonic_sum + shaped noise). The shaped noise is
/// rescaled to unit standard deviation before mixing.
Signal synthesize(const WaveformPreset& preset, double a, const SynthesisConfig& cfg);

/// Sum of amplitude * sin(2 pi ratio f0 t) over (ratio, amplitude) partials.
Signal partials(const std::vector<std::pair<double, double>>& ratio_amplitude,
                const SynthesisConfig& cfg);

}  // namespace ttda
