#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ttda/embed.hpp"
#include "ttda/persistence.hpp"
#include "ttda/sigsynth.hpp"

namespace ttda {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct TimbreFeature {
  double value = 0.0;  // m
  std::size_t tau_samples = 0;
  std::optional<PeriodFraction> tau_fraction;
  double f0 = 0.0;
};

/// Everything computed on the way to m, kept for plotting and export.
struct TimbreAnalysis {
  TimbreFeature feature;
  PointCloud signal_cloud;
  PointCloud reference_cloud;
  PersistenceDiagram signal_diagram;     // dimensions 0 and 1
  PersistenceDiagram reference_diagram;  // dimensions 0 and 1
};

/// Unit-amplitude, zero-phase sine at f0 with `count` samples.
Signal reference_sine(std::size_t count, double sample_rate, double f0);

/// Dimension-1 diagram of the 2-D delay embedding of s.
PersistenceDiagram embedding_diagram(const Signal& s, std::size_t tau_samples);

/// W(D(X_2(s)), D(X_2(reference))) on dimension-1 diagrams.
double feature_between(const Signal& s, const Signal& reference, std::size_t tau_samples);

/// m of s against a same-length reference sine at f0.
TimbreFeature timbre_feature(const Signal& s, double f0, std::size_t tau_samples,
                             std::optional<PeriodFraction> fraction = std::nullopt);

TimbreAnalysis analyze_timbre(const Signal& s, double f0, std::size_t tau_samples,
                              std::optional<PeriodFraction> fraction = std::nullopt);

/// Features at tau = round(fs / (2 f0)) and tau = round(fs / (4 f0)).
std::pair<TimbreFeature, TimbreFeature> real_signal_features(const Signal& s, double f0);

struct TauGridPoint {
  std::size_t samples = 1;
  std::optional<PeriodFraction> fraction;
};

/// k/steps * T0 for k = 1..steps.
std::vector<TauGridPoint> period_fraction_grid(double f0, double sample_rate, int steps = 32);

/// {0.0, 0.1, ..., 1.0}.
std::vector<double> default_a_grid();

struct SurfaceOptions {
  std::vector<double> a_grid = default_a_grid();
  std::vector<TauGridPoint> tau_grid;  // empty: period_fraction_grid(cfg.f0, cfg.sample_rate)
  // Length of the analysed trajectory in fundamental periods. Each tau
  // column synthesises round(periods * fs / f0) + tau samples so the
  // embedding always holds one window's worth of points.
  double window_periods = 1.0;
  // Seeds for noise presets (ignored by the deterministic ones, which use
  // cfg.noise_seed only). Empty: five consecutive seeds from cfg.noise_seed.
  std::vector<std::uint64_t> seeds;
  std::size_t jobs = 1;
};

struct SweepResult {
  std::string preset;
  std::vector<double> a_grid;
  std::vector<TauGridPoint> tau_grid;
  // m_values[i][j]: a_grid[i], tau_grid[j]; seed-averaged for noise presets.
  std::vector<std::vector<double>> m_values;
  std::vector<std::uint64_t> seeds;
  // per_seed[s][i][j] for seeds[s].
  std::vector<std::vector<std::vector<double>>> per_seed;
  double f0 = 0.0;
  double sample_rate = 0.0;
  double window_periods = 1.0;
  int max_harmonic_order = 10;
};

/// m(a, tau) = W(D(X_2(s(.;0); tau)), D(X_2(s(.;a); tau))) over the grids.
SweepResult feature_surface(const WaveformPreset& preset, const SynthesisConfig& cfg,
                            const SurfaceOptions& opts = {});

/// Average growth of m with a at each tau: mean over a > 0 of m(a, tau) / a.
std::vector<double> growth_by_tau(const SweepResult& r);

/// Column index maximising growth_by_tau (earliest on ties).
std::size_t best_tau_index(const SweepResult& r);

/// Spearman rank correlation with average ranks for ties; 0 when either
/// side is constant.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Header `preset,a,tau_samples,tau_fraction,m,seed`. Deterministic presets
/// give one row per cell; noise presets one row per seed plus a `mean` row.
void write_sweep_csv(std::ostream& out, const SweepResult& r);

nlohmann::json sweep_to_json(const SweepResult& r);

}  // namespace ttda
