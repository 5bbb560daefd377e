#include "ttda/timbre.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>

#include "ttda/errors.hpp"
#include "ttda/format.hpp"
#include "ttda/parallel.hpp"
#include "ttda/wasserstein.hpp"

namespace ttda {
namespace {

PersistenceDiagram diagram_of(const PointCloud& cloud) {
  return rips_persistence(distance_matrix(cloud));
}

PointCloud embed2(const Signal& s, std::size_t tau) {
  return delay_embed(s, EmbeddingConfig{2, tau, 1});
}

}  // namespace

Signal reference_sine(std::size_t count, double sample_rate, double f0) {
  SynthesisConfig cfg;
  cfg.f0 = f0;
  cfg.sample_rate = sample_rate;
  cfg.sample_count_override = count;
  return sine(cfg);
}

PersistenceDiagram embedding_diagram(const Signal& s, std::size_t tau_samples) {
  return diagram_of(embed2(s, tau_samples)).of_dimension(1);
}

double feature_between(const Signal& s, const Signal& reference, std::size_t tau_samples) {
  return diagram_distance(embedding_diagram(s, tau_samples),
                          embedding_diagram(reference, tau_samples));
}

TimbreAnalysis analyze_timbre(const Signal& s, double f0, std::size_t tau_samples,
                              std::optional<PeriodFraction> fraction) {
  validate(s);
  TimbreAnalysis out;
  const Signal reference = reference_sine(s.size(), s.sample_rate, f0);
  out.signal_cloud = embed2(s, tau_samples);
  out.reference_cloud = embed2(reference, tau_samples);
  out.signal_diagram = diagram_of(out.signal_cloud);
  out.reference_diagram = diagram_of(out.reference_cloud);
  out.feature.value = diagram_distance(out.signal_diagram.of_dimension(1),
                                       out.reference_diagram.of_dimension(1));
  out.feature.tau_samples = tau_samples;
  out.feature.tau_fraction = fraction;
  out.feature.f0 = f0;
  return out;
}

TimbreFeature timbre_feature(const Signal& s, double f0, std::size_t tau_samples,
                             std::optional<PeriodFraction> fraction) {
  validate(s);
  const Signal reference = reference_sine(s.size(), s.sample_rate, f0);
  TimbreFeature feature;
  feature.value = feature_between(s, reference, tau_samples);
  feature.tau_samples = tau_samples;
  feature.tau_fraction = fraction;
  feature.f0 = f0;
  return feature;
}

std::pair<TimbreFeature, TimbreFeature> real_signal_features(const Signal& s, double f0) {
  const PeriodFraction half{1, 2};
  const PeriodFraction quarter{1, 4};
  const std::size_t tau_half = delay_from_period(f0, half, s.sample_rate);
  const std::size_t tau_quarter = delay_from_period(f0, quarter, s.sample_rate);
  return {timbre_feature(s, f0, tau_half, half), timbre_feature(s, f0, tau_quarter, quarter)};
}

std::vector<TauGridPoint> period_fraction_grid(double f0, double sample_rate, int steps) {
  if (steps < 1) throw DomainError("tau grid needs at least one step");
  std::vector<TauGridPoint> grid;
  for (int k = 1; k <= steps; ++k) {
    const PeriodFraction fraction{k, steps};
    grid.push_back({delay_from_period(f0, fraction, sample_rate), fraction});
  }
  return grid;
}

std::vector<double> default_a_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

SweepResult feature_surface(const WaveformPreset& preset, const SynthesisConfig& cfg,
                            const SurfaceOptions& opts) {
  cfg.validate();
  if (opts.a_grid.empty()) throw DomainError("a grid is empty");
  for (double a : opts.a_grid) {
    if (!(a >= 0.0 && a <= 1.0)) throw DomainError("a grid values must lie in [0, 1]");
  }
  if (!(opts.window_periods > 0.0)) throw DomainError("window_periods must be positive");

  SweepResult r;
  r.preset = preset.name;
  r.a_grid = opts.a_grid;
  r.tau_grid = opts.tau_grid.empty() ? period_fraction_grid(cfg.f0, cfg.sample_rate)
                                     : opts.tau_grid;
  r.f0 = cfg.f0;
  r.sample_rate = cfg.sample_rate;
  r.window_periods = opts.window_periods;
  r.max_harmonic_order = cfg.max_harmonic_order;
  if (preset.has_noise()) {
    r.seeds = opts.seeds;
    if (r.seeds.empty()) {
      for (std::uint64_t k = 0; k < 5; ++k) r.seeds.push_back(cfg.noise_seed + k);
    }
  } else {
    r.seeds = {cfg.noise_seed};
  }
  for (const auto& t : r.tau_grid) {
    if (t.samples < 1) throw DomainError("tau grid values must be >= 1 sample");
  }

  const std::size_t na = r.a_grid.size();
  const std::size_t nt = r.tau_grid.size();
  const std::size_t ns = r.seeds.size();
  const auto window_points = static_cast<std::size_t>(
      std::floor(opts.window_periods * cfg.sample_rate / cfg.f0 + 0.5));
  if (window_points < 1) throw DomainError("analysis window holds no points");

  auto column_config = [&](std::size_t j, std::uint64_t seed) {
    SynthesisConfig c = cfg;
    c.sample_count_override = window_points + r.tau_grid[j].samples;
    c.noise_seed = seed;
    return c;
  };

  // Reference diagrams: s(t; 0) is the bare sine for every preset and seed.
  std::vector<PersistenceDiagram> reference(nt);
  parallel_for(nt, opts.jobs, [&](std::size_t j) {
    reference[j] = embedding_diagram(sine(column_config(j, cfg.noise_seed)), r.tau_grid[j].samples);
  });

  r.per_seed.assign(ns, std::vector<std::vector<double>>(na, std::vector<double>(nt, 0.0)));
  parallel_for(ns * na * nt, opts.jobs, [&](std::size_t cell) {
    const std::size_t s = cell / (na * nt);
    const std::size_t i = (cell / nt) % na;
    const std::size_t j = cell % nt;
    const Signal signal = synthesize(preset, r.a_grid[i], column_config(j, r.seeds[s]));
    r.per_seed[s][i][j] =
        diagram_distance(reference[j], embedding_diagram(signal, r.tau_grid[j].samples));
  });

  r.m_values.assign(na, std::vector<double>(nt, 0.0));
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      double acc = 0.0;
      for (std::size_t s = 0; s < ns; ++s) acc += r.per_seed[s][i][j];
      r.m_values[i][j] = acc / static_cast<double>(ns);
    }
  }
  return r;
}

std::vector<double> growth_by_tau(const SweepResult& r) {
  std::vector<double> growth(r.tau_grid.size(), 0.0);
  for (std::size_t j = 0; j < r.tau_grid.size(); ++j) {
    double acc = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < r.a_grid.size(); ++i) {
      if (r.a_grid[i] <= 0.0) continue;
      acc += r.m_values[i][j] / r.a_grid[i];
      ++used;
    }
    growth[j] = used == 0 ? 0.0 : acc / static_cast<double>(used);
  }
  return growth;
}

std::size_t best_tau_index(const SweepResult& r) {
  const auto growth = growth_by_tau(r);
  if (growth.empty()) throw DomainError("sweep has no tau columns");
  return static_cast<std::size_t>(std::max_element(growth.begin(), growth.end()) - growth.begin());
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j - 1)) / 2.0 + 1.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("spearman needs equal lengths >= 2");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  out << "preset,a,tau_samples,tau_fraction,m,seed\n";
  const bool averaged = r.per_seed.size() > 1;
  for (std::size_t i = 0; i < r.a_grid.size(); ++i) {
    for (std::size_t j = 0; j < r.tau_grid.size(); ++j) {
      const auto& tau = r.tau_grid[j];
      const std::string prefix = r.preset + ',' + format_double(r.a_grid[i]) + ',' +
                                 std::to_string(tau.samples) + ',' +
                                 (tau.fraction ? tau.fraction->str() : std::string()) + ',';
      for (std::size_t s = 0; s < r.per_seed.size(); ++s) {
        out << prefix << format_double(r.per_seed[s][i][j]) << ',' << r.seeds[s] << '\n';
      }
      if (averaged) out << prefix << format_double(r.m_values[i][j]) << ",mean\n";
    }
  }
}

nlohmann::json sweep_to_json(const SweepResult& r) {
  nlohmann::json tau = nlohmann::json::array();
  for (const auto& t : r.tau_grid) {
    tau.push_back({{"samples", t.samples},
                   {"fraction", t.fraction ? nlohmann::json(t.fraction->str()) : nlohmann::json()}});
  }
  nlohmann::json per_seed = nlohmann::json::array();
  for (std::size_t s = 0; s < r.per_seed.size(); ++s) {
    per_seed.push_back({{"seed", r.seeds[s]}, {"m_values", r.per_seed[s]}});
  }
  return {{"preset", r.preset},
          {"f0", r.f0},
          {"sample_rate", r.sample_rate},
          {"window_periods", r.window_periods},
          {"max_harmonic_order", r.max_harmonic_order},
          {"a_grid", r.a_grid},
          {"tau_grid", tau},
          {"seeds", r.seeds},
          {"m_values", r.m_values},
          {"per_seed", per_seed},
          {"library_version", kLibraryVersion}};
}

}  // namespace ttda
