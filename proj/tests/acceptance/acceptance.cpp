// Acceptance gate: one PASS/FAIL line per criterion. Exit status is non-zero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "ttda/errors.hpp"
#include "ttda/homology.hpp"
#include "ttda/ingest.hpp"
#include "ttda/parallel.hpp"
#include "ttda/persistence.hpp"
#include "ttda/sigsynth.hpp"
#include "ttda/spectrum.hpp"
#include "ttda/timbre.hpp"
#include "ttda/wasserstein.hpp"

using namespace ttda;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("%s %s: %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void not_run(const char* id, const std::string& reason) {
  std::printf("%s NOT RUN: %s\n", id, reason.c_str());
  std::fflush(stdout);
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SynthesisConfig figure_config() {
  SynthesisConfig cfg;  // 150 Hz, 48 kHz, 20 ms
  return cfg;
}

constexpr std::size_t kFigureTau = 6;  // 0.125 ms at 48 kHz

std::vector<double> dim1_persistences(const PersistenceDiagram& d) {
  std::vector<double> p;
  for (const auto& f : d.features) {
    if (f.dim == 1) p.push_back(f.persistence());
  }
  std::sort(p.rbegin(), p.rend());
  return p;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> pure_sine_persistences() {
  return dim1_persistences(embedding_diagram(sine(figure_config()), kFigureTau));
}

void a1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto p = pure_sine_persistences();
  const double elapsed = seconds_since(t0);
  const bool dominant = p.size() == 1 || (p.size() >= 2 && p[0] >= 5 * p[1]);
  report("A1", !p.empty() && dominant && elapsed < 10.0,
         "dominant " + fmt(p.empty() ? 0 : p[0]) + ", next " + fmt(p.size() > 1 ? p[1] : 0) + " (ratio " +
             fmt(p.size() > 1 ? p[0] / p[1] : INFINITY) + " >= 5), " + fmt(elapsed, 3) + " s < 10 s");
}

void a2() {
  const auto pure = pure_sine_persistences();
  const double band = 3 * median(std::vector<double>(pure.begin() + 1, pure.end()));
  const auto p = dim1_persistences(embedding_diagram(partials({{1.0, 1.0}, {2.0, 0.7}}, figure_config()), kFigureTau));
  const auto above = std::count_if(p.begin() + 1, p.end(), [&](double v) { return v > band; });
  report("A2", above >= 2,
         std::to_string(above) + " non-dominant features above the noise band " + fmt(band) + " (need >= 2)");
}

// Bin of the strongest spectral peak above 1.5 f0, i.e. the added partial.
std::size_t partial_peak_bin(const Signal& s, double f0) {
  const Spectrum sp = dft(s);
  const auto mag = magnitude_half(sp);
  std::size_t best = 0;
  for (std::size_t k = 0; k < mag.size(); ++k) {
    if (static_cast<double>(k) * sp.bin_resolution > 1.5 * f0 && (best == 0 || mag[k] > mag[best])) best = k;
  }
  return best;
}

void a3() {
  const auto cfg = figure_config();
  const Signal integer = partials({{1.0, 1.0}, {2.0, 0.7}}, cfg);
  const Signal detuned = partials({{1.0, 1.0}, {2.1, 0.7}}, cfg);
  const std::size_t n_int = embedding_diagram(integer, kFigureTau).count(1);
  const std::size_t n_det = embedding_diagram(detuned, kFigureTau).count(1);
  const std::size_t b_int = partial_peak_bin(integer, cfg.f0);
  const std::size_t b_det = partial_peak_bin(detuned, cfg.f0);
  const std::size_t bin_gap = b_int > b_det ? b_int - b_det : b_det - b_int;
  report("A3", n_det > n_int && bin_gap <= 1,
         "dim-1 count " + std::to_string(n_det) + " (2.1 f0) vs " + std::to_string(n_int) +
             " (2 f0); partial peak bins " + std::to_string(b_det) + " vs " + std::to_string(b_int));
}

void a4() {
  const double pure = pure_sine_persistences().front();
  double noisy = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SynthesisConfig cfg = figure_config();
    cfg.noise_seed = seed;
    Signal s = sine(cfg);
    const Signal xi = white_noise(cfg);
    for (std::size_t k = 0; k < s.size(); ++k) s.samples[k] += 0.1 * xi.samples[k];
    const auto p = dim1_persistences(embedding_diagram(s, kFigureTau));
    noisy += (p.empty() ? 0.0 : p.front()) / 5.0;
  }
  const double drop = 1.0 - noisy / pure;
  report("A4", drop >= 0.2,
         "dominant persistence " + fmt(pure) + " -> " + fmt(noisy) + " (5-seed mean), drop " + fmt(100 * drop, 3) +
             "% >= 20%");
}

struct SweepOutcome {
  std::map<std::string, SweepResult> results;
  double seconds = 0.0;
};

SweepOutcome run_sweep() {
  SweepOutcome o;
  SynthesisConfig cfg;  // f0 = 150 Hz, fs = 48 kHz
  SurfaceOptions opts;  // 11 x 32 grid, 5 seeds for noise presets
  opts.jobs = default_jobs();
  const auto t0 = std::chrono::steady_clock::now();
  for (auto kind : all_preset_kinds()) {
    const auto preset = make_preset(kind);
    o.results.emplace(preset.name, feature_surface(preset, cfg, opts));
  }
  o.seconds = seconds_since(t0);
  return o;
}

void a5(const SweepOutcome& sweep) {
  bool pass = sweep.seconds < 1800.0;
  std::string detail;
  for (const auto& [name, r] : sweep.results) {
    const int steps = static_cast<int>(r.tau_grid.size());
    const int k = static_cast<int>(best_tau_index(r)) + 1;
    const double frac = static_cast<double>(k) / steps;
    const bool noise = preset_by_name(name).has_noise();
    const bool in_window = noise ? (std::abs(frac - 0.25) <= 1.0 / 16 || std::abs(frac - 0.75) <= 1.0 / 16)
                                 : std::abs(frac - 0.5) <= 1.0 / 16;
    pass = pass && in_window;
    detail += name + " " + std::to_string(k) + "/" + std::to_string(steps) + (in_window ? " ok" : " OUTSIDE") + "; ";
  }
  report("A5", pass, detail + "sweep " + fmt(sweep.seconds / 60, 3) + " min < 30 min");
}

std::size_t tau_index(const SweepResult& r, long num, long den) {
  for (std::size_t j = 0; j < r.tau_grid.size(); ++j) {
    const auto& f = r.tau_grid[j].fraction;
    if (f && f->num * den == num * f->den) return j;
  }
  throw DomainError("tau grid lacks the requested fraction");
}

std::size_t a_index(const SweepResult& r, double a) {
  for (std::size_t i = 0; i < r.a_grid.size(); ++i) {
    if (std::abs(r.a_grid[i] - a) < 1e-9) return i;
  }
  throw DomainError("a grid lacks the requested value");
}

void a6(const SweepOutcome& sweep) {
  const auto& ms = sweep.results.at("modified_sawtooth");
  const auto& br = sweep.results.at("brown_noise");
  const double ms_half = ms.m_values[a_index(ms, 1.0)][tau_index(ms, 1, 2)];
  const double ms_quarter = ms.m_values[a_index(ms, 1.0)][tau_index(ms, 1, 4)];
  const double br_quarter = br.m_values[a_index(br, 0.5)][tau_index(br, 1, 4)];
  const double br_half = br.m_values[a_index(br, 0.5)][tau_index(br, 1, 2)];
  report("A6", ms_half > 2 * ms_quarter && br_quarter > br_half,
         "modified_sawtooth m(1,T0/2)=" + fmt(ms_half) + " > 2 x m(1,T0/4)=" + fmt(ms_quarter) +
             "; brown_noise m(0.5,T0/4)=" + fmt(br_quarter) + " > m(0.5,T0/2)=" + fmt(br_half));
}

void a7(const SweepOutcome& sweep) {
  bool pass = true;
  std::string detail;
  for (const auto& [name, r] : sweep.results) {
    const std::size_t best = best_tau_index(r);
    std::vector<double> column;
    for (const auto& row : r.m_values) column.push_back(row[best]);
    const double rho = spearman(r.a_grid, column);
    pass = pass && rho >= 0.9;
    detail += name + " " + fmt(rho, 3) + (rho >= 0.9 ? "" : " (< 0.9)") + "; ";
  }
  detail.resize(detail.size() - 2);
  report("A7", pass, "Spearman at best tau: " + detail);
}

void a8() {
  const auto fig = SimplicialComplex::from_maximal({{0, 1, 2}, {3, 4}, {4, 5}, {3, 5}});
  const auto sphere = SimplicialComplex::from_maximal({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  const auto hollow = SimplicialComplex::from_maximal({{0, 1}, {1, 2}, {0, 2}});
  const bool pass = betti(fig, 0) == 2 && betti(fig, 1) == 1 && betti(sphere, 0) == 1 && betti(sphere, 1) == 0 &&
                    betti(sphere, 2) == 1 && betti(hollow, 1) == 1;
  report("A8", pass,
         "two-component complex b0=" + std::to_string(betti(fig, 0)) + " b1=" + std::to_string(betti(fig, 1)) +
             "; tetrahedron boundary b=(" + std::to_string(betti(sphere, 0)) + "," +
             std::to_string(betti(sphere, 1)) + "," + std::to_string(betti(sphere, 2)) +
             "); hollow triangle b1=" + std::to_string(betti(hollow, 1)));
}

void a9() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t checks = 0, agree = 0;
  for (int cloud = 0; cloud < 50; ++cloud) {
    const std::size_t n = 2 + rng() % 9;
    const DistanceMatrix m = distance_matrix(oracle::random_cloud(rng, n));
    const PersistenceDiagram implicit_d = rips_persistence(m);
    const PersistenceDiagram explicit_d = persistence(rips_filtration(m));
    for (int i = 0; i < 20; ++i) {
      const double r = u(rng) * 1.1 * m.max_entry();
      const auto exact = oracle::rips_complex(m, r);
      for (int k : {0, 1}) {
        const std::size_t truth = betti(exact, k);
        checks += 2;
        agree += (betti_curve(implicit_d, k, r) == truth) + (betti_curve(explicit_d, k, r) == truth);
      }
    }
  }
  report("A9", agree == checks,
         std::to_string(agree) + "/" + std::to_string(checks) + " Betti numbers agree (50 clouds x 20 radii, both engines)");
}

void a10() {
  std::mt19937_64 rng(7);
  auto dyadic = [&](std::size_t max_points) {
    PersistenceDiagram d;
    const std::size_t n = rng() % (max_points + 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double b = static_cast<double>(rng() % 64) / 16.0;
      d.features.push_back({b, b + static_cast<double>(1 + rng() % 48) / 16.0, 1});
    }
    return d;
  };
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto real = [&](std::size_t max_points) {
    PersistenceDiagram d;
    const std::size_t n = rng() % (max_points + 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double b = u(rng);
      d.features.push_back({b, b + u(rng), 1});
    }
    return d;
  };
  int exact = 0;
  for (int i = 0; i < 200; ++i) {
    const auto a = dyadic(6), b = dyadic(6);
    exact += diagram_distance(a, b) == oracle::brute_force_wasserstein(a.features, b.features);
  }
  int axioms = 0;
  for (int i = 0; i < 200; ++i) {
    const auto a = real(6), b = real(6), c = real(6);
    const double ab = diagram_distance(a, b);
    const bool ok = ab == diagram_distance(b, a) && diagram_distance(a, a) == 0.0 &&
                    (oracle::same_multiset(a, b) || ab > 1e-12) &&
                    ab <= diagram_distance(a, c) + diagram_distance(c, b) + 1e-9;
    axioms += ok;
  }
  report("A10", exact == 200 && axioms == 200,
         std::to_string(exact) + "/200 exact matches with enumeration; metric axioms on " + std::to_string(axioms) +
             "/200 random triples");
}

void a11() {
  const char* dir = std::getenv("TTDA_A11_DIR");
  const char* meta = std::getenv("TTDA_A11_METADATA");
  if (!dir || !meta) {
    not_run("A11", "set TTDA_A11_DIR (C4 WAV files) and TTDA_A11_METADATA (JSON) to run the real-data check");
    return;
  }
  const char* key = std::getenv("TTDA_A11_CATEGORY_KEY");
  const double f0 = 261.6;
  const auto entries = load_metadata(meta, {"filename", key ? key : "instrument_family_str"});
  std::map<std::string, std::string> category_of;
  for (const auto& e : entries) category_of.emplace(e.filename, e.category);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".wav") files.push_back(entry.path());
  }
  std::vector<double> guitar_quarter, flute_half;
  for (const auto& f : files) {
    auto it = category_of.find(f.filename().string());
    if (it == category_of.end()) it = category_of.find(f.stem().string());
    if (it == category_of.end() || (it->second != "guitar" && it->second != "flute")) continue;
    try {
      const Signal seg = normalize_peak(extract_segment(load_wav(f), f0, {4, false}));
      const auto [half, quarter] = real_signal_features(seg, f0);
      (it->second == "guitar" ? guitar_quarter : flute_half)
          .push_back(it->second == "guitar" ? quarter.value : half.value);
    } catch (const Error&) {
    }
  }
  if (guitar_quarter.size() < 20 || flute_half.size() < 20) {
    not_run("A11", "need >= 20 guitar and >= 20 flute samples, found " + std::to_string(guitar_quarter.size()) +
                       " and " + std::to_string(flute_half.size()));
    return;
  }
  const double g = median(guitar_quarter), fl = median(flute_half);
  report("A11", g > fl, "guitar median m(T0/4)=" + fmt(g) + " > flute median m(T0/2)=" + fmt(fl));
}

}  // namespace

int main() {
  a1();
  a2();
  a3();
  a4();
  const SweepOutcome sweep = run_sweep();
  a5(sweep);
  a6(sweep);
  a7(sweep);
  a8();
  a9();
  a10();
  a11();
  return failures == 0 ? 0 : 1;
}
