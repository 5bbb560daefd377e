#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>

#include "artifacts.hpp"
#include "ttda/cli.hpp"
#include "ttda/errors.hpp"
#include "ttda/format.hpp"
#include "ttda/homology.hpp"
#include "ttda/ingest.hpp"
#include "ttda/parallel.hpp"
#include "ttda/sigsynth.hpp"
#include "ttda/timbre.hpp"

namespace ttda::cli {

namespace fs = std::filesystem;

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void check_signal_flags(double f0, double fs, double duration, int harmonics) {
  require(fs > 0.0 && std::isfinite(fs), "--fs must be positive (got " + format_double(fs) + ")");
  require(f0 > 0.0 && f0 < fs / 2.0,
          "--f0 must lie in (0, fs/2) (got " + format_double(f0) + ")");
  require(duration > 0.0 && std::isfinite(duration),
          "--dur must be positive (got " + format_double(duration) + ")");
  require(harmonics >= 1, "--harmonics must be >= 1 (got " + std::to_string(harmonics) + ")");
}

void check_strength(double a) {
  require(a >= 0.0 && a <= 1.0, "--a must lie in [0,1] (got " + format_double(a) + ")");
}

std::vector<std::pair<double, double>> parse_partials(const std::string& text) {
  std::vector<std::pair<double, double>> list;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) throw DomainError("");
      list.emplace_back(parse_double(item.substr(0, colon)), parse_double(item.substr(colon + 1)));
    } catch (const Error&) {
      throw ConfigError("--partials expects ratio:amplitude pairs separated by commas (bad item '" +
                        item + "')");
    }
  }
  require(!list.empty(), "--partials must list at least one ratio:amplitude pair");
  return list;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double a = 0.0;
    try {
      a = parse_double(item);
    } catch (const Error&) {
      throw ConfigError("--a-grid holds a non-numeric entry '" + item + "'");
    }
    check_strength(a);
    grid.push_back(a);
  }
  require(!grid.empty(), "--a-grid must not be empty");
  return grid;
}

std::string manifest_name(const fs::path& out) { return out.string() + ".manifest.json"; }

struct Quartiles {
  double q1 = 0, median = 0, q3 = 0;
};

// Linear interpolation between order statistics.
Quartiles quartiles(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  auto at = [&](double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return {at(0.25), at(0.5), at(0.75)};
}

}  // namespace

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  check_strength(o.a);
  check_signal_flags(o.f0, o.fs, o.duration, o.harmonics);
  require(!o.out.empty(), "--out is required");
  const WaveformPreset preset = preset_by_name(o.preset);
  SynthesisConfig cfg;
  cfg.f0 = o.f0;
  cfg.sample_rate = o.fs;
  cfg.duration = o.duration;
  cfg.max_harmonic_order = o.harmonics;
  cfg.noise_seed = o.seed;
  const Signal s = synthesize(preset, o.a, cfg);

  Invocation inv("synth");
  inv.set("preset", o.preset);
  inv.set("a", o.a);
  inv.set("f0", o.f0);
  inv.set("fs", o.fs);
  inv.set("dur", o.duration);
  inv.set("harmonics", static_cast<std::size_t>(o.harmonics));
  inv.set("seed", static_cast<std::size_t>(o.seed));
  inv.set("out", o.out.string());
  inv.set_seeds({o.seed});

  if (o.out.has_parent_path()) ensure_directory(o.out.parent_path());
  save_wav_float(o.out, s);
  inv.add_output(o.out);
  inv.write_manifest(manifest_name(o.out));
  out << "wrote " << o.out.string() << " (" << s.size() << " samples)\n";
  return kOk;
}

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out) {
  require(static_cast<int>(o.has_input) + o.has_preset + o.has_partials <= 1,
          "--input, --preset and --partials are mutually exclusive");
  require(o.tau_specs == 1, "give exactly one of --tau-ms, --tau-samples or --tau-frac");
  require(o.noise_std >= 0.0, "--noise-std must be >= 0");

  Invocation inv("analyze");
  Signal s;
  double f0 = o.f0;
  std::string source;
  if (o.has_input) {
    require(o.has_f0, "--f0 is required with --input (the fundamental is never estimated)");
    require(f0 > 0.0, "--f0 must be positive");
    require(o.periods >= 1, "--periods must be >= 1");
    s = load_wav(o.input);
    if (!o.whole) s = normalize_peak(extract_segment(s, f0, {o.periods, o.allow_shift}));
    source = o.input.string();
    inv.set("input", o.input.string());
    inv.set("periods", static_cast<std::size_t>(o.periods));
    inv.set_flag("allow-shift", o.allow_shift);
    inv.set_flag("whole", o.whole);
  } else {
    check_signal_flags(o.f0, o.fs, o.duration, o.harmonics);
    SynthesisConfig cfg;
    cfg.f0 = o.f0;
    cfg.sample_rate = o.fs;
    cfg.duration = o.duration;
    cfg.max_harmonic_order = o.harmonics;
    cfg.noise_seed = o.seed;
    if (o.has_partials) {
      s = partials(parse_partials(o.partials), cfg);
      source = "partials " + o.partials;
      inv.set("partials", o.partials);
    } else if (o.has_preset) {
      check_strength(o.a);
      s = synthesize(preset_by_name(o.preset), o.a, cfg);
      source = "preset " + o.preset;
      inv.set("preset", o.preset);
      inv.set("a", o.a);
    } else {
      s = sine(cfg);
      source = "sine";
    }
    if (o.noise_std > 0.0) {
      const Signal noise = white_noise(cfg);
      for (std::size_t k = 0; k < s.size(); ++k) s.samples[k] += o.noise_std * noise.samples[k];
      source += " + noise";
    }
    inv.set("fs", o.fs);
    inv.set("dur", o.duration);
    inv.set("harmonics", static_cast<std::size_t>(o.harmonics));
    inv.set("noise-std", o.noise_std);
    inv.set("seed", static_cast<std::size_t>(o.seed));
    inv.set_seeds({o.seed});
  }
  inv.set("f0", f0);

  std::size_t tau = 0;
  std::optional<PeriodFraction> fraction;
  if (o.has_tau_ms) {
    require(o.tau_ms > 0.0, "--tau-ms must be positive");
    tau = static_cast<std::size_t>(std::floor(o.tau_ms * s.sample_rate / 1000.0 + 0.5));
    require(tau >= 1, "--tau-ms " + format_double(o.tau_ms) + " rounds to 0 samples");
  } else if (o.has_tau_samples) {
    require(o.tau_samples >= 1, "--tau-samples must be >= 1");
    tau = o.tau_samples;
  } else {
    fraction = parse_period_fraction(o.tau_frac);
    tau = delay_from_period(f0, *fraction, s.sample_rate);
  }
  if (o.has_tau_ms) {
    inv.set("tau-ms", o.tau_ms);
  } else if (o.has_tau_samples) {
    inv.set("tau-samples", tau);
  } else {
    inv.set("tau-frac", o.tau_frac);
  }

  const TimbreAnalysis analysis = analyze_timbre(s, f0, tau, fraction);

  ensure_directory(o.out_dir);
  inv.set("out-dir", o.out_dir.string());
  inv.set_flag("svg", o.svg);
  auto emit = [&](const std::string& name, const std::string& text) {
    write_text(o.out_dir / name, text);
    inv.add_output(o.out_dir / name);
  };
  emit("waveform.csv", waveform_csv(s));
  emit("spectrum.csv", spectrum_csv(s));
  emit("embedding.csv", cloud_csv(analysis.signal_cloud));
  emit("reference_embedding.csv", cloud_csv(analysis.reference_cloud));
  emit("diagram.csv", diagram_csv(analysis.signal_diagram));
  emit("reference_diagram.csv", diagram_csv(analysis.reference_diagram));
  const nlohmann::json feature{
      {"m", analysis.feature.value},
      {"tau_samples", tau},
      {"tau_ms", 1000.0 * static_cast<double>(tau) / s.sample_rate},
      {"tau_fraction", fraction ? nlohmann::json(fraction->str()) : nlohmann::json()},
      {"f0", f0},
      {"sample_rate", s.sample_rate},
      {"sample_count", s.size()},
      {"dim1_features", analysis.signal_diagram.count(1)},
      {"source", source},
      {"library_version", kLibraryVersion}};
  emit("feature.json", feature.dump(2) + "\n");
  if (o.svg) {
    emit("embedding.svg", scatter_svg("delay embedding, tau = " + std::to_string(tau) + " samples",
                                      cloud_points(analysis.signal_cloud), false));
    emit("diagram.svg", scatter_svg("dimension-1 persistence diagram",
                                    finite_points(analysis.signal_diagram, 1), true));
  }
  inv.write_manifest(o.out_dir / "manifest.json");
  out << "m=" << format_double(analysis.feature.value) << '\n';
  return kOk;
}

int cmd_sweep(const SweepOptions& o, std::ostream& out, spdlog::logger& log) {
  check_signal_flags(o.f0, o.fs, 1.0, o.harmonics);
  require(o.all != !o.presets.empty(), "give either --preset or --all");
  require(o.tau_steps >= 1, "--tau-steps must be >= 1");
  require(o.window_periods > 0.0, "--window-periods must be positive");
  require(o.seed_count >= 1, "--seeds must be >= 1");
  require(o.jobs >= 1, "--jobs must be >= 1");

  std::vector<WaveformPreset> presets;
  if (o.all) {
    for (auto kind : all_preset_kinds()) presets.push_back(make_preset(kind));
  } else {
    for (const auto& name : o.presets) presets.push_back(preset_by_name(name));
  }

  SynthesisConfig cfg;
  cfg.f0 = o.f0;
  cfg.sample_rate = o.fs;
  cfg.max_harmonic_order = o.harmonics;
  cfg.noise_seed = o.seed;
  SurfaceOptions opts;
  if (!o.a_grid.empty()) opts.a_grid = parse_grid(o.a_grid);
  opts.tau_grid = period_fraction_grid(o.f0, o.fs, o.tau_steps);
  opts.window_periods = o.window_periods;
  opts.jobs = o.jobs;
  for (std::size_t i = 0; i < o.seed_count; ++i) opts.seeds.push_back(o.seed + i);

  Invocation inv("sweep");
  if (o.all) {
    inv.set_flag("all", true);
  } else {
    for (const auto& name : o.presets) inv.set("preset", name);
  }
  inv.set("f0", o.f0);
  inv.set("fs", o.fs);
  inv.set("harmonics", static_cast<std::size_t>(o.harmonics));
  std::string grid_text;
  for (double a : opts.a_grid) grid_text += (grid_text.empty() ? "" : ",") + format_double(a);
  inv.set("a-grid", grid_text);
  inv.set("tau-steps", static_cast<std::size_t>(o.tau_steps));
  inv.set("window-periods", o.window_periods);
  inv.set("seeds", o.seed_count);
  inv.set("seed", static_cast<std::size_t>(o.seed));
  inv.set("out-dir", o.out_dir.string());
  inv.set_flag("svg", o.svg);
  inv.set_seeds(opts.seeds);

  ensure_directory(o.out_dir);
  for (const auto& preset : presets) {
    log.info("sweeping {} ({} x {} cells)", preset.name, opts.a_grid.size(), opts.tau_grid.size());
    const SweepResult r = feature_surface(preset, cfg, opts);
    std::ostringstream csv;
    write_sweep_csv(csv, r);
    const fs::path base = o.out_dir / preset.name;
    write_text(base.string() + ".csv", csv.str());
    write_text(base.string() + ".json", sweep_to_json(r).dump(2) + "\n");
    inv.add_output(base.string() + ".csv");
    inv.add_output(base.string() + ".json");
    if (o.svg) {
      write_text(base.string() + ".svg", heatmap_svg(r));
      inv.add_output(base.string() + ".svg");
    }
    const std::size_t best = best_tau_index(r);
    std::vector<double> column;
    for (const auto& row : r.m_values) column.push_back(row[best]);
    const auto& tau = r.tau_grid[best];
    out << preset.name << " best_tau=" << (tau.fraction ? tau.fraction->str() : std::string("-")) << " ("
        << tau.samples << " samples) spearman=" << format_double(spearman(r.a_grid, column)) << '\n';
  }
  inv.write_manifest(o.out_dir / "manifest.json");
  return kOk;
}

int cmd_batch(const BatchOptions& o, std::ostream& out, spdlog::logger& log) {
  require(o.f0 > 0.0, "--f0 must be positive");
  require(o.periods >= 1, "--periods must be >= 1");
  require(o.jobs >= 1, "--jobs must be >= 1");
  if (!fs::is_directory(o.audio_dir)) {
    throw IoError("audio directory '" + o.audio_dir.string() + "' does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.audio_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".wav") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  require(!files.empty(), "audio directory '" + o.audio_dir.string() + "' holds no .wav files");

  const auto entries = load_metadata(o.metadata, {o.filename_key, o.category_key});
  require(!entries.empty(), "metadata '" + o.metadata.string() + "' lists no files");
  std::map<std::string, std::string> category_of;
  for (const auto& e : entries) category_of.emplace(e.filename, e.category);

  struct Row {
    std::string file, category, error;
    double half = 0, quarter = 0;
    bool ok = false;
  };
  std::vector<Row> rows(files.size());
  parallel_for(files.size(), o.jobs, [&](std::size_t i) {
    Row& row = rows[i];
    row.file = files[i].filename().string();
    auto it = category_of.find(row.file);
    if (it == category_of.end()) it = category_of.find(files[i].stem().string());
    if (it == category_of.end()) {
      row.error = "no metadata entry";
      return;
    }
    row.category = it->second;
    try {
      const Signal seg =
          normalize_peak(extract_segment(load_wav(files[i]), o.f0, {o.periods, o.allow_shift}));
      const auto [half, quarter] = real_signal_features(seg, o.f0);
      row.half = half.value;
      row.quarter = quarter.value;
      row.ok = true;
    } catch (const Error& e) {
      row.error = e.what();
    }
  });

  Invocation inv("batch");
  inv.set("audio-dir", o.audio_dir.string());
  inv.set("metadata", o.metadata.string());
  inv.set("filename-key", o.filename_key);
  inv.set("category-key", o.category_key);
  inv.set("f0", o.f0);
  inv.set("periods", static_cast<std::size_t>(o.periods));
  inv.set_flag("allow-shift", o.allow_shift);
  inv.set("out-dir", o.out_dir.string());

  std::string features = "file,category,m_half,m_quarter\n";
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_category;
  std::size_t failures = 0;
  for (const auto& row : rows) {
    if (!row.ok) {
      ++failures;
      log.warn("skipped {}: {}", row.file, row.error);
      continue;
    }
    features += row.file + ',' + row.category + ',' + format_double(row.half) + ',' +
                format_double(row.quarter) + '\n';
    by_category[row.category].first.push_back(row.half);
    by_category[row.category].second.push_back(row.quarter);
  }
  std::string summary =
      "category,count,m_half_q1,m_half_median,m_half_q3,m_quarter_q1,m_quarter_median,m_quarter_q3\n";
  for (const auto& [category, values] : by_category) {
    const Quartiles h = quartiles(values.first);
    const Quartiles q = quartiles(values.second);
    summary += category + ',' + std::to_string(values.first.size()) + ',' + format_double(h.q1) + ',' +
               format_double(h.median) + ',' + format_double(h.q3) + ',' + format_double(q.q1) + ',' +
               format_double(q.median) + ',' + format_double(q.q3) + '\n';
  }
  ensure_directory(o.out_dir);
  write_text(o.out_dir / "features.csv", features);
  write_text(o.out_dir / "summary.csv", summary);
  inv.add_output(o.out_dir / "features.csv");
  inv.add_output(o.out_dir / "summary.csv");
  inv.write_manifest(o.out_dir / "manifest.json");

  const std::size_t analysed = rows.size() - failures;
  out << "analysed " << analysed << " of " << rows.size() << " files";
  if (failures > 0) out << " (" << failures << " skipped)";
  out << '\n';
  if (analysed == 0) throw IoError("no file could be analysed");
  return failures > 0 ? kPartialSuccess : kOk;
}

int cmd_betti(const BettiOptions& o, std::ostream& out) {
  std::ifstream in(o.complex_file);
  if (!in) throw IoError("cannot open complex file '" + o.complex_file.string() + "'");
  SimplicialComplex complex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::vector<int> simplex;
    std::string token;
    while (tokens >> token) {
      int v = -1;
      const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
      if (res.ec != std::errc() || res.ptr != token.data() + token.size() || v < 0) {
        throw ConfigError("line " + std::to_string(line_no) + ": '" + token +
                          "' is not a non-negative vertex id");
      }
      simplex.push_back(v);
    }
    if (simplex.empty()) continue;
    std::vector<int> sorted = simplex;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": repeated vertex in simplex");
    }
    complex.add(simplex);
  }
  require(complex.vertex_count() > 0, "complex file '" + o.complex_file.string() + "' lists no simplices");
  const std::size_t b0 = betti(complex, 0), b1 = betti(complex, 1), b2 = betti(complex, 2);
  out << "beta_0=" << b0 << " beta_1=" << b1 << " beta_2=" << b2 << '\n';
  if (!o.out_dir.empty()) {
    Invocation inv("betti");
    inv.set_positional("complex", o.complex_file.string());
    inv.set("out-dir", o.out_dir.string());
    ensure_directory(o.out_dir);
    const nlohmann::json result{{"beta_0", b0}, {"beta_1", b1}, {"beta_2", b2},
                                {"euler_characteristic", euler_characteristic(complex)}};
    write_text(o.out_dir / "betti.json", result.dump(2) + "\n");
    inv.add_output(o.out_dir / "betti.json");
    inv.write_manifest(o.out_dir / "manifest.json");
  }
  return kOk;
}

}  // namespace ttda::cli
