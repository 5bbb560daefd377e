#include "ttda/cli.hpp"

#include <fstream>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "commands.hpp"
#include "ttda/errors.hpp"
#include "ttda/parallel.hpp"
#include "ttda/timbre.hpp"

namespace ttda::cli {

namespace {

std::vector<std::string> replay_args(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open manifest '" + manifest_path.string() + "'");
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("manifest '" + manifest_path.string() + "' is not valid JSON: " + e.what());
  }
  if (!manifest.contains("args") || !manifest["args"].is_array() || manifest["args"].empty()) {
    throw FormatError("manifest '" + manifest_path.string() + "' has no 'args' list");
  }
  std::vector<std::string> args;
  for (const auto& a : manifest["args"]) {
    if (!a.is_string()) throw FormatError("manifest 'args' must hold strings");
    args.push_back(a.get<std::string>());
  }
  if (args.front() == "replay") throw FormatError("a manifest cannot replay another replay");
  return args;
}

void add_synthesis_flags(CLI::App* cmd, double& f0, double& fs, int& harmonics) {
  cmd->add_option("--f0", f0, "Fundamental frequency in Hz")->capture_default_str();
  cmd->add_option("--fs", fs, "Sample rate in Hz")->capture_default_str();
  cmd->add_option("--harmonics", harmonics, "Highest harmonic order")->capture_default_str();
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             spdlog::logger& log) {
  CLI::App app{"Topological timbre analysis of audio signals", "ttda"};
  app.set_version_flag("--version", kLibraryVersion);
  app.require_subcommand(1);

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthesized waveform as a float WAV");
  synth_cmd->add_option("--preset", synth.preset, "Waveform preset")->required();
  synth_cmd->add_option("--a", synth.a, "Harmonic strength in [0,1]")->capture_default_str();
  add_synthesis_flags(synth_cmd, synth.f0, synth.fs, synth.harmonics);
  synth_cmd->add_option("--dur", synth.duration, "Duration in seconds")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Noise seed")->envname("TTDA_SEED")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output WAV path")->required();

  AnalyzeOptions analyze;
  auto* an = app.add_subcommand("analyze", "Embed one signal and compute its timbre feature m");
  auto* input_opt = an->add_option("--input", analyze.input, "WAV file to analyse");
  auto* preset_opt = an->add_option("--preset", analyze.preset, "Synthesize this preset");
  an->add_option("--a", analyze.a, "Harmonic strength for --preset")->capture_default_str();
  auto* partials_opt = an->add_option("--partials", analyze.partials, "Sinusoids as ratio:amplitude,...");
  an->add_option("--noise-std", analyze.noise_std, "Add white noise with this standard deviation");
  auto* f0_opt = an->add_option("--f0", analyze.f0, "Fundamental frequency in Hz")->capture_default_str();
  an->add_option("--fs", analyze.fs, "Sample rate in Hz")->capture_default_str();
  an->add_option("--harmonics", analyze.harmonics, "Highest harmonic order")->capture_default_str();
  an->add_option("--dur", analyze.duration, "Duration in seconds")->capture_default_str();
  an->add_option("--seed", analyze.seed, "Noise seed")->envname("TTDA_SEED")->capture_default_str();
  an->add_option("--periods", analyze.periods, "Segment length in periods for --input")->capture_default_str();
  an->add_flag("--allow-shift", analyze.allow_shift, "Shift the segment left when it overruns the file");
  an->add_flag("--whole", analyze.whole, "Analyse the whole file without segmenting or normalising");
  auto* tau_ms_opt = an->add_option("--tau-ms", analyze.tau_ms, "Delay in milliseconds");
  auto* tau_samples_opt = an->add_option("--tau-samples", analyze.tau_samples, "Delay in samples");
  auto* tau_frac_opt = an->add_option("--tau-frac", analyze.tau_frac, "Delay as a period fraction p/q");
  an->add_option("--out-dir", analyze.out_dir, "Output directory")->envname("TTDA_OUT_DIR")->capture_default_str();
  an->add_flag("--svg", analyze.svg, "Also write SVG plots");

  SweepOptions sweep;
  sweep.jobs = default_jobs();
  auto* sw = app.add_subcommand("sweep", "Compute m(a, tau) surfaces for presets");
  auto* sweep_preset = sw->add_option("--preset", sweep.presets, "Preset to sweep (repeatable)");
  sw->add_flag("--all", sweep.all, "Sweep all seven presets")->excludes(sweep_preset);
  add_synthesis_flags(sw, sweep.f0, sweep.fs, sweep.harmonics);
  sw->add_option("--a-grid", sweep.a_grid, "Comma-separated harmonic strengths (default 0,0.1,...,1)");
  sw->add_option("--tau-steps", sweep.tau_steps, "Delays k/steps of a period, k = 1..steps")->capture_default_str();
  sw->add_option("--window-periods", sweep.window_periods, "Embedded trajectory length in periods")
      ->capture_default_str();
  sw->add_option("--seeds", sweep.seed_count, "Seeds averaged for noise presets")->capture_default_str();
  sw->add_option("--seed", sweep.seed, "First noise seed")->envname("TTDA_SEED")->capture_default_str();
  sw->add_option("--jobs", sweep.jobs, "Worker threads")->envname("TTDA_JOBS")->capture_default_str();
  sw->add_option("--out-dir", sweep.out_dir, "Output directory")->envname("TTDA_OUT_DIR")->capture_default_str();
  sw->add_flag("--svg", sweep.svg, "Also write SVG heat maps");

  BatchOptions batch;
  batch.jobs = default_jobs();
  auto* ba = app.add_subcommand("batch", "Compute m(T0/2) and m(T0/4) for a directory of recordings");
  ba->add_option("--audio-dir", batch.audio_dir, "Directory of WAV files")->required();
  ba->add_option("--metadata", batch.metadata, "JSON metadata mapping files to categories")->required();
  ba->add_option("--filename-key", batch.filename_key, "Metadata field holding the file name")
      ->capture_default_str();
  ba->add_option("--category-key", batch.category_key, "Metadata field holding the category")
      ->capture_default_str();
  ba->add_option("--f0", batch.f0, "Fundamental frequency in Hz")->capture_default_str();
  ba->add_option("--periods", batch.periods, "Segment length in periods")->capture_default_str();
  ba->add_flag("--allow-shift", batch.allow_shift, "Shift segments left when they overrun the file");
  ba->add_option("--jobs", batch.jobs, "Worker threads")->envname("TTDA_JOBS")->capture_default_str();
  ba->add_option("--out-dir", batch.out_dir, "Output directory")->envname("TTDA_OUT_DIR")->capture_default_str();

  BettiOptions betti;
  auto* be = app.add_subcommand("betti", "Betti numbers of a simplicial complex file");
  be->add_option("complex", betti.complex_file, "File with one maximal simplex per line")->required();
  be->add_option("--out-dir", betti.out_dir, "Also write betti.json and a manifest here")
      ->envname("TTDA_OUT_DIR");

  std::filesystem::path manifest_path;
  auto* re = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  re->add_option("manifest", manifest_path, "manifest.json written by an earlier run")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kValidation;
  }

  if (synth_cmd->parsed()) return cmd_synth(synth, out);
  if (an->parsed()) {
    analyze.has_input = input_opt->count() > 0;
    analyze.has_preset = preset_opt->count() > 0;
    analyze.has_partials = partials_opt->count() > 0;
    analyze.has_f0 = f0_opt->count() > 0;
    analyze.has_tau_ms = tau_ms_opt->count() > 0;
    analyze.has_tau_samples = tau_samples_opt->count() > 0;
    analyze.has_tau_frac = tau_frac_opt->count() > 0;
    analyze.tau_specs = analyze.has_tau_ms + analyze.has_tau_samples + analyze.has_tau_frac;
    return cmd_analyze(analyze, out);
  }
  if (sw->parsed()) return cmd_sweep(sweep, out, log);
  if (ba->parsed()) return cmd_batch(batch, out, log);
  if (be->parsed()) return cmd_betti(betti, out);
  return dispatch(replay_args(manifest_path), out, err, log);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  spdlog::logger log("ttda", sink);
  log.set_pattern("[%l] %v");
  try {
    return dispatch(args, out, err, log);
  } catch (const EmbeddingError& e) {
    log.error("{}", e.what());
    if (e.max_feasible_delay() > 0) {
      log.error("feasible delays for this signal are 1..{} samples", e.max_feasible_delay());
    } else {
      log.error("the signal is too short for any delay");
    }
    return kInfeasible;
  } catch (const ExtractionError& e) {
    log.error("{} (only {} samples follow the peak; try --allow-shift)", e.what(), e.available_tail());
    return kInfeasible;
  } catch (const DegenerateInputError& e) {
    log.error("{}", e.what());
    return kInfeasible;
  } catch (const IntegrityError& e) {
    log.error("{}", e.what());
    return kInfeasible;
  } catch (const ConfigError& e) {
    log.error("{}", e.what());
    return kValidation;
  } catch (const DomainError& e) {
    log.error("{}", e.what());
    return kValidation;
  } catch (const IoError& e) {
    log.error("{}", e.what());
    return kIoFailure;
  } catch (const FormatError& e) {
    log.error("{}", e.what());
    return kIoFailure;
  } catch (const std::exception& e) {
    log.error("{}", e.what());
    return kIoFailure;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace ttda::cli
