#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <spdlog/logger.h>

namespace ttda::cli {

struct SynthOptions {
  std::string preset;
  double a = 1.0;
  double f0 = 150.0;
  double fs = 48000.0;
  double duration = 0.02;
  int harmonics = 10;
  std::uint64_t seed = 0;
  std::filesystem::path out;
};

struct AnalyzeOptions {
  std::filesystem::path input;
  std::string preset;
  double a = 1.0;
  std::string partials;
  double noise_std = 0.0;
  double f0 = 150.0;
  double fs = 48000.0;
  double duration = 0.02;
  int harmonics = 10;
  std::uint64_t seed = 0;
  int periods = 4;
  bool allow_shift = false;
  bool whole = false;
  double tau_ms = 0.0;
  std::size_t tau_samples = 0;
  std::string tau_frac;
  std::filesystem::path out_dir = "ttda_out";
  bool svg = false;
  // Which mutually exclusive inputs were given on the command line.
  bool has_input = false, has_preset = false, has_partials = false, has_f0 = false;
  int tau_specs = 0;
  bool has_tau_ms = false, has_tau_samples = false, has_tau_frac = false;
};

struct SweepOptions {
  std::vector<std::string> presets;
  bool all = false;
  double f0 = 150.0;
  double fs = 48000.0;
  int harmonics = 10;
  std::string a_grid;
  int tau_steps = 32;
  double window_periods = 1.0;
  std::size_t seed_count = 5;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::filesystem::path out_dir = "ttda_out";
  bool svg = false;
};

struct BatchOptions {
  std::filesystem::path audio_dir;
  std::filesystem::path metadata;
  std::string filename_key = "filename";
  std::string category_key = "category";
  double f0 = 261.6;
  int periods = 4;
  bool allow_shift = false;
  std::size_t jobs = 1;
  std::filesystem::path out_dir = "ttda_out";
};

struct BettiOptions {
  std::filesystem::path complex_file;
  std::filesystem::path out_dir;
};

int cmd_synth(const SynthOptions& o, std::ostream& out);
int cmd_analyze(const AnalyzeOptions& o, std::ostream& out);
int cmd_sweep(const SweepOptions& o, std::ostream& out, spdlog::logger& log);
int cmd_batch(const BatchOptions& o, std::ostream& out, spdlog::logger& log);
int cmd_betti(const BettiOptions& o, std::ostream& out);

}  // namespace ttda::cli
