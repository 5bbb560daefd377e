#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ttda/signal.hpp"

namespace ttda {

struct AudioFile {
  std::filesystem::path path;
  Signal signal;  // mono
  int channels = 1;
};

/// Reads RIFF/WAVE with PCM 8/16/24/32-bit integer or 32/64-bit IEEE float
/// data. Samples are divided by the format's full-scale value and channels
/// are averaged to mono.
AudioFile read_wav(const std::filesystem::path& path);
Signal load_wav(const std::filesystem::path& path);

/// Writes a mono 32-bit IEEE-float WAV.
void save_wav_float(const std::filesystem::path& path, const Signal& s);

/// Writes a 16-bit PCM WAV with interleaved channels (all of equal length).
void save_wav_pcm16(const std::filesystem::path& path,
                    const std::vector<std::vector<double>>& channels, double sample_rate);

struct SegmentOptions {
  int periods = 4;
  // Shift the window left to end at the last sample instead of failing.
  bool allow_shift = false;
};

/// Index of the first sample with the largest absolute value.
std::size_t peak_index(const Signal& s);

/// Window of floor(periods * fs / f0) samples starting at the absolute-peak
/// sample. Throws ExtractionError when it would run past the end and
/// allow_shift is off.
Signal extract_segment(const Signal& s, double f0, const SegmentOptions& opts = {});

/// s / max|s|. Throws DegenerateInputError for an all-zero signal.
Signal normalize_peak(const Signal& s);

struct MetadataEntry {
  std::string filename;
  std::string category;
};

struct MetadataKeys {
  std::string filename = "filename";
  std::string category = "category";
};

// Accepted layouts:
//   {"a.wav": "guitar", ...}
//   {"note": {"<filename key>": "...", "<category key>": "guitar"}, ...}
//     (the object key stands in for a missing filename field)
//   [{"<filename key>": "a.wav", "<category key>": "guitar"}, ...]
std::vector<MetadataEntry> load_metadata(const std::filesystem::path& path,
                                         const MetadataKeys& keys = {});

}  // namespace ttda
