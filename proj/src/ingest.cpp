#include "ttda/ingest.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "json.hpp"

#include "ttda/errors.hpp"

namespace ttda {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

double decode_sample(const unsigned char* p, const FormatChunk& fmt) {
  if (fmt.format == kFormatFloat) {
    if (fmt.bits == 32) {
      return static_cast<double>(std::bit_cast<float>(le32(p)));
    }
    std::uint64_t raw = 0;
    for (int i = 0; i < 8; ++i) raw |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return std::bit_cast<double>(raw);
  }
  switch (fmt.bits) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16:
      return static_cast<std::int16_t>(le16(p)) / 32768.0;
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case 32:
      return static_cast<std::int32_t>(le32(p)) / 2147483648.0;
  }
  return 0.0;
}

void write_bytes(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<unsigned char> riff_header(std::uint16_t format, std::uint16_t channels,
                                       std::uint32_t rate, std::uint16_t bits,
                                       std::uint32_t data_bytes) {
  std::vector<unsigned char> out;
  const std::uint16_t block_align = static_cast<std::uint16_t>(channels * bits / 8);
  put_tag(out, "RIFF");
  put32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, format);
  put16(out, channels);
  put32(out, rate);
  put32(out, rate * block_align);
  put16(out, block_align);
  put16(out, bits);
  put_tag(out, "data");
  put32(out, data_bytes);
  return out;
}

std::uint32_t checked_rate(double sample_rate) {
  if (!(sample_rate > 0.0) || sample_rate != std::floor(sample_rate) || sample_rate > 4.0e9) {
    throw FormatError("WAV sample rate must be a positive integer, got " +
                      std::to_string(sample_rate));
  }
  return static_cast<std::uint32_t>(sample_rate);
}

}  // namespace

AudioFile read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  const std::string where = " in '" + path.string() + "'";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("missing RIFF/WAVE header" + where);
  }

  FormatChunk fmt;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id(reinterpret_cast<const char*>(bytes.data() + pos), 4);
    const std::size_t size = le32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (id == "fmt ") {
      if (size < 16 || size > available) throw FormatError("truncated 'fmt ' chunk" + where);
      const unsigned char* p = bytes.data() + body;
      fmt.format = le16(p);
      fmt.channels = le16(p + 2);
      fmt.sample_rate = le32(p + 4);
      fmt.block_align = le16(p + 12);
      fmt.bits = le16(p + 14);
      if (fmt.format == kFormatExtensible) {
        if (size < 40) throw FormatError("truncated extensible 'fmt ' chunk" + where);
        fmt.format = le16(p + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (id == "data") {
      data = bytes.data() + body;
      data_size = std::min(size, available);
      if (have_fmt) break;
    }
    pos = body + size + (size & 1u);
  }

  if (!have_fmt) throw FormatError("no 'fmt ' chunk" + where);
  if (fmt.format != kFormatPcm && fmt.format != kFormatFloat) {
    throw FormatError("'fmt ' chunk declares unsupported codec " + std::to_string(fmt.format) +
                      " (only PCM and IEEE float)" + where);
  }
  const bool bits_ok = fmt.format == kFormatPcm
                           ? (fmt.bits == 8 || fmt.bits == 16 || fmt.bits == 24 || fmt.bits == 32)
                           : (fmt.bits == 32 || fmt.bits == 64);
  if (!bits_ok) {
    throw FormatError("'fmt ' chunk declares unsupported bit depth " + std::to_string(fmt.bits) +
                      where);
  }
  if (fmt.channels == 0 || fmt.sample_rate == 0) {
    throw FormatError("'fmt ' chunk has zero channels or sample rate" + where);
  }
  if (data == nullptr) throw FormatError("no 'data' chunk" + where);

  const std::size_t width = fmt.bits / 8u;
  const std::size_t frame = std::max<std::size_t>(fmt.block_align, width * fmt.channels);
  const std::size_t frames = data_size / frame;
  if (frames == 0) throw FormatError("'data' chunk holds no complete frame" + where);

  AudioFile file;
  file.path = path;
  file.channels = fmt.channels;
  file.signal.sample_rate = static_cast<double>(fmt.sample_rate);
  file.signal.samples.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::size_t c = 0; c < fmt.channels; ++c) {
      acc += decode_sample(data + f * frame + c * width, fmt);
    }
    file.signal.samples[f] = acc / fmt.channels;
  }
  for (double v : file.signal.samples) {
    if (!std::isfinite(v)) throw FormatError("'data' chunk contains non-finite samples" + where);
  }
  return file;
}

Signal load_wav(const std::filesystem::path& path) { return read_wav(path).signal; }

void save_wav_float(const std::filesystem::path& path, const Signal& s) {
  const std::uint32_t rate = checked_rate(s.sample_rate);
  const auto data_bytes = static_cast<std::uint32_t>(s.samples.size() * 4);
  auto out = riff_header(kFormatFloat, 1, rate, 32, data_bytes);
  for (double v : s.samples) put32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  write_bytes(path, out);
}

void save_wav_pcm16(const std::filesystem::path& path,
                    const std::vector<std::vector<double>>& channels, double sample_rate) {
  if (channels.empty()) throw DomainError("no channels to write");
  const std::size_t frames = channels.front().size();
  for (const auto& c : channels) {
    if (c.size() != frames) throw DomainError("channels differ in length");
  }
  const std::uint32_t rate = checked_rate(sample_rate);
  const auto nch = static_cast<std::uint16_t>(channels.size());
  auto out = riff_header(kFormatPcm, nch, rate, 16, static_cast<std::uint32_t>(frames * nch * 2));
  for (std::size_t f = 0; f < frames; ++f) {
    for (const auto& c : channels) {
      const double scaled = std::clamp(std::round(c[f] * 32768.0), -32768.0, 32767.0);
      put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    }
  }
  write_bytes(path, out);
}

std::size_t peak_index(const Signal& s) {
  validate(s);
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.samples.size(); ++i) {
    if (std::abs(s.samples[i]) > std::abs(s.samples[best])) best = i;
  }
  return best;
}

Signal extract_segment(const Signal& s, double f0, const SegmentOptions& opts) {
  validate(s);
  if (!(f0 > 0.0)) throw DomainError("fundamental frequency must be positive");
  if (opts.periods < 1) throw DomainError("periods must be a positive integer");
  const auto length =
      static_cast<std::size_t>(std::floor(opts.periods * s.sample_rate / f0));
  if (length == 0) throw DomainError("segment length rounds to zero samples");
  std::size_t start = peak_index(s);
  const std::size_t tail = s.size() - start;
  if (tail < length) {
    if (!opts.allow_shift || length > s.size()) {
      throw ExtractionError("segment of " + std::to_string(length) +
                                " samples does not fit after the peak at index " +
                                std::to_string(start) + "; only " + std::to_string(tail) +
                                " samples remain",
                            tail);
    }
    start = s.size() - length;
  }
  Signal out;
  out.sample_rate = s.sample_rate;
  out.fundamental_hz = f0;
  out.samples.assign(s.samples.begin() + static_cast<std::ptrdiff_t>(start),
                     s.samples.begin() + static_cast<std::ptrdiff_t>(start + length));
  return out;
}

Signal normalize_peak(const Signal& s) {
  validate(s);
  const double peak = std::abs(s.samples[peak_index(s)]);
  if (peak == 0.0) throw DegenerateInputError("cannot peak-normalize an all-zero signal");
  Signal out = s;
  for (double& v : out.samples) v /= peak;
  return out;
}

std::vector<MetadataEntry> load_metadata(const std::filesystem::path& path,
                                         const MetadataKeys& keys) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open metadata '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("metadata '" + path.string() + "' is not valid JSON: " + e.what());
  }

  std::vector<MetadataEntry> entries;
  auto from_object = [&](const nlohmann::json& obj, const std::string* fallback_name) {
    if (!obj.contains(keys.category) || !obj[keys.category].is_string()) {
      throw FormatError("metadata record lacks string field '" + keys.category + "'");
    }
    MetadataEntry e;
    e.category = obj[keys.category].get<std::string>();
    if (obj.contains(keys.filename) && obj[keys.filename].is_string()) {
      e.filename = obj[keys.filename].get<std::string>();
    } else if (fallback_name != nullptr) {
      e.filename = *fallback_name;
    } else {
      throw FormatError("metadata record lacks string field '" + keys.filename + "'");
    }
    entries.push_back(std::move(e));
  };

  if (doc.is_object()) {
    for (const auto& [name, value] : doc.items()) {
      if (value.is_string()) {
        entries.push_back({name, value.get<std::string>()});
      } else if (value.is_object()) {
        from_object(value, &name);
      } else {
        throw FormatError("metadata value for '" + name + "' is neither string nor object");
      }
    }
  } else if (doc.is_array()) {
    for (const auto& value : doc) {
      if (!value.is_object()) throw FormatError("metadata array holds a non-object element");
      from_object(value, nullptr);
    }
  } else {
    throw FormatError("metadata must be a JSON object or array");
  }
  return entries;
}

}  // namespace ttda
