#include "artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ttda/errors.hpp"
#include "ttda/format.hpp"
#include "ttda/spectrum.hpp"

namespace ttda::cli {

namespace fs = std::filesystem;

Invocation::Invocation(std::string command) : command_(std::move(command)) {}

void Invocation::set(const std::string& flag, const std::string& value) {
  parameters_[flag] = value;
  args_.push_back("--" + flag);
  args_.push_back(value);
}

void Invocation::set(const std::string& flag, double value) {
  parameters_[flag] = value;
  args_.push_back("--" + flag);
  args_.push_back(format_double(value));
}

void Invocation::set(const std::string& flag, std::size_t value) {
  parameters_[flag] = value;
  args_.push_back("--" + flag);
  args_.push_back(std::to_string(value));
}

void Invocation::set_flag(const std::string& flag, bool on) {
  parameters_[flag] = on;
  if (on) args_.push_back("--" + flag);
}

void Invocation::set_positional(const std::string& name, const std::string& value) {
  parameters_[name] = value;
  positional_.push_back(value);
}

void Invocation::add_output(const fs::path& p) { outputs_.push_back(p.string()); }

std::vector<std::string> Invocation::args() const {
  std::vector<std::string> all{command_};
  all.insert(all.end(), positional_.begin(), positional_.end());
  all.insert(all.end(), args_.begin(), args_.end());
  return all;
}

void Invocation::write_manifest(const fs::path& path) {
  add_output(path);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  const nlohmann::json manifest{{"command", command_},
                                {"parameters", parameters_},
                                {"args", args()},
                                {"seeds", seeds_},
                                {"outputs", outputs_},
                                {"duration_seconds", seconds},
                                {"library_version", kLibraryVersion}};
  write_text(path, manifest.dump(2) + "\n");
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string waveform_csv(const Signal& s) {
  std::string text = "t,s\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    text += format_double(static_cast<double>(k) / s.sample_rate) + ',' + format_double(s.samples[k]) + '\n';
  }
  return text;
}

std::string spectrum_csv(const Signal& s) {
  const Spectrum sp = dft(s);
  const auto mag = magnitude_half(sp);
  std::string text = "frequency,magnitude\n";
  for (std::size_t k = 0; k < mag.size(); ++k) {
    text += format_double(static_cast<double>(k) * sp.bin_resolution) + ',' + format_double(mag[k]) + '\n';
  }
  return text;
}

std::string cloud_csv(const PointCloud& pc) {
  std::string text;
  for (std::size_t c = 0; c < pc.dimension(); ++c) text += (c ? ",x" : "x") + std::to_string(c);
  text += '\n';
  for (std::size_t i = 0; i < pc.size(); ++i) {
    const auto p = pc.point(i);
    for (std::size_t c = 0; c < p.size(); ++c) text += (c ? "," : "") + format_double(p[c]);
    text += '\n';
  }
  return text;
}

std::string diagram_csv(const PersistenceDiagram& d) {
  std::ostringstream out;
  write_diagram_csv(out, d);
  return out.str();
}

std::vector<std::pair<double, double>> cloud_points(const PointCloud& pc) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < pc.size(); ++i) pts.emplace_back(pc.point(i)[0], pc.point(i)[1]);
  return pts;
}

std::vector<std::pair<double, double>> finite_points(const PersistenceDiagram& d, int dim) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& f : d.features) {
    if (f.dim == dim && f.finite()) pts.emplace_back(f.birth, f.death);
  }
  return pts;
}

namespace {

constexpr double kSize = 400.0;
constexpr double kMargin = 40.0;

std::string svg_open(const std::string& title) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize + 2 * kMargin << "\" height=\""
      << kSize + 2 * kMargin << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title
      << "</text>\n";
  return out.str();
}

}  // namespace

std::string scatter_svg(const std::string& title, const std::vector<std::pair<double, double>>& points,
                        bool with_diagonal) {
  double lo = 0.0, hi = 1.0;
  if (!points.empty()) {
    lo = hi = points.front().first;
    for (auto [x, y] : points) {
      lo = std::min({lo, x, y});
      hi = std::max({hi, x, y});
    }
    if (hi == lo) hi = lo + 1.0;
  }
  auto map = [&](double v) { return (v - lo) / (hi - lo) * kSize; };
  std::ostringstream out;
  out << svg_open(title);
  out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" fill=\"none\" stroke=\"#888\"/>\n";
  if (with_diagonal) {
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin + kSize << "\" x2=\"" << kMargin + kSize
        << "\" y2=\"" << kMargin << "\" stroke=\"#bbb\"/>\n";
  }
  for (auto [x, y] : points) {
    out << "<circle cx=\"" << kMargin + map(x) << "\" cy=\"" << kMargin + kSize - map(y)
        << "\" r=\"2\" fill=\"#1f4e9c\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string heatmap_svg(const SweepResult& r) {
  double hi = 0.0;
  for (const auto& row : r.m_values)
    for (double m : row) hi = std::max(hi, m);
  if (hi == 0.0) hi = 1.0;
  const double cw = kSize / static_cast<double>(std::max<std::size_t>(1, r.tau_grid.size()));
  const double ch = kSize / static_cast<double>(std::max<std::size_t>(1, r.a_grid.size()));
  std::ostringstream out;
  out << svg_open(r.preset + ": m(a, tau), tau across, a upward");
  for (std::size_t i = 0; i < r.a_grid.size(); ++i) {
    for (std::size_t j = 0; j < r.tau_grid.size(); ++j) {
      const int level = static_cast<int>(std::lround(255.0 * (1.0 - r.m_values[i][j] / hi)));
      out << "<rect x=\"" << kMargin + j * cw << "\" y=\"" << kMargin + kSize - (i + 1) * ch << "\" width=\""
          << cw << "\" height=\"" << ch << "\" fill=\"rgb(255," << level << ',' << level << ")\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace ttda::cli
