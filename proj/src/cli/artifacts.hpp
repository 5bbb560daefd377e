#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ttda/embed.hpp"
#include "ttda/persistence.hpp"
#include "ttda/timbre.hpp"

namespace ttda::cli {

/// Resolved parameters of one invocation, kept both as JSON and as the
/// argument list that reproduces the run.
class Invocation {
 public:
  explicit Invocation(std::string command);

  void set(const std::string& flag, const std::string& value);
  void set(const std::string& flag, double value);
  void set(const std::string& flag, std::size_t value);
  void set_flag(const std::string& flag, bool on);
  void set_positional(const std::string& name, const std::string& value);
  void add_output(const std::filesystem::path& p);
  void set_seeds(std::vector<std::uint64_t> seeds) { seeds_ = std::move(seeds); }

  const std::string& command() const { return command_; }
  std::vector<std::string> args() const;

  /// Writes the run manifest and records its own path as an output.
  void write_manifest(const std::filesystem::path& path);

 private:
  std::string command_;
  nlohmann::json parameters_ = nlohmann::json::object();
  std::vector<std::string> args_;
  std::vector<std::string> positional_;
  std::vector<std::uint64_t> seeds_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void ensure_directory(const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);

std::string waveform_csv(const Signal& s);
std::string spectrum_csv(const Signal& s);
std::string cloud_csv(const PointCloud& pc);
std::string diagram_csv(const PersistenceDiagram& d);

std::string scatter_svg(const std::string& title, const std::vector<std::pair<double, double>>& points,
                        bool with_diagonal);
std::string heatmap_svg(const SweepResult& r);

std::vector<std::pair<double, double>> cloud_points(const PointCloud& pc);
std::vector<std::pair<double, double>> finite_points(const PersistenceDiagram& d, int dim);

}  // namespace ttda::cli
