#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>

#include "json.hpp"

#include "ttda/cli.hpp"
#include "ttda/format.hpp"
#include "ttda/ingest.hpp"
#include "ttda/sigsynth.hpp"

using namespace ttda;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result ttda_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "ttda_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::pair<double, double>> dim1_rows(const fs::path& csv) {
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    if (line.rfind("1,", 0) != 0) continue;
    const auto c2 = line.find(',', 2);
    rows.emplace_back(parse_double(line.substr(2, c2 - 2)), parse_double(line.substr(c2 + 1)));
  }
  return rows;
}

std::vector<double> persistences(const std::vector<std::pair<double, double>>& rows) {
  std::vector<double> p;
  for (auto [b, d] : rows) p.push_back(d - b);
  std::sort(p.rbegin(), p.rend());
  return p;
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  return static_cast<std::size_t>(std::count(std::istreambuf_iterator<char>(in), {}, '\n'));
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

struct ScopedEnv {
  std::string name;
  ScopedEnv(std::string n, const std::string& value) : name(std::move(n)) { setenv(name.c_str(), value.c_str(), 1); }
  ~ScopedEnv() { unsetenv(name.c_str()); }
};

}  // namespace

TEST_CASE("synth writes the expected WAV and manifest") {
  const auto dir = fresh_dir("synth");
  const auto wav = dir / "square.wav";
  const Result r = ttda_run({"synth", "--preset", "square", "--a", "1.0", "--f0", "150", "--fs", "48000",
                             "--dur", "0.02", "--out", wav.string()});
  CHECK(r.code == cli::kOk);
  const Signal s = load_wav(wav);
  CHECK(s.size() == 960);
  CHECK(s.sample_rate == 48000.0);
  const auto manifest = nlohmann::json::parse(slurp(wav.string() + ".manifest.json"));
  CHECK(manifest["command"] == "synth");
  CHECK(manifest["parameters"]["preset"] == "square");
}

TEST_CASE("synth validation and I/O errors") {
  const auto dir = fresh_dir("synth_bad");
  const Result bad_a = ttda_run({"synth", "--preset", "square", "--a", "1.5", "--out", (dir / "x.wav").string()});
  CHECK(bad_a.code == cli::kValidation);
  CHECK(bad_a.err.find("--a") != std::string::npos);
  CHECK(bad_a.err.find("[0,1]") != std::string::npos);

  CHECK(ttda_run({"synth", "--preset", "bogus", "--out", (dir / "x.wav").string()}).code == cli::kValidation);
  CHECK(ttda_run({"synth", "--preset", "square"}).code == cli::kValidation);
  CHECK(ttda_run({"synth", "--preset", "square", "--f0", "-3", "--out", (dir / "x.wav").string()}).code ==
        cli::kValidation);
  write_file(dir / "blocker", "");
  CHECK(ttda_run({"synth", "--preset", "square", "--out", (dir / "blocker" / "x.wav").string()}).code ==
        cli::kIoFailure);
}

TEST_CASE("synth is deterministic per seed") {
  const auto dir = fresh_dir("synth_seed");
  for (const char* name : {"one.wav", "two.wav"}) {
    REQUIRE(ttda_run({"synth", "--preset", "pink_noise", "--a", "0.5", "--seed", "9", "--out",
                      (dir / name).string()})
                .code == cli::kOk);
  }
  REQUIRE(ttda_run({"synth", "--preset", "pink_noise", "--a", "0.5", "--seed", "10", "--out",
                    (dir / "three.wav").string()})
              .code == cli::kOk);
  CHECK(slurp(dir / "one.wav") == slurp(dir / "two.wav"));
  CHECK(slurp(dir / "one.wav") != slurp(dir / "three.wav"));
}

TEST_CASE("analyze: pure sine has one dominant loop") {
  const auto dir = fresh_dir("analyze_sine");
  const Result r = ttda_run({"analyze", "--f0", "150", "--fs", "48000", "--tau-ms", "0.125", "--out-dir",
                             dir.string(), "--svg"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.rfind("m=0", 0) == 0);
  for (const char* name : {"waveform.csv", "spectrum.csv", "embedding.csv", "diagram.csv", "feature.json",
                           "manifest.json", "embedding.svg", "diagram.svg"}) {
    CHECK(fs::exists(dir / name));
  }
  CHECK(count_lines(dir / "embedding.csv") == 1 + 960 - 6);
  CHECK(slurp(dir / "spectrum.csv").rfind("frequency,magnitude\n", 0) == 0);
  const auto p = persistences(dim1_rows(dir / "diagram.csv"));
  REQUIRE(p.size() >= 2);
  CHECK(p[0] >= 5 * p[1]);
}

TEST_CASE("analyze: harmonic partials add loops") {
  const auto base = fresh_dir("analyze_partials");
  auto diagram_of = [&](const std::string& name, const std::string& partials) {
    const auto dir = base / name;
    std::vector<std::string> args{"analyze", "--tau-ms", "0.125", "--out-dir", dir.string()};
    if (!partials.empty()) {
      args.push_back("--partials");
      args.push_back(partials);
    }
    REQUIRE(ttda_run(args).code == cli::kOk);
    return dim1_rows(dir / "diagram.csv");
  };
  const auto pure = persistences(diagram_of("pure", ""));
  std::vector<double> rest(pure.begin() + 1, pure.end());
  std::nth_element(rest.begin(), rest.begin() + rest.size() / 2, rest.end());
  const double band = 3 * rest[rest.size() / 2];

  const auto integer = diagram_of("integer", "1:1,2:0.7");
  const auto p = persistences(integer);
  CHECK(std::count_if(p.begin() + 1, p.end(), [&](double v) { return v > band; }) >= 2);

  const auto detuned = diagram_of("detuned", "1:1,2.1:0.7");
  CHECK(detuned.size() > integer.size());
}

TEST_CASE("analyze: infeasible and invalid requests") {
  const auto dir = fresh_dir("analyze_bad");
  const Result far = ttda_run({"analyze", "--tau-samples", "5000", "--out-dir", dir.string()});
  CHECK(far.code == cli::kInfeasible);
  CHECK(far.err.find("1..959") != std::string::npos);

  CHECK(ttda_run({"analyze", "--out-dir", dir.string()}).code == cli::kValidation);
  CHECK(ttda_run({"analyze", "--tau-ms", "1", "--tau-samples", "3", "--out-dir", dir.string()}).code ==
        cli::kValidation);
  CHECK(ttda_run({"analyze", "--tau-frac", "1/1000", "--out-dir", dir.string()}).code == cli::kValidation);
  CHECK(ttda_run({"analyze", "--partials", "1:x", "--tau-samples", "3", "--out-dir", dir.string()}).code ==
        cli::kValidation);
  CHECK(ttda_run({"analyze", "--input", (dir / "missing.wav").string(), "--f0", "261.6", "--tau-samples", "3",
                  "--out-dir", dir.string()})
            .code == cli::kIoFailure);

  save_wav_pcm16(dir / "short.wav", {std::vector<double>(300, 0.0)}, 16000);
  {
    std::vector<double> x(300, 0.1);
    x[290] = 0.9;
    save_wav_pcm16(dir / "late.wav", {x}, 16000);
  }
  CHECK(ttda_run({"analyze", "--input", (dir / "late.wav").string(), "--tau-samples", "3", "--out-dir",
                  dir.string()})
            .code == cli::kValidation);  // --f0 is mandatory for files
  CHECK(ttda_run({"analyze", "--input", (dir / "late.wav").string(), "--f0", "261.6", "--tau-samples", "3",
                  "--out-dir", dir.string()})
            .code == cli::kInfeasible);
  CHECK(ttda_run({"analyze", "--input", (dir / "late.wav").string(), "--f0", "261.6", "--allow-shift",
                  "--tau-frac", "1/4", "--out-dir", dir.string()})
            .code == cli::kOk);
}

TEST_CASE("sweep writes one file pair per preset on the default grid") {
  const auto dir = fresh_dir("sweep");
  const Result r = ttda_run({"sweep", "--all", "--f0", "1200", "--jobs", "1", "--svg", "--out-dir", dir.string()});
  REQUIRE(r.code == cli::kOk);
  for (auto kind : all_preset_kinds()) {
    const std::string name(preset_name(kind));
    const auto j = nlohmann::json::parse(slurp(dir / (name + ".json")));
    REQUIRE(j["m_values"].size() == 11);
    for (const auto& row : j["m_values"]) CHECK(row.size() == 32);
    for (const auto& m : j["m_values"][0]) CHECK(m.get<double>() == 0.0);
    CHECK(fs::exists(dir / (name + ".csv")));
    CHECK(fs::exists(dir / (name + ".svg")));
    CHECK(r.out.find(name + " best_tau=") != std::string::npos);
  }
  CHECK(ttda_run({"sweep", "--out-dir", dir.string()}).code == cli::kValidation);
  CHECK(ttda_run({"sweep", "--preset", "triangle", "--a-grid", "0,2", "--out-dir", dir.string()}).code ==
        cli::kValidation);
}

TEST_CASE("batch: partial success and empty inputs") {
  const auto dir = fresh_dir("batch");
  const auto audio = dir / "audio";
  fs::create_directories(audio);
  const double fs_rate = 16000, f0 = 261.6;
  for (int i = 0; i < 3; ++i) {
    std::vector<double> x(8000);
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double t = static_cast<double>(k) / fs_rate;
      x[k] = std::exp(-3 * t) * (std::sin(2 * M_PI * f0 * t) + 0.3 * i * std::sin(4 * M_PI * f0 * t));
    }
    save_wav_pcm16(audio / ("note" + std::to_string(i) + ".wav"), {x}, fs_rate);
  }
  write_file(audio / "corrupt.wav", "RIFF....WAVEjunk");
  write_file(audio / "readme.txt", "not audio");
  write_file(dir / "meta.json",
             R"({"note0": {"family": "guitar"}, "note1": {"family": "guitar"},
                 "note2": {"family": "flute"}, "corrupt": {"family": "flute"}})");

  const auto out = dir / "out";
  const Result r = ttda_run({"batch", "--audio-dir", audio.string(), "--metadata", (dir / "meta.json").string(),
                             "--category-key", "family", "--f0", "261.6", "--out-dir", out.string()});
  CHECK(r.code == cli::kPartialSuccess);
  CHECK(r.err.find("skipped corrupt.wav") != std::string::npos);
  CHECK(count_lines(out / "features.csv") == 1 + 3);
  CHECK(slurp(out / "features.csv").rfind("file,category,m_half,m_quarter\n", 0) == 0);
  const std::string summary = slurp(out / "summary.csv");
  CHECK(summary.find("\nflute,1,") != std::string::npos);
  CHECK(summary.find("\nguitar,2,") != std::string::npos);

  const auto empty = dir / "empty";
  fs::create_directories(empty);
  CHECK(ttda_run({"batch", "--audio-dir", empty.string(), "--metadata", (dir / "meta.json").string(),
                  "--out-dir", out.string()})
            .code == cli::kValidation);
  write_file(dir / "none.json", "{}");
  CHECK(ttda_run({"batch", "--audio-dir", audio.string(), "--metadata", (dir / "none.json").string(),
                  "--out-dir", out.string()})
            .code == cli::kValidation);
}

TEST_CASE("betti command") {
  const auto dir = fresh_dir("betti");
  write_file(dir / "fig.txt", "# filled triangle and a hollow one\n0 1 2\n3 4\n4 5\n3 5\n");
  write_file(dir / "vertex.txt", "7\n");
  write_file(dir / "sphere.txt", "0 1 2\n0 1 3\n0 2 3\n1 2 3\n");
  write_file(dir / "bad.txt", "0 1\n\n1 two\n");
  write_file(dir / "repeat.txt", "0 0\n");

  Result r = ttda_run({"betti", (dir / "fig.txt").string()});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "beta_0=2 beta_1=1 beta_2=0\n");
  CHECK(ttda_run({"betti", (dir / "vertex.txt").string()}).out == "beta_0=1 beta_1=0 beta_2=0\n");
  CHECK(ttda_run({"betti", (dir / "sphere.txt").string()}).out == "beta_0=1 beta_1=0 beta_2=1\n");

  r = ttda_run({"betti", (dir / "bad.txt").string()});
  CHECK(r.code == cli::kValidation);
  CHECK(r.err.find("line 3") != std::string::npos);
  CHECK(ttda_run({"betti", (dir / "repeat.txt").string()}).code == cli::kValidation);
  CHECK(ttda_run({"betti", (dir / "absent.txt").string()}).code == cli::kIoFailure);

  CHECK(ttda_run({"betti", (dir / "fig.txt").string(), "--out-dir", (dir / "o").string()}).code == cli::kOk);
  CHECK(fs::exists(dir / "o" / "manifest.json"));
}

TEST_CASE("replaying a manifest reproduces the outputs bitwise") {
  const auto dir = fresh_dir("replay");
  REQUIRE(ttda_run({"analyze", "--preset", "white_noise", "--a", "0.4", "--seed", "5", "--tau-frac", "1/4",
                    "--out-dir", dir.string()})
              .code == cli::kOk);
  const std::string diagram = slurp(dir / "diagram.csv");
  const std::string feature = slurp(dir / "feature.json");
  const std::string waveform = slurp(dir / "waveform.csv");
  fs::copy_file(dir / "manifest.json", dir.parent_path() / "replay.manifest.json",
                fs::copy_options::overwrite_existing);
  fs::remove(dir / "diagram.csv");
  const Result r = ttda_run({"replay", (dir.parent_path() / "replay.manifest.json").string()});
  CHECK(r.code == cli::kOk);
  CHECK(slurp(dir / "diagram.csv") == diagram);
  CHECK(slurp(dir / "feature.json") == feature);
  CHECK(slurp(dir / "waveform.csv") == waveform);

  write_file(dir / "broken.json", "{\"args\": 3}");
  CHECK(ttda_run({"replay", (dir / "broken.json").string()}).code == cli::kIoFailure);
}

TEST_CASE("environment variables sit between flags and defaults") {
  const auto dir = fresh_dir("env");
  {
    ScopedEnv env("TTDA_OUT_DIR", (dir / "from_env").string());
    CHECK(ttda_run({"analyze", "--tau-samples", "6"}).code == cli::kOk);
    CHECK(fs::exists(dir / "from_env" / "diagram.csv"));
    CHECK(ttda_run({"analyze", "--tau-samples", "6", "--out-dir", (dir / "from_flag").string()}).code == cli::kOk);
    CHECK(fs::exists(dir / "from_flag" / "diagram.csv"));
  }
  {
    ScopedEnv env("TTDA_SEED", "9");
    REQUIRE(ttda_run({"synth", "--preset", "white_noise", "--out", (dir / "env.wav").string()}).code == cli::kOk);
    REQUIRE(ttda_run({"synth", "--preset", "white_noise", "--seed", "3", "--out", (dir / "flag.wav").string()})
                .code == cli::kOk);
  }
  REQUIRE(ttda_run({"synth", "--preset", "white_noise", "--seed", "9", "--out", (dir / "nine.wav").string()})
              .code == cli::kOk);
  REQUIRE(ttda_run({"synth", "--preset", "white_noise", "--seed", "3", "--out", (dir / "three.wav").string()})
              .code == cli::kOk);
  CHECK(slurp(dir / "env.wav") == slurp(dir / "nine.wav"));
  CHECK(slurp(dir / "flag.wav") == slurp(dir / "three.wav"));
  {
    ScopedEnv env("TTDA_JOBS", "zero");
    CHECK(ttda_run({"sweep", "--preset", "triangle", "--out-dir", dir.string()}).code == cli::kValidation);
  }
}

namespace {

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
};

}  // namespace

TEST_CASE("CSV numbers ignore the global locale") {
  const auto dir = fresh_dir("locale");
  const std::locale previous = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
  const Result r = ttda_run({"analyze", "--tau-samples", "6", "--out-dir", dir.string()});
  std::locale::global(previous);
  REQUIRE(r.code == cli::kOk);
  std::ifstream in(dir / "waveform.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,s");
  std::getline(in, line);
  std::getline(in, line);
  CHECK(std::count(line.begin(), line.end(), ',') == 1);
  CHECK(line.find('.') != std::string::npos);
}

TEST_CASE("help and version") {
  CHECK(ttda_run({"--help"}).code == cli::kOk);
  const Result v = ttda_run({"--version"});
  CHECK(v.code == cli::kOk);
  CHECK(v.out.find("0.1.0") != std::string::npos);
  CHECK(ttda_run({}).code == cli::kValidation);
  CHECK(ttda_run({"frobnicate"}).code == cli::kValidation);
}
