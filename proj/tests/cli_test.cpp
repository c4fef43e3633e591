#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "iclab/cli.hpp"
#include "iclab/config.hpp"

using namespace iclab;

namespace {

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const char* name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("analyze exit codes") {
  cli::AnalyzeArgs args;
  args.sequence = "alternating";
  args.ideal = "density";
  args.horizon = 1 << 14;
  CHECK(cli::run_analyze(args) == cli::kExitOk);

  args.sequence = "harmonic";
  args.ideal = "fin";
  CHECK(cli::run_analyze(args) == cli::kExitOk);

  args.ideal = "bogus";
  CHECK(cli::run_analyze(args) == cli::kExitUsage);

  args.ideal = "fin";
  args.sequence = "no-such-sequence";
  CHECK(cli::run_analyze(args) == cli::kExitUsage);

  // pinned between thresholds: an undecidable slope
  args.sequence = "csv:undecided_tmp.csv";
  {
    std::ofstream out("undecided_tmp.csv");
    // exceptional set of density 0.10 sits between the two thresholds
    for (int n = 1; n <= 16384; ++n) out << n << "," << (n % 10 == 0 ? 1.0 : 0.0) << "\n";
  }
  args.horizon = 16384;
  CHECK(cli::run_analyze(args) == cli::kExitUndecided);
  std::remove("undecided_tmp.csv");
}

TEST_CASE("construct exit codes and artifacts") {
  TempDir dir("iclab_construct_test");
  cli::ConstructArgs args;
  args.sequence = "alternating";
  args.ideal = "density";
  args.horizon = 1 << 18;
  args.target = 1 << 10;
  args.min_rounds = 4;
  args.out_dir = dir.path.string();
  CHECK(cli::run_construct(args) == cli::kExitOk);
  CHECK(std::filesystem::exists(dir.path / "selection_subseq.txt"));
  CHECK(std::filesystem::exists(dir.path / "trace.txt"));

  args.perm = true;
  CHECK(cli::run_construct(args) == cli::kExitOk);
  CHECK(std::filesystem::exists(dir.path / "selection_perm.txt"));

  args.perm = false;
  args.sequence = "harmonic";
  CHECK(cli::run_construct(args) == cli::kExitNotConstructible);
}

TEST_CASE("experiment writes report, tallies and manifest") {
  TempDir dir("iclab_experiment_test");
  cli::ExperimentArgs args;
  args.config.kind = "emeasure";
  args.config.subject = "harmonic";
  args.config.ideal = "density";
  args.config.horizon = 1 << 13;
  args.config.trials = 6;
  args.config.out_dir = dir.path.string();
  CHECK(cli::run_experiment(args) == cli::kExitOk);
  CHECK(std::filesystem::exists(dir.path / "report.json"));
  CHECK(std::filesystem::exists(dir.path / "tallies.csv"));
  CHECK(std::filesystem::exists(dir.path / "manifest.json"));

  // rerunning from the manifest reproduces report.json byte for byte
  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  std::string first = read(dir.path / "report.json");
  cli::ExperimentArgs again;
  again.manifest_path = (dir.path / "manifest.json").string();
  CHECK(cli::run_experiment(again) == cli::kExitOk);
  CHECK(read(dir.path / "report.json") == first);

  cli::ExperimentArgs bad;
  bad.config.kind = "emeasure";
  bad.config.subject = "harmonic";
  bad.config.horizon = 100;  // under the floor
  CHECK(cli::run_experiment(bad) == cli::kExitUsage);
}

TEST_CASE("dispatch parses subcommands") {
  const char* argv_ok[] = {"iclab", "analyze", "--seq", "alternating",
                           "--ideal", "density", "--horizon", "16384"};
  CHECK(cli::dispatch(8, argv_ok) == cli::kExitOk);

  const char* argv_bad[] = {"iclab", "frobnicate"};
  CHECK(cli::dispatch(2, argv_bad) == cli::kExitUsage);
}
