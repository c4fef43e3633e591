#pragma once

#include <string>

#include "iclab/experiments.hpp"

namespace iclab::cli {

// Exit codes: 0 success/decided, 1 usage or config error, 2 undecided
// verdict, 3 construction impossible.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitUndecided = 2;
inline constexpr int kExitNotConstructible = 3;

struct AnalyzeArgs {
  std::string sequence;
  std::string ideal = "density";
  std::uint64_t horizon = 1ull << 17;
  double eps_min = 1.0 / 128.0;
};

struct ConstructArgs {
  std::string sequence;
  std::string ideal = "density";
  std::uint64_t horizon = 1ull << 21;
  std::uint64_t target = 1ull << 16;
  std::uint64_t seed = 0x1CEB00DA;
  std::uint64_t min_rounds = 8;
  bool perm = false;
  std::string out_dir = "out";
};

struct ExperimentArgs {
  ExperimentConfig config;
  std::string manifest_path;  // non-empty: reproduce this manifest
};

int run_analyze(const AnalyzeArgs& args);
int run_construct(const ConstructArgs& args);
int run_experiment(ExperimentArgs args);

// Full argv dispatch (the tool's main defers here).
int dispatch(int argc, const char* const* argv);

}  // namespace iclab::cli
