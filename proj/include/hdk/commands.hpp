#pragma once

// Subcommands of the hdk tool. Each returns the process exit code:
// 0 success, 2 bad input, 3 geometry failure, 4 fit failure.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "hdk/error.hpp"

namespace hdk::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitGeometry = 3;
inline constexpr int kExitFit = 4;

int exit_code(ErrorCode code);

/// Worker count for multi-file commands: HDK_THREADS if set, else hardware
/// concurrency, never below 1.
unsigned thread_limit();

struct Globals {
  std::uint64_t seed = 0;
  bool quiet = false;
};

// A directory input processes every *.json inside it and writes one output
// per file into the directory named by --out (and --svg / --boundary).

struct GenGtArgs {
  fs::path input;
  int m = 256;
  fs::path out;
  std::optional<fs::path> boundary_out;
  std::optional<fs::path> svg;
};

struct RenderArgs {
  fs::path input;
  int m = 256;
  fs::path out;
  std::optional<fs::path> svg;
};

struct FitArgs {
  fs::path input;
  std::optional<fs::path> config;
  fs::path out;
  std::optional<fs::path> svg;
};

struct EvalArgs {
  fs::path pred_dir;
  fs::path gt_dir;
  fs::path out;
};

struct AblateArgs {
  fs::path input;
  std::vector<int> m_list{16, 64, 256, 1024};
  int reference_m = 4096;
  fs::path out;
};

int run_gen_gt(const GenGtArgs& args, const Globals& g, std::ostream& out, std::ostream& err);
int run_render(const RenderArgs& args, const Globals& g, std::ostream& out, std::ostream& err);
int run_fit(const FitArgs& args, const Globals& g, std::ostream& out, std::ostream& err);
int run_eval(const EvalArgs& args, const Globals& g, std::ostream& out, std::ostream& err);
int run_ablate(const AblateArgs& args, const Globals& g, std::ostream& out, std::ostream& err);

}  // namespace hdk::cli
