#ifndef GRAPHSURF_CLI_HPP
#define GRAPHSURF_CLI_HPP

#include <optional>
#include <string>

namespace graphsurf::cli {

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  int threads = 0; // 0: GRAPHSURF_THREADS env, then hardware concurrency
  std::optional<std::uint64_t> seed;
};

// Exit codes: 0 ok, 2 config error, 3 geometry construction failure,
// 4 too many failed sweep samples, 5 failed convergence check.
int cmd_geometry(const Options& opts);
int cmd_constants(const Options& opts);
int cmd_sweep(const Options& opts);
int cmd_verify(const Options& opts);

std::string default_config_json();

/// Full argument parsing + dispatch; the entry point of the binary.
int run_main(int argc, char** argv);

} // namespace graphsurf::cli

#endif
