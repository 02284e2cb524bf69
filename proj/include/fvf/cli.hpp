#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace fvf::cli {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitInput = 2;  // unreadable file, parse or static error, bad flags

struct VerifyOptions {
  bool trace = false;                     // print every routine's full symbolic log
  std::optional<std::string> smtlib_dir;  // dump each prover query; forces sequential runs
  unsigned jobs = 0;                      // 0: one per hardware thread
};

struct RunOptions {
  int depth = 0;
  std::optional<std::string> choices;  // CSV script; exhaustion fails the run
  std::optional<std::uint64_t> seed;   // random resolution
  std::optional<int> trials;           // with seed: repeat with derived seeds
  bool trace = false;
};

int cmd_verify(const std::string& path, const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_run(const std::string& path, const RunOptions& opts, std::ostream& out, std::ostream& err);
// `routine` may be "main" for the main command (unless a routine has that name).
int cmd_trace(const std::string& path, const std::string& routine, std::ostream& out, std::ostream& err);

}  // namespace fvf::cli
