#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fvf/ast.hpp"
#include "fvf/choice.hpp"

namespace fvf {

// "expect-run: depth=2 choices=42,0 status=ok" or "... seed=7 status=ok".
struct RunExpectation {
  int depth = 0;
  std::optional<std::vector<Int>> choices;
  std::optional<std::uint64_t> seed;
  RunStatus status = RunStatus::Ok;
};

// A corpus program and the expectations from its leading "// key: value"
// comment block.
struct CorpusEntry {
  std::string path;
  std::string name;
  std::string provenance;
  int expect_verify = 0;       // exit code of `fvf verify`
  std::string expect_failure;  // substring of the first failure message
  std::vector<RunExpectation> runs;
  bool differential = false;   // eligible for the differential soundness check
  std::string source;
};

// Throws std::invalid_argument on a malformed header.
CorpusEntry parse_corpus_entry(const std::string& path, const std::string& source);
// Every *.fvf file in `dir`, sorted by file name.
std::vector<CorpusEntry> load_corpus(const std::string& dir);

struct TrialFailure {
  std::size_t trial = 0;
  std::vector<Int> script;  // replays the failure with a Fail-on-exhaustion script
  std::string failure;
};

struct SoundnessReport {
  bool eligible = false;  // false: the program does not verify, nothing was run
  std::size_t trials = 0, ok = 0, blocked = 0, exhausted = 0;
  std::vector<TrialFailure> failures;  // by trial index
};

// Runs the annotation-erased program `trials` times at `depth`, trial i
// drawing its choices from derive_seed(seed, i). Refuses programs that do
// not verify symbolically.
SoundnessReport differential_soundness(std::shared_ptr<const Program> program, std::size_t trials, int depth,
                                       std::uint64_t seed);

}  // namespace fvf
