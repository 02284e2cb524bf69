#include <filesystem>

#include "doctest.h"
#include "fvf/concrete.hpp"
#include "fvf/corpus.hpp"
#include "fvf/symbolic.hpp"
#include "fvf/syntax.hpp"
#include "support.hpp"

using namespace fvf;

namespace {

std::string joined(const std::vector<std::string>& files) {
  std::string out;
  for (const auto& f : files) out += f + " ";
  return out;
}

}  // namespace

TEST_CASE("corpus contents") {
  auto entries = load_corpus(FVF_CORPUS_DIR);
  std::vector<std::string> names;
  int mutants = 0;
  for (const auto& e : entries) {
    names.push_back(e.name);
    if (e.provenance.find("mutant") != std::string::npos) ++mutants;
    CHECK_FALSE(e.provenance.empty());
  }
  CAPTURE(joined(names));
  for (const char* needed : {"range_dispose", "swap", "reverse", "fig15", "fig2", "recurse"})
    CHECK(std::find(names.begin(), names.end(), needed) != names.end());
  CHECK(mutants >= 5);
  CHECK(std::is_sorted(entries.begin(), entries.end(),
                       [](const CorpusEntry& a, const CorpusEntry& b) { return a.path < b.path; }));
}

TEST_CASE("header parsing") {
  auto e = parse_corpus_entry("x.fvf",
                              "// name: x\n// provenance: invented\n// expect-verify: 1\n"
                              "// expect-failure: leak\n// expect-run: depth=3 choices=1,-2 status=failed\n"
                              "// expect-run: depth=4 seed=9 status=script-exhausted\n// differential: yes\nskip\n");
  CHECK(e.name == "x");
  CHECK(e.expect_verify == 1);
  CHECK(e.expect_failure == "leak");
  REQUIRE(e.runs.size() == 2);
  CHECK(e.runs[0].choices == std::vector<Int>{1, -2});
  CHECK(e.runs[0].status == RunStatus::Failed);
  CHECK(e.runs[1].seed == 9u);
  CHECK(e.runs[1].status == RunStatus::ScriptExhausted);
  CHECK(e.differential);

  CHECK_THROWS_AS(parse_corpus_entry("y", "// name: y\nskip"), std::invalid_argument);
  CHECK_THROWS_AS(parse_corpus_entry("y", "// name: y\n// provenance: p\n// expect-verify: 0\n// colour: red\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      parse_corpus_entry("y", "// name: y\n// provenance: p\n// expect-verify: 0\n// expect-run: depth=1 status=ok\n"),
      std::invalid_argument);
}

TEST_CASE("every corpus expectation holds") {
  for (const auto& e : load_corpus(FVF_CORPUS_DIR)) {
    CAPTURE(e.path);
    if (e.expect_verify == 2) {
      CHECK_THROWS_AS(load_program(e.source), ProgramError);
      continue;
    }
    auto program = std::make_shared<const Program>(load_program(e.source));
    auto verdict = svalid_program(program);
    CHECK(verdict.valid == (e.expect_verify == 0));
    if (!e.expect_failure.empty()) {
      std::string first = verdict.main.failure;
      for (const auto& r : verdict.routines)
        if (!r.valid) {
          first = r.failure;
          break;
        }
      CHECK(first.find(e.expect_failure) != std::string::npos);
    }
    for (const auto& run_exp : e.runs) {
      ChoiceScript script = run_exp.choices ? ChoiceScript(*run_exp.choices) : ChoiceScript::random(*run_exp.seed);
      auto r = run(program, run_exp.depth, script);
      CHECK(r.status == run_exp.status);
    }
  }
}

TEST_CASE("differential soundness over the verified corpus") {
  int eligible = 0;
  for (const auto& e : load_corpus(FVF_CORPUS_DIR)) {
    if (!e.differential) continue;
    CAPTURE(e.path);
    auto program = std::make_shared<const Program>(load_program(e.source));
    auto report = differential_soundness(program, 100, 64, 20240611);
    CHECK(report.eligible);
    CHECK(report.trials == 100);
    CHECK(report.ok + report.blocked + report.exhausted + report.failures.size() == 100);
    for (const auto& f : report.failures) FAIL_CHECK("trial " << f.trial << ": " << f.failure);
    ++eligible;
  }
  CHECK(eligible >= 6);
}

TEST_CASE("unverified programs are refused") {
  auto report = differential_soundness(fvf::testing::load_corpus_program("fig15.fvf"), 100, 64, 1);
  CHECK_FALSE(report.eligible);
  CHECK(report.trials == 0);
  CHECK(report.failures.empty());
}

TEST_CASE("reports are deterministic") {
  auto p = fvf::testing::load_corpus_program("reverse.fvf");
  auto a = differential_soundness(p, 50, 64, 3), b = differential_soundness(p, 50, 64, 3);
  CHECK(a.ok == b.ok);
  CHECK(a.blocked == b.blocked);
  CHECK(a.exhausted == b.exhausted);
}

TEST_CASE("a failing script replays to the identical failure") {
  // fig15 is not eligible for the harness, so replay its random runs directly.
  auto p = fvf::testing::load_corpus_program("fig15.fvf");
  int failures = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    auto src = ChoiceScript::random(derive_seed(5, i));
    auto r = run(p, 2, src);
    if (r.status != RunStatus::Failed) continue;
    ++failures;
    ChoiceScript replay(r.script);
    auto again = run(p, 2, replay);
    CHECK(again.status == RunStatus::Failed);
    CHECK(again.failure == r.failure);
    CHECK(again.script == r.script);
  }
  CHECK(failures > 0);
}
