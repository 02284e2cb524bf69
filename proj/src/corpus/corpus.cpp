#include "fvf/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fvf/concrete.hpp"
#include "fvf/symbolic.hpp"

namespace fvf {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

RunStatus parse_status(const std::string& s) {
  for (auto st : {RunStatus::Ok, RunStatus::Failed, RunStatus::Blocked, RunStatus::ScriptExhausted})
    if (to_string(st) == s) return st;
  throw std::invalid_argument("unknown run status '" + s + "'");
}

RunExpectation parse_run(const std::string& value) {
  RunExpectation r;
  bool have_depth = false, have_status = false;
  std::istringstream words(value);
  std::string word;
  while (words >> word) {
    auto eq = word.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected key=value in '" + word + "'");
    std::string k = word.substr(0, eq), v = word.substr(eq + 1);
    if (k == "depth") {
      r.depth = std::stoi(v);
      have_depth = true;
    } else if (k == "choices") {
      r.choices = parse_choice_list(v);
    } else if (k == "seed") {
      r.seed = std::stoull(v);
    } else if (k == "status") {
      r.status = parse_status(v);
      have_status = true;
    } else {
      throw std::invalid_argument("unknown run key '" + k + "'");
    }
  }
  if (!have_depth || !have_status || r.choices.has_value() == r.seed.has_value())
    throw std::invalid_argument("expect-run needs depth, status and one of choices/seed");
  return r;
}

}  // namespace

CorpusEntry parse_corpus_entry(const std::string& path, const std::string& source) {
  CorpusEntry e;
  e.path = path;
  e.source = source;
  bool have_verify = false;
  std::istringstream lines(source);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("//", 0) != 0) break;
    std::string body = trim(line.substr(2));
    auto colon = body.find(':');
    if (colon == std::string::npos) continue;
    std::string key = trim(body.substr(0, colon)), value = trim(body.substr(colon + 1));
    try {
      if (key == "name") e.name = value;
      else if (key == "provenance") e.provenance = value;
      else if (key == "expect-verify") { e.expect_verify = std::stoi(value); have_verify = true; }
      else if (key == "expect-failure") e.expect_failure = value;
      else if (key == "expect-run") e.runs.push_back(parse_run(value));
      else if (key == "differential") e.differential = value == "yes";
      else throw std::invalid_argument("unknown key '" + key + "'");
    } catch (const std::logic_error& err) {
      throw std::invalid_argument(path + ": " + err.what());
    }
  }
  if (e.name.empty() || e.provenance.empty() || !have_verify)
    throw std::invalid_argument(path + ": header needs name, provenance and expect-verify");
  return e;
}

std::vector<CorpusEntry> load_corpus(const std::string& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& f : std::filesystem::directory_iterator(dir))
    if (f.path().extension() == ".fvf") files.push_back(f.path());
  std::sort(files.begin(), files.end());
  std::vector<CorpusEntry> out;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    out.push_back(parse_corpus_entry(f.string(), buf.str()));
  }
  return out;
}

SoundnessReport differential_soundness(std::shared_ptr<const Program> program, std::size_t trials, int depth,
                                       std::uint64_t seed) {
  SoundnessReport report;
  if (!svalid_program(program).valid) return report;
  report.eligible = true;
  report.trials = trials;

  auto erased = std::make_shared<const Program>(erase_annotations(*program));
  std::vector<RunResult> results(trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < trials; i = next++) {
      auto script = ChoiceScript::random(derive_seed(seed, i));
      results[i] = run(erased, depth, script);
    }
  };
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < std::min<std::size_t>(n, trials); ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < trials; ++i) {
    auto& r = results[i];
    switch (r.status) {
      case RunStatus::Ok: ++report.ok; break;
      case RunStatus::Blocked: ++report.blocked; break;
      case RunStatus::ScriptExhausted: ++report.exhausted; break;
      case RunStatus::Failed: report.failures.push_back({i, r.script, r.failure}); break;
    }
  }
  return report;
}

}  // namespace fvf
