#include "fvf/cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "fvf/concrete.hpp"
#include "fvf/symbolic.hpp"
#include "fvf/syntax.hpp"

namespace fvf::cli {

namespace {

std::shared_ptr<const Program> load(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << path << ": cannot read file\n";
    return nullptr;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return std::make_shared<const Program>(load_program(buf.str()));
  } catch (const ProgramError& e) {
    for (const auto& se : e.errors())
      err << path << ":" << se.loc.line << ":" << se.loc.column << ": " << se.message << "\n";
    return nullptr;
  }
}

std::string event_line(const TraceEvent& e) {
  switch (e.kind) {
    case MessageKind::Trace: return e.text;
    case MessageKind::User: return "message: " + e.text;
    case MessageKind::Failure: return "error: " + e.text;
  }
  return e.text;
}

struct Report {
  std::string name;
  bool valid = false;
  std::vector<std::string> lines;
};

bool holds(const SOutcome& o) {
  return satisfies(o, [](const SState&, const Unit&) { return true; });
}

Report verify_one(const std::shared_ptr<const Program>& program,
                  const std::shared_ptr<const EntailmentProver>& prover, const RoutineDef* routine,
                  bool full_log) {
  auto outcome_of = [&](bool trace) {
    SymbolicExecutor ex(program, prover, SymOptions{trace, false});
    return routine ? ex.routine_validity(routine->name) : ex.main_safety();
  };
  Report r;
  r.name = routine ? routine->name : "main";
  auto o = outcome_of(full_log);
  r.valid = holds(o);
  if (full_log) {
    r.lines = render_tree(o);
  } else if (!r.valid) {
    // Rerun with tracing only for the failing case.
    ChoiceScript none;
    auto res = resolve(outcome_of(true), none);
    for (const auto& e : res.events) r.lines.push_back(event_line(e));
  }
  return r;
}

std::string csv(const std::vector<Int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
  return out;
}

}  // namespace

int cmd_verify(const std::string& path, const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  auto program = load(path, err);
  if (!program) return kExitInput;

  auto prover = std::make_shared<EntailmentProver>();
  unsigned jobs = opts.jobs ? opts.jobs : std::max(1u, std::thread::hardware_concurrency());
  if (opts.smtlib_dir) {
    try {
      prover->set_observer(smtlib_dumper(*opts.smtlib_dir));
    } catch (const std::exception& e) {
      err << *opts.smtlib_dir << ": " << e.what() << "\n";
      return kExitInput;
    }
    jobs = 1;  // keeps query numbering deterministic
  }

  // One task per routine, then main.
  std::vector<const RoutineDef*> tasks;
  for (const auto& r : program->routines) tasks.push_back(&r);
  tasks.push_back(nullptr);
  std::vector<Report> reports(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++)
      reports[i] = verify_one(program, prover, tasks[i], opts.trace);
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < std::min<std::size_t>(jobs, tasks.size()); ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::size_t failed_routines = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const Report& r = reports[i];
    if (i + 1 < reports.size() && !r.valid) ++failed_routines;
    if (opts.trace) {
      out << r.name << ":\n";
      for (const auto& l : r.lines) out << "  " << l << "\n";
      out << "  => " << (r.valid ? "verified" : "failed") << "\n";
    } else if (!r.valid) {
      out << "FAILED " << r.name << "\n";
      for (const auto& l : r.lines) out << "  " << l << "\n";
    }
  }
  const std::size_t n = program->routines.size();
  const bool main_ok = reports.back().valid;
  if (failed_routines == 0 && main_ok) {
    out << "verified: " << n << " routines, main ok\n";
    return kExitOk;
  }
  out << "failed: " << failed_routines << " of " << n << " routines, main " << (main_ok ? "ok" : "failed") << "\n";
  return kExitFailed;
}

int cmd_run(const std::string& path, const RunOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.depth < 0) {
    err << "--depth must be non-negative\n";
    return kExitInput;
  }
  if (opts.choices.has_value() == opts.seed.has_value()) {
    err << "exactly one of --choices and --seed is required\n";
    return kExitInput;
  }
  if (opts.trials && (!opts.seed || *opts.trials < 1)) {
    err << "--trials needs --seed and a positive count\n";
    return kExitInput;
  }
  auto program = load(path, err);
  if (!program) return kExitInput;

  if (opts.trials) {
    std::size_t counts[4] = {0, 0, 0, 0};
    for (int i = 0; i < *opts.trials; ++i) {
      auto script = ChoiceScript::random(derive_seed(*opts.seed, static_cast<std::uint64_t>(i)));
      auto res = run(program, opts.depth, script);
      ++counts[static_cast<int>(res.status)];
      if (res.status == RunStatus::Failed) {
        out << "trial " << i << ": failed: " << res.failure << "\n";
        out << "  replay: --choices \"" << csv(res.script) << "\"\n";
      }
    }
    out << "trials: " << *opts.trials << ", ok: " << counts[0] << ", failed: " << counts[1]
        << ", blocked: " << counts[2] << "\n";
    return counts[1] ? kExitFailed : kExitOk;
  }

  std::optional<ChoiceScript> script;
  if (opts.choices) {
    try {
      script.emplace(parse_choice_list(*opts.choices));
    } catch (const std::invalid_argument& e) {
      err << "--choices: " << e.what() << "\n";
      return kExitInput;
    }
  } else {
    script.emplace(ChoiceScript::random(*opts.seed));
  }
  auto res = run(program, opts.depth, *script, ExecOptions{opts.trace});
  // The failure itself is reported once, on the status line.
  for (const auto& e : res.events) {
    bool show = opts.trace ? e.kind != MessageKind::Failure : e.kind == MessageKind::User;
    if (show) out << event_line(e) << "\n";
  }
  switch (res.status) {
    case RunStatus::Ok:
      out << "ok | " << state_string(*res.final_state) << "\n";
      break;
    case RunStatus::Failed:
      out << "failed: " << res.failure << "\n";
      break;
    default:
      out << to_string(res.status) << "\n";
  }
  return res.status == RunStatus::Failed ? kExitFailed : kExitOk;
}

int cmd_trace(const std::string& path, const std::string& routine, std::ostream& out, std::ostream& err) {
  auto program = load(path, err);
  if (!program) return kExitInput;
  const bool is_main = routine == "main" && !program->find_routine(routine);
  if (!is_main && !program->find_routine(routine)) {
    err << "unknown routine " << routine << "\n";
    return kExitInput;
  }
  SymbolicExecutor ex(program, nullptr, SymOptions{true, false});
  auto o = is_main ? ex.main_safety() : ex.routine_validity(routine);
  for (const auto& l : render_tree(o)) out << l << "\n";
  return holds(o) ? kExitOk : kExitFailed;
}

}  // namespace fvf::cli
