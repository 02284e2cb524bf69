#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fvf/concrete.hpp"

namespace fvf {

// Same shape as concrete states; heaps may also hold user predicate chunks.
using SCState = CState;
using SCOutcome = Outcome<SCState, Unit>;

// Executes commands against contracts: calls use pre/postconditions, loops
// use invariants. Pattern values, havoc values and malloc choices are integer
// demonic nodes, resolved by a ChoiceScript.
class SemiconcreteExecutor {
 public:
  explicit SemiconcreteExecutor(std::shared_ptr<const Program> program, ExecOptions options = {});

  SCOutcome produce(const Assertion& a, const SCState& s) const;
  // `step` prefixes failure messages.
  SCOutcome consume(const Assertion& a, const SCState& s, const std::string& step = "consume") const;
  SCOutcome exec(const Command& c, const SCState& s) const;
  SCOutcome leakcheck(const SCState& s) const;

  // Parameter values, pre, body, post, leak check.
  SCOutcome routine_validity(const std::string& routine) const;
  SCOutcome main_safety() const;

 private:
  struct Ctx;
  friend struct SemiconcreteImpl;
  std::shared_ptr<const Ctx> ctx_;
};

struct ScVerdict {
  bool valid = false;
  RunStatus status = RunStatus::Blocked;  // Ok and Blocked both mean valid
  std::string where;                      // routine name or "main"
  std::string failure;
  std::vector<TraceEvent> events;
};

ScVerdict valid_routine(std::shared_ptr<const Program> program, const std::string& routine,
                        ChoiceScript& values, ExecOptions options = {});

// Every routine in declaration order, then main; stops at the first failure.
ScVerdict sc_safe_program(std::shared_ptr<const Program> program, ChoiceScript& values,
                          ExecOptions options = {});

}  // namespace fvf
