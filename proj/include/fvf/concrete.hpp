#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fvf/choice.hpp"
#include "fvf/heap.hpp"
#include "fvf/outcome.hpp"

namespace fvf {

struct CState {
  Store<Int> store;
  Heap<Int> heap;
  bool operator==(const CState&) const = default;
};

using CChunk = Chunk<Int>;
using COutcome = Outcome<CState, Unit>;

Int eval(const Store<Int>& s, const Expr& e);
bool eval_bool(const Store<Int>& s, const BoolExpr& b);

// "s: {x:1} | h: {[...]}"
std::string state_string(const CState& s);
std::string chunk_string(const CChunk& c);

// Least chunk (canonical order) of this predicate and arity whose first
// |fixed| arguments equal `fixed`.
std::optional<Heap<Int>::const_iterator> find_chunk(const Heap<Int>& h, const Pred& pred,
                                                    const std::vector<Int>& fixed,
                                                    std::size_t arity);

// "42 |-> _", "mb(7, _)": what a failed lookup was looking for.
std::string describe_wanted(const Pred& pred, const std::vector<std::string>& fixed,
                            std::size_t n_unfixed);

// Least chunk with this predicate whose first |fixed| arguments equal `fixed`;
// it is removed and its remaining arguments are answered. No match: bottom.
Outcome<CState, std::vector<Int>> cconsume_chunk(const CState& s, const Pred& pred,
                                                 const std::vector<Int>& fixed,
                                                 std::size_t n_unfixed);

// Adds chunks unless one of them shares a domain element p(address) with the
// heap or with another new chunk, in which case the result is top.
COutcome cproduce_chunks(const CState& s, const std::vector<CChunk>& chunks);

struct ExecOptions {
  bool trace = false;  // emit one Trace message per step
};

// Depth-bounded concrete execution. Outcomes keep the program alive.
class ConcreteExecutor {
 public:
  explicit ConcreteExecutor(std::shared_ptr<const Program> program, ExecOptions options = {});

  COutcome exec(const Command& c, int depth, const CState& s) const;
  COutcome exec_main(int depth) const;

 private:
  struct Ctx;
  friend struct ConcreteImpl;
  std::shared_ptr<const Ctx> ctx_;
};

struct RunResult {
  RunStatus status = RunStatus::Blocked;
  std::optional<CState> final_state;
  std::vector<TraceEvent> events;
  std::string failure;
  std::vector<Int> script;  // every value consumed, for replay
};

RunResult run(std::shared_ptr<const Program> program, int depth, ChoiceScript& script,
              ExecOptions options = {});

// Strips everything the concrete semantics ignores: contracts and invariants
// become "0 = 0", open/close become skip.
Program erase_annotations(const Program& p);

}  // namespace fvf
