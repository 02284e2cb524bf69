#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fvf/choice.hpp"
#include "fvf/heap.hpp"
#include "fvf/outcome.hpp"
#include "fvf/prover.hpp"
#include "fvf/term.hpp"

namespace fvf {

struct SState {
  // Path condition as an insertion-ordered set. A symbol counts as used once
  // its registration s = s is present.
  std::vector<Formula> pc;
  Store<Term> store;
  Heap<Term> heap;
  // Display names; never affect semantics or equality.
  std::map<SymbolId, std::string> names;

  bool operator==(const SState& o) const;
};

using SChunk = Chunk<Term>;
using SOutcome = Outcome<SState, Unit>;

std::set<SymbolId> used_symbols(const SState& s);
// Least unused symbol, registered and named after `hint` (primed if taken).
std::pair<SState, Term> fresh(const SState& s, const std::string& hint);
// Every symbol in store, heap and pc is registered.
bool well_formed(const SState& s);

Term seval(const Store<Term>& s, const Expr& e);
Formula seval_bool(const Store<Term>& s, const BoolExpr& b);

std::string term_string(const SState& s, const Term& t);
std::string formula_string(const SState& s, const Formula& f);
// "Phi:{i, n, i != n} | s:{i:i, n:n} | h:{[...]}"
std::string sstate_string(const SState& s);

struct SymOptions {
  bool trace = false;
  // Throw std::logic_error if a step produces an ill-formed state.
  bool check_invariants = false;
};

class SymbolicExecutor {
 public:
  SymbolicExecutor(std::shared_ptr<const Program> program,
                   std::shared_ptr<const EntailmentProver> prover = nullptr, SymOptions options = {});

  SOutcome sassume(const SState& s, const Formula& f) const;
  SOutcome sassert(const SState& s, const Formula& f, const std::string& step = "assert") const;
  // First chunk (canonical order) whose first |fixed| arguments are provably
  // equal to `fixed`; removed, and its remaining arguments answered.
  Outcome<SState, std::vector<Term>> sconsume_chunk(const SState& s, const Pred& pred,
                                                    const std::vector<Term>& fixed,
                                                    std::size_t n_unfixed,
                                                    const std::string& step = "consume") const;
  SOutcome sproduce(const Assertion& a, const SState& s) const;
  SOutcome sconsume(const Assertion& a, const SState& s, const std::string& step = "consume") const;
  SOutcome symexec(const Command& c, const SState& s) const;
  SOutcome sleakcheck(const SState& s) const;

  SOutcome routine_validity(const std::string& routine) const;
  SOutcome main_safety() const;

 private:
  struct Ctx;
  friend struct SymbolicImpl;
  std::shared_ptr<const Ctx> ctx_;
};

struct SymVerdict {
  bool valid = false;
  std::string where;                // routine name or "main"
  std::string failure;              // first failure message, if any
  std::vector<TraceEvent> path;     // messages along the first failing path
};

struct ProgramVerdict {
  bool valid = false;
  std::vector<SymVerdict> routines;  // declaration order
  SymVerdict main;
};

SymVerdict svalid_routine(std::shared_ptr<const Program> program, const std::string& routine,
                          std::shared_ptr<const EntailmentProver> prover = nullptr,
                          SymOptions options = {});
SymVerdict svalid_main(std::shared_ptr<const Program> program,
                       std::shared_ptr<const EntailmentProver> prover = nullptr,
                       SymOptions options = {});
ProgramVerdict svalid_program(std::shared_ptr<const Program> program,
                              std::shared_ptr<const EntailmentProver> prover = nullptr,
                              SymOptions options = {});

// Every message of a finitary outcome, depth first. Where both branches of a
// choice say something they are labelled and indented.
std::vector<std::string> render_tree(const SOutcome& o);

}  // namespace fvf
