#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fvf/term.hpp"

namespace fvf {

// constant + sum of coefficient * symbol, with no zero coefficients.
struct LinearForm {
  Int constant = 0;
  std::map<SymbolId, Int> coefficients;

  bool operator==(const LinearForm&) const = default;
  auto operator<=>(const LinearForm&) const = default;
};

// Throws ArithmeticOverflow if a coefficient leaves the 64-bit range.
LinearForm normalize(const Term& t);

struct EntailmentQuery {
  std::vector<Formula> pc;
  Formula goal;
};

// Sound, incomplete decision procedure for linear integer entailment.
// Decides pc |- goal by refuting pc and not goal: equalities are substituted
// away, disequalities split into two strict cases, and the remaining
// inequalities go through Fourier-Motzkin elimination with integer
// tightening. Any resource limit or overflow answers "not proved".
class EntailmentProver {
 public:
  struct Limits {
    int max_splits = 8;
    std::size_t max_constraints = 2000;
  };
  // Called after every query with the answer. May be called concurrently
  // when the prover is shared between threads.
  using Observer = std::function<void(const EntailmentQuery&, bool)>;

  EntailmentProver() = default;
  explicit EntailmentProver(Limits limits) : limits_(limits) {}

  bool entails(const std::vector<Formula>& pc, const Formula& goal) const;
  void set_observer(Observer o) { observer_ = std::move(o); }

 private:
  bool decide(const std::vector<Formula>& pc, const Formula& goal) const;
  Limits limits_;
  Observer observer_;
};

// SMT-LIB2 script that is unsat exactly when the entailment holds.
std::string export_smtlib(const EntailmentQuery& q);

// Observer that writes every query to dir/query-000001.smt2 and onwards.
EntailmentProver::Observer smtlib_dumper(const std::string& dir);

}  // namespace fvf
