#pragma once

#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fvf/prover.hpp"

// Random linear entailment queries with a brute-force countermodel search as
// the oracle, and an optional external SMT solver.
namespace fvf::testing {

constexpr int kSymbols = 4;
constexpr Int kSearch = 6;

// constant + sum coefficient[i] * symbol i
struct Linear {
  Int constant = 0;
  std::array<Int, kSymbols> coeff{};

  Int at(const std::array<Int, kSymbols>& m) const {
    Int v = constant;
    for (int i = 0; i < kSymbols; ++i) v += coeff[i] * m[i];
    return v;
  }
};

struct Atom {
  enum class Op { Eq, Lt, NotEq, NotLt } op = Op::Eq;
  Linear lhs, rhs;

  bool at(const std::array<Int, kSymbols>& m) const {
    Int a = lhs.at(m), b = rhs.at(m);
    switch (op) {
      case Op::Eq: return a == b;
      case Op::Lt: return a < b;
      case Op::NotEq: return a != b;
      case Op::NotLt: return !(a < b);
    }
    return false;
  }
};

struct Query {
  std::vector<Atom> pc;
  Atom goal;
};

// Terms spell out coefficients as repeated additions, shuffled so the
// prover sees varied shapes.
inline Term to_term(const Linear& l, std::mt19937_64& rng) {
  std::vector<std::pair<bool, Term>> parts;  // (negative, piece)
  for (int i = 0; i < kSymbols; ++i)
    for (Int k = 0; k < std::abs(l.coeff[i]); ++k)
      parts.push_back({l.coeff[i] < 0, Term::sym(SymbolId{static_cast<std::uint32_t>(i)})});
  if (l.constant != 0 || parts.empty()) parts.push_back({false, Term::lit(l.constant)});
  std::shuffle(parts.begin(), parts.end(), rng);
  Term t = parts[0].first ? Term::sub(Term::lit(0), parts[0].second) : parts[0].second;
  for (std::size_t i = 1; i < parts.size(); ++i)
    t = parts[i].first ? Term::sub(t, parts[i].second) : Term::add(t, parts[i].second);
  return t;
}

inline Formula to_formula(const Atom& a, std::mt19937_64& rng) {
  Term l = to_term(a.lhs, rng), r = to_term(a.rhs, rng);
  switch (a.op) {
    case Atom::Op::Eq: return Formula::eq(l, r);
    case Atom::Op::Lt: return Formula::lt(l, r);
    case Atom::Op::NotEq: return Formula::negate(Formula::eq(l, r));
    case Atom::Op::NotLt: return Formula::negate(Formula::lt(l, r));
  }
  return Formula::eq(l, r);
}

inline Linear random_linear(std::mt19937_64& rng, int symbols) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Linear l;
  l.constant = pick(-4, 4);
  for (int i = 0; i < symbols; ++i)
    if (pick(0, 2) == 0) l.coeff[i] = pick(-3, 3);
  return l;
}

inline Atom random_atom(std::mt19937_64& rng, int symbols) {
  Atom a;
  a.op = static_cast<Atom::Op>(std::uniform_int_distribution<int>(0, 3)(rng));
  a.lhs = random_linear(rng, symbols);
  a.rhs = random_linear(rng, symbols);
  return a;
}

inline Query random_query(std::mt19937_64& rng) {
  int symbols = std::uniform_int_distribution<int>(1, kSymbols)(rng);
  Query q;
  for (int n = std::uniform_int_distribution<int>(0, 5)(rng); n > 0; --n) q.pc.push_back(random_atom(rng, symbols));
  q.goal = random_atom(rng, symbols);
  return q;
}

template <class F>
bool for_all_models(F f) {
  std::array<Int, kSymbols> m{};
  for (m[0] = -kSearch; m[0] <= kSearch; ++m[0])
    for (m[1] = -kSearch; m[1] <= kSearch; ++m[1])
      for (m[2] = -kSearch; m[2] <= kSearch; ++m[2])
        for (m[3] = -kSearch; m[3] <= kSearch; ++m[3])
          if (!f(m)) return false;
  return true;
}

inline bool pc_holds(const std::vector<Atom>& pc, const std::array<Int, kSymbols>& m) {
  for (const auto& a : pc)
    if (!a.at(m)) return false;
  return true;
}

// No assignment in the search box satisfies pc and violates the goal.
inline bool no_countermodel(const Query& q) {
  return for_all_models([&](const auto& m) { return !pc_holds(q.pc, m) || q.goal.at(m); });
}

inline EntailmentQuery lower(const Query& q, std::mt19937_64& rng) {
  EntailmentQuery out{{}, to_formula(q.goal, rng)};
  for (const auto& a : q.pc) out.pc.push_back(to_formula(a, rng));
  return out;
}

inline std::optional<std::string> find_z3() {
  for (const char* p : {"/usr/local/bin/z3", "/usr/bin/z3"})
    if (std::filesystem::exists(p)) return std::string(p);
  return std::nullopt;
}

// "sat", "unsat" or "unknown" from the external solver.
inline std::string run_solver(const std::string& solver, const std::string& script) {
  auto dir = std::filesystem::temp_directory_path();
  auto file = dir / ("fvf-query-" + std::to_string(::getpid()) + ".smt2");
  {
    std::ofstream out(file);
    out << script;
  }
  std::string cmd = solver + " -smt2 " + file.string() + " 2>&1";
  std::string answer;
  if (FILE* pipe = ::popen(cmd.c_str(), "r")) {
    char buf[256];
    while (std::fgets(buf, sizeof buf, pipe)) answer += buf;
    ::pclose(pipe);
  }
  std::filesystem::remove(file);
  while (!answer.empty() && (answer.back() == '\n' || answer.back() == '\r')) answer.pop_back();
  return answer;
}

struct ProverFuzzReport {
  int queries = 0, proved = 0, violations = 0, solver_checked = 0, solver_violations = 0;
  bool solver = false;
  std::string first;
};

inline ProverFuzzReport fuzz_prover(std::uint64_t seed, int queries, bool use_solver) {
  std::mt19937_64 rng(seed);
  EntailmentProver prover;
  ProverFuzzReport r;
  auto solver = use_solver ? find_z3() : std::nullopt;
  r.solver = solver.has_value();
  for (int i = 0; i < queries; ++i) {
    Query q = random_query(rng);
    EntailmentQuery lowered = lower(q, rng);
    ++r.queries;
    if (!prover.entails(lowered.pc, lowered.goal)) continue;
    ++r.proved;
    if (!no_countermodel(q)) {
      if (r.violations++ == 0) r.first = export_smtlib(lowered);
    }
    if (solver) {
      ++r.solver_checked;
      if (run_solver(*solver, export_smtlib(lowered)) != "unsat") {
        if (r.solver_violations++ == 0 && r.first.empty()) r.first = export_smtlib(lowered);
      }
    }
  }
  return r;
}

}  // namespace fvf::testing
