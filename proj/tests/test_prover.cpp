#include <filesystem>

#include "doctest.h"
#include "fvf/prover.hpp"
#include "prover_fuzz.hpp"

using namespace fvf;
using namespace fvf::testing;

namespace {

Term S(std::uint32_t i) { return Term::sym(SymbolId{i}); }
Term L(Int v) { return Term::lit(v); }

LinearForm form(Int c, std::map<SymbolId, Int> k) { return LinearForm{c, std::move(k)}; }

Term random_term(std::mt19937_64& rng, int depth) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  switch (depth <= 0 ? pick(0, 1) : pick(0, 3)) {
    case 0: return L(pick(-3, 3));
    case 1: return S(static_cast<std::uint32_t>(pick(0, 2)));
    case 2: return Term::add(random_term(rng, depth - 1), random_term(rng, depth - 1));
    default: return Term::sub(random_term(rng, depth - 1), random_term(rng, depth - 1));
  }
}

// Same value, different shape.
Term reshape(const Term& t, std::mt19937_64& rng) {
  if (const auto* a = std::get_if<Term::Add>(&t.node)) {
    Term l = reshape(*a->lhs, rng), r = reshape(*a->rhs, rng);
    return rng() % 2 ? Term::add(r, l) : Term::add(l, r);
  }
  if (const auto* s = std::get_if<Term::Sub>(&t.node))
    return Term::sub(Term::add(reshape(*s->lhs, rng), L(0)), reshape(*s->rhs, rng));
  return rng() % 3 == 0 ? Term::sub(Term::add(t, L(1)), L(1)) : t;
}

LinearForm combine(const LinearForm& a, const LinearForm& b, Int sign) {
  LinearForm out = a;
  out.constant += sign * b.constant;
  for (const auto& [k, v] : b.coefficients) {
    Int& slot = out.coefficients[k];
    slot += sign * v;
    if (slot == 0) out.coefficients.erase(k);
  }
  return out;
}

}  // namespace

TEST_CASE("normalization examples") {
  CHECK(normalize(Term::add(S(0), L(1))) == form(1, {{SymbolId{0}, 1}}));
  CHECK(normalize(Term::sub(Term::add(S(0), S(0)), S(0))) == form(0, {{SymbolId{0}, 1}}));
  CHECK(normalize(Term::sub(S(1), S(1))) == form(0, {}));
  CHECK_THROWS_AS(normalize(Term::add(L(std::numeric_limits<Int>::max()), L(1))), ArithmeticOverflow);
}

TEST_CASE("normalization agrees with evaluation") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<Int> value(-1000000, 1000000);
  int equal_pairs = 0;
  for (int i = 0; i < 500; ++i) {
    Term a = random_term(rng, 4);
    Term b = rng() % 2 ? reshape(a, rng) : random_term(rng, 4);
    bool same_form = normalize(a) == normalize(b);
    bool all_agree = true;
    for (int j = 0; j < 50; ++j) {
      Int m[3] = {value(rng), value(rng), value(rng)};
      auto model = [&](SymbolId s) { return m[s.value]; };
      if (evaluate(a, model) != evaluate(b, model)) all_agree = false;
    }
    CAPTURE(i);
    CHECK(same_form == all_agree);
    equal_pairs += same_form;
  }
  CHECK(equal_pairs > 100);
}

TEST_CASE("normalization is a congruence") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 500; ++i) {
    Term a = random_term(rng, 3), b = random_term(rng, 3);
    CHECK(normalize(Term::add(a, b)) == combine(normalize(a), normalize(b), 1));
    CHECK(normalize(Term::sub(a, b)) == combine(normalize(a), normalize(b), -1));
  }
}

TEST_CASE("entailment examples") {
  EntailmentProver p;
  Term l = S(0), i = S(1), n = S(2);
  CHECK(p.entails({Formula::lt(L(0), l)}, Formula::negate(Formula::eq(l, L(0)))));
  CHECK(p.entails({}, Formula::eq(Term::add(l, L(1)), Term::add(L(1), l))));
  CHECK_FALSE(p.entails({Formula::negate(Formula::eq(i, n))}, Formula::lt(i, n)));
  CHECK(p.entails({Formula::lt(i, n)}, Formula::negate(Formula::eq(i, n))));
  CHECK_FALSE(p.entails({}, Formula::eq(L(1), L(2))));
  // Contradictory path conditions entail anything.
  CHECK(p.entails({Formula::lt(L(0), l), Formula::eq(l, L(0))}, Formula::eq(L(1), L(2))));
  // Integer reasoning: 2x = 1 has no solution.
  CHECK(p.entails({Formula::eq(Term::add(l, l), L(1))}, Formula::eq(L(1), L(2))));
  // Strict bounds tighten over the integers.
  CHECK(p.entails({Formula::lt(L(0), l), Formula::lt(l, L(2))}, Formula::eq(l, L(1))));
  CHECK(p.entails({Formula::lt(i, n), Formula::lt(n, Term::add(i, L(2)))}, Formula::eq(n, Term::add(i, L(1)))));
  // Disequalities split.
  CHECK(p.entails({Formula::negate(Formula::eq(i, L(0))), Formula::negate(Formula::lt(i, L(0))),
                   Formula::negate(Formula::lt(L(1), i))},
                  Formula::eq(i, L(1))));
}

TEST_CASE("observer sees each query") {
  EntailmentProver p;
  int calls = 0;
  bool last = false;
  p.set_observer([&](const EntailmentQuery&, bool answer) {
    ++calls;
    last = answer;
  });
  p.entails({}, Formula::eq(L(1), L(1)));
  p.entails({}, Formula::eq(L(1), L(2)));
  CHECK(calls == 2);
  CHECK_FALSE(last);
}

TEST_CASE("SMT-LIB export") {
  EntailmentQuery q{{Formula::lt(L(0), S(3))}, Formula::negate(Formula::eq(S(3), L(-2)))};
  std::string text = export_smtlib(q);
  CHECK(text == export_smtlib(q));
  CHECK(text.find("(set-logic QF_LIA)") != std::string::npos);
  CHECK(text.find("(declare-const s3 Int)") != std::string::npos);
  CHECK(text.find("(assert (< 0 s3))") != std::string::npos);
  CHECK(text.find("(- 2)") != std::string::npos);
  CHECK(text.find("(check-sat)") != std::string::npos);

  auto dir = std::filesystem::temp_directory_path() / "fvf-smtlib-test";
  std::filesystem::remove_all(dir);
  EntailmentProver p;
  p.set_observer(smtlib_dumper(dir.string()));
  p.entails(q.pc, q.goal);
  p.entails({}, Formula::eq(L(1), L(2)));
  CHECK(std::filesystem::exists(dir / "query-000001.smt2"));
  CHECK(std::filesystem::exists(dir / "query-000002.smt2"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("external solver agrees on the reference queries") {
  auto z3 = find_z3();
  if (!z3) {
    MESSAGE("no SMT solver found; skipping");
    return;
  }
  EntailmentQuery pos{{Formula::lt(L(0), S(0))}, Formula::negate(Formula::eq(S(0), L(0)))};
  CHECK(run_solver(*z3, export_smtlib(pos)) == "unsat");
  EntailmentQuery neg{{}, Formula::eq(L(1), L(2))};
  CHECK(run_solver(*z3, export_smtlib(neg)) == "sat");
}

TEST_CASE("soundness fuzz against brute-force countermodels") {
  auto r = fuzz_prover(2024, 1000, true);
  CAPTURE(r.first);
  CHECK(r.queries == 1000);
  CHECK(r.proved > 100);
  CHECK(r.violations == 0);
  CHECK(r.solver_violations == 0);
  if (r.solver) CHECK(r.solver_checked == r.proved);
}

TEST_CASE("proved entailments survive consistent additions") {
  std::mt19937_64 rng(77);
  EntailmentProver p;
  int checked = 0;
  for (int i = 0; i < 3000 && checked < 200; ++i) {
    Query q = random_query(rng);
    EntailmentQuery low = lower(q, rng);
    if (!p.entails(low.pc, low.goal)) continue;
    Atom extra = random_atom(rng, kSymbols);
    std::vector<Atom> grown = q.pc;
    grown.push_back(extra);
    bool consistent = !for_all_models([&](const auto& m) { return !pc_holds(grown, m); });
    if (!consistent) continue;
    low.pc.push_back(to_formula(extra, rng));
    CHECK(p.entails(low.pc, low.goal));
    ++checked;
  }
  CHECK(checked >= 100);
}

TEST_CASE("resource limits answer not proved") {
  EntailmentProver tight(EntailmentProver::Limits{0, 2000});
  // Needs one disequality split.
  std::vector<Formula> pc{Formula::negate(Formula::eq(S(0), L(0))), Formula::negate(Formula::lt(S(0), L(0)))};
  CHECK(EntailmentProver().entails(pc, Formula::lt(L(0), S(0))));
  CHECK_FALSE(tight.entails(pc, Formula::lt(L(0), S(0))));
}
