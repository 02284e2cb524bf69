#include <functional>

#include "doctest.h"
#include "fvf/symbolic.hpp"
#include "fvf/syntax.hpp"
#include "support.hpp"
#include "trace_match.hpp"

using namespace fvf;
using fvf::testing::load_corpus_program;
using fvf::testing::load_source;

namespace {

Term S(std::uint32_t i) { return Term::sym(SymbolId{i}); }
Term L(Int v) { return Term::lit(v); }

// A state with `n` registered symbols named after `names`.
SState with_symbols(std::initializer_list<const char*> names) {
  SState s;
  for (const char* n : names) s = fresh(s, n).first;
  return s;
}

bool holds(const SOutcome& o) {
  return satisfies(o, [](const SState&, const Unit&) { return true; });
}

const std::shared_ptr<const Program>& list_program() {
  static auto p = load_corpus_program("range.fvf");
  return p;
}

std::vector<std::string> all_corpus_files() {
  return {"range_dispose.fvf", "range.fvf", "swap.fvf", "reverse.fvf", "fig2.fvf", "fig15.fvf", "recurse.fvf",
          "countdown.fvf", "leak.fvf", "false_assert.fvf", "swap_wrongpost.fvf", "reverse_noinv.fvf",
          "range_dispose_noclose.fvf"};
}

std::vector<SOutcome> all_outcomes(const std::shared_ptr<const Program>& p, SymOptions opts) {
  SymbolicExecutor ex(p, nullptr, opts);
  std::vector<SOutcome> out;
  for (const auto& r : p->routines) out.push_back(ex.routine_validity(r.name));
  out.push_back(ex.main_safety());
  return out;
}

// Visits every node reachable through boolean choices.
void walk(const SOutcome& o, const std::function<void(const SOutcome&)>& f) {
  f(o);
  if (o.is_message()) return walk(o.rest(), f);
  if (o.is_choice() && o.domain() == IndexDomain::Bool) {
    walk(o.branch(true), f);
    walk(o.branch(false), f);
  }
}

std::set<std::string> pc_entries(const std::string& line) {
  std::set<std::string> out;
  if (auto st = fvf::testing::parse_printed_state(line)) {
    out.insert(st->symbols.begin(), st->symbols.end());
    out.insert(st->formulas.begin(), st->formulas.end());
  }
  return out;
}

// Along every path, each traced path condition contains the previous one.
bool pc_grows(const SOutcome& o, const std::set<std::string>& before) {
  if (o.is_message()) {
    std::set<std::string> now = before;
    if (o.message_kind() == MessageKind::Trace && o.text().find("\xCE\xA6:{") != std::string::npos) {
      now = pc_entries(o.text());
      if (!std::includes(now.begin(), now.end(), before.begin(), before.end())) return false;
    }
    return pc_grows(o.rest(), now);
  }
  if (o.is_choice() && o.domain() == IndexDomain::Bool)
    return pc_grows(o.branch(true), before) && pc_grows(o.branch(false), before);
  return true;
}

}  // namespace

TEST_CASE("symbolic evaluation") {
  Store<Term> st;
  st.set("l", S(0));
  CHECK(seval(st, parse_expr("l + 1")) == Term::add(S(0), L(1)));
  st.set("i", S(1));
  st.set("n", S(2));
  CHECK(seval_bool(st, parse_bool_expr("!(i = n)")) == Formula::negate(Formula::eq(S(1), S(2))));
  CHECK(seval({}, parse_expr("x")) == L(0));
}

TEST_CASE("fresh symbols") {
  SState s;
  s.pc.push_back(registration(SymbolId{0}));
  auto [s2, t] = fresh(s, "x");
  CHECK(t == S(1));
  CHECK(s2.pc == std::vector<Formula>{registration(SymbolId{0}), registration(SymbolId{1})});
  auto [s3, u] = fresh(s2, "x");
  CHECK(u == S(2));
  CHECK(u != t);
  CHECK(s3.names.at(SymbolId{1}) == "x");
  CHECK(s3.names.at(SymbolId{2}) == "x'");
  CHECK(well_formed(s3));

  SState bad;
  bad.store.set("x", S(4));
  CHECK_FALSE(well_formed(bad));
}

TEST_CASE("producing the precondition introduces one fresh symbol") {
  SymbolicExecutor ex(list_program());
  SState s = with_symbols({"i", "n", "r"});
  s.store.set("i", S(0));
  s.store.set("n", S(1));
  s.store.set("r", S(2));
  auto o = ex.sproduce(parse_assertion("r |-> ?dummy"), s);
  REQUIRE(o.is_single());
  const SState& out = o.state();
  CHECK(used_symbols(out) == std::set<SymbolId>{{0}, {1}, {2}, {3}});
  CHECK(out.store.get("dummy") == S(3));
  CHECK(sstate_string(out) == "\xCE\xA6:{i, n, r, dummy} | s:{dummy:dummy, i:i, n:n, r:r} | h:{[r |-> dummy]}");
}

TEST_CASE("assuming") {
  SymbolicExecutor ex(list_program());
  SState l = with_symbols({"l"});
  l.pc.push_back(Formula::lt(L(0), S(0)));
  CHECK(is_block(ex.sassume(l, Formula::eq(S(0), L(0)))));

  SState in = with_symbols({"i", "n"});
  auto o = ex.sassume(in, Formula::negate(Formula::eq(S(0), S(1))));
  REQUIRE(o.is_single());
  CHECK(o.state().pc.size() == 3);
  CHECK(o.state().pc.back() == Formula::negate(Formula::eq(S(0), S(1))));

  auto t = ex.sassume(in, Formula::eq(L(0), L(0)));
  REQUIRE(t.is_single());
  CHECK(t.state().pc.size() == 3);
}

TEST_CASE("asserting") {
  SymbolicExecutor ex(list_program());
  SState in = with_symbols({"i", "n"});
  SState lt = in;
  lt.pc.push_back(Formula::lt(S(0), S(1)));
  auto ok = ex.sassert(lt, Formula::negate(Formula::eq(S(0), S(1))));
  REQUIRE(ok.is_single());
  CHECK(ok.state() == lt);

  CHECK(is_fail(ex.sassert(SState{}, Formula::eq(L(1), L(2)))));
  SState ne = in;
  ne.pc.push_back(Formula::negate(Formula::eq(S(0), S(1))));
  auto bad = ex.sassert(ne, Formula::lt(S(0), S(1)), "check");
  CHECK(is_fail(bad));
  ChoiceScript none;
  CHECK(resolve(bad, none).failure().rfind("check: cannot prove i < n", 0) == 0);
}

TEST_CASE("consuming chunks up to provable equality") {
  SymbolicExecutor ex(list_program());
  SState s = with_symbols({"l", "l"});
  s.pc.push_back(Formula::eq(S(0), S(1)));
  s.heap.add({Pred::user("list"), {S(0)}});
  auto o = ex.sconsume_chunk(s, Pred::user("list"), {S(1)}, 0);
  REQUIRE(o.is_single());
  CHECK(o.state().heap.empty());

  CHECK(is_fail(ex.sconsume_chunk(SState{}, Pred::points_to(), {L(0)}, 1)));

  // The four chunks after allocation: l + 1 |-> v' is found and v' answered.
  SState m = with_symbols({"r", "d", "l", "v", "v"});
  m.heap.add({Pred::points_to(), {S(0), S(1)}});
  m.heap.add({Pred::malloc_block(), {S(2), L(2)}});
  m.heap.add({Pred::points_to(), {S(2), S(3)}});
  m.heap.add({Pred::points_to(), {Term::add(S(2), L(1)), S(4)}});
  m.pc.push_back(Formula::lt(L(0), S(2)));
  auto c = ex.sconsume_chunk(m, Pred::points_to(), {Term::add(S(2), L(1))}, 1);
  REQUIRE(c.is_single());
  CHECK(c.answer() == std::vector<Term>{S(4)});
  CHECK(c.state().heap.size() == 3);
}

TEST_CASE("consuming assertions") {
  SymbolicExecutor ex(list_program());
  SState fin = with_symbols({"r", "l"});
  fin.store.set("r", S(0));
  fin.heap.add({Pred::points_to(), {S(0), S(1)}});
  fin.heap.add({Pred::user("list"), {S(1)}});
  auto o = ex.sconsume(parse_assertion("r |-> ?list * list(list)"), fin);
  REQUIRE(o.is_single());
  CHECK(o.state().heap.empty());
  CHECK(o.state().store.get("list") == S(1));

  CHECK(holds(ex.sconsume(parse_assertion("if 0 = 0 then 0 = 0 else 1 = 2"), SState{})));
  CHECK_FALSE(holds(ex.sconsume(parse_assertion("if 0 = 0 then 1 = 2 else 0 = 0"), SState{})));
}

TEST_CASE("closing the list after the recursive call") {
  SymbolicExecutor ex(list_program());
  SState s = with_symbols({"i", "n", "r", "d", "l", "v", "v", "l"});
  s.store.set("i", S(0));
  s.store.set("n", S(1));
  s.store.set("r", S(2));
  s.store.set("l", S(4));
  s.pc.push_back(Formula::negate(Formula::eq(S(0), S(1))));
  s.pc.push_back(Formula::lt(L(0), S(4)));
  s.heap.add({Pred::points_to(), {S(2), S(3)}});
  s.heap.add({Pred::malloc_block(), {S(4), L(2)}});
  s.heap.add({Pred::points_to(), {S(4), S(0)}});
  s.heap.add({Pred::points_to(), {Term::add(S(4), L(1)), S(7)}});
  s.heap.add({Pred::user("list"), {S(7)}});
  ChoiceScript none;
  auto r = resolve(ex.symexec(parse_command("close list(l); [r] := l"), s), none);
  REQUIRE(r.status == RunStatus::Ok);
  Heap<Term> expect;
  expect.add({Pred::points_to(), {S(2), S(4)}});
  expect.add({Pred::user("list"), {S(4)}});
  CHECK(r.state->heap == expect);

  auto skip = ex.symexec(parse_command("skip"), s);
  REQUIRE(skip.is_single());
  CHECK(skip.state() == s);
}

TEST_CASE("the list-building routine's trace matches the reference states") {
  SymbolicExecutor ex(list_program(), nullptr, SymOptions{true, true});
  auto lines = render_tree(ex.routine_validity("range"));
  std::string why;
  auto points = fvf::testing::range_checkpoints();
  CHECK_MESSAGE(fvf::testing::match_checkpoints(lines, points, &why) == points.size(), why);
}

TEST_CASE("routine verdicts") {
  CHECK(svalid_routine(list_program(), "range").valid);
  auto rev = load_corpus_program("reverse.fvf");
  for (const auto& r : rev->routines) CHECK(svalid_routine(rev, r.name).valid);
  auto noclose = svalid_routine(load_corpus_program("range_dispose_noclose.fvf"), "range");
  CHECK_FALSE(noclose.valid);
  CHECK(noclose.failure.rfind("postcondition: no chunk matching list(", 0) == 0);
  CHECK_FALSE(noclose.path.empty());
  CHECK(svalid_program(load_corpus_program("range_dispose.fvf")).valid);
  CHECK(svalid_program(load_corpus_program("swap.fvf")).valid);
  auto fig15 = svalid_program(load_corpus_program("fig15.fvf"));
  CHECK_FALSE(fig15.valid);
  CHECK_FALSE(fig15.main.valid);
  CHECK(fig15.main.failure.find("no chunk matching 42 |-> _") != std::string::npos);
}

TEST_CASE("free needs a literal block size") {
  auto p = load_source(R"(
    routine f(x) req mb(x, ?n) ens 0 = 0 = free(x)
    skip)");
  auto v = svalid_routine(p, "f");
  CHECK_FALSE(v.valid);
  CHECK(v.failure.find("is not a literal") != std::string::npos);
}

TEST_CASE("loops use their invariant") {
  auto ok = load_source(R"(
    routine down(i)
      req 0 < i + 1
      ens 0 = 0
    = while 0 < i inv 0 < i + 1 do i := i - 1
    skip)");
  CHECK(svalid_routine(ok, "down").valid);
  auto weak = load_source(R"(
    routine down(i)
      req 0 = 0
      ens 0 = 0
    = while 0 < i inv 0 < i + 1 do i := i - 1
    skip)");
  auto v = svalid_routine(weak, "down");
  CHECK_FALSE(v.valid);
  CHECK(v.failure.rfind("loop invariant on entry", 0) == 0);
}

TEST_CASE("returned values") {
  auto p = load_source(R"(
    routine inc(x) req 0 = 0 ens result = x + 1 = result := x + 1
    routine two() req 0 = 0 ens result = 2 = result := inc(1)
    y := two())");
  CHECK(svalid_program(p).valid);
  auto wrong = load_source(R"(
    routine inc(x) req 0 = 0 ens result = x + 1 = result := x + 1
    routine three() req 0 = 0 ens result = 3 = result := inc(1)
    skip)");
  CHECK_FALSE(svalid_routine(wrong, "three").valid);
}

TEST_CASE("every corpus step keeps states well formed") {
  for (const auto& f : all_corpus_files()) {
    CAPTURE(f);
    auto p = load_corpus_program(f);
    CHECK_NOTHROW(svalid_program(p, nullptr, SymOptions{false, true}));
  }
}

TEST_CASE("symbolic outcomes only use blocking, failure and binary choice") {
  for (const auto& f : all_corpus_files()) {
    CAPTURE(f);
    for (const auto& o : all_outcomes(load_corpus_program(f), {})) {
      int bad = 0;
      walk(o, [&](const SOutcome& n) {
        if (n.is_choice() && n.domain() != IndexDomain::Empty && n.domain() != IndexDomain::Bool) ++bad;
      });
      CHECK(bad == 0);
      CHECK_NOTHROW(satisfies(o, [](const SState&, const Unit&) { return true; }));
    }
  }
}

TEST_CASE("path conditions only grow along a path") {
  for (const auto& f : all_corpus_files()) {
    CAPTURE(f);
    for (const auto& o : all_outcomes(load_corpus_program(f), SymOptions{true, false})) CHECK(pc_grows(o, {}));
  }
}

TEST_CASE("verification is deterministic") {
  for (const auto& f : all_corpus_files()) {
    CAPTURE(f);
    auto p = load_corpus_program(f);
    auto a = all_outcomes(p, SymOptions{true, false});
    auto b = all_outcomes(p, SymOptions{true, false});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(render_tree(a[i]) == render_tree(b[i]));
    auto va = svalid_program(p), vb = svalid_program(p);
    CHECK(va.valid == vb.valid);
    CHECK(va.main.failure == vb.main.failure);
  }
}

TEST_CASE("tree rendering labels branches that both speak") {
  auto o = SOutcome::demonic2(SOutcome::message(MessageKind::Trace, "a", SOutcome::top()),
                              SOutcome::message(MessageKind::User, "b", SOutcome::fail("c")));
  CHECK(render_tree(o) == std::vector<std::string>{"-- branch 1", "  a", "-- branch 2", "  message: b", "  error: c"});
  auto one = SOutcome::demonic2(SOutcome::top(), SOutcome::message(MessageKind::Trace, "only", SOutcome::top()));
  CHECK(render_tree(one) == std::vector<std::string>{"only"});
}
