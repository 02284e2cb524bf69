#include "fvf/symbolic.hpp"

#include <algorithm>
#include <stdexcept>

#include "fvf/concrete.hpp"
#include "fvf/syntax.hpp"

namespace fvf {

bool SState::operator==(const SState& o) const {
  auto as_set = [](const std::vector<Formula>& v) { return std::set<Formula>(v.begin(), v.end()); };
  return store == o.store && heap == o.heap && as_set(pc) == as_set(o.pc);
}

std::set<SymbolId> used_symbols(const SState& s) {
  std::set<SymbolId> out;
  for (const auto& f : s.pc)
    if (auto id = registered_symbol(f)) out.insert(*id);
  return out;
}

std::pair<SState, Term> fresh(const SState& s, const std::string& hint) {
  auto used = used_symbols(s);
  SymbolId id{0};
  while (used.count(id)) ++id.value;

  std::set<std::string> taken;
  for (const auto& [k, v] : s.names) taken.insert(v);
  std::string name = hint.empty() ? "s" : hint;
  while (taken.count(name)) name += "'";

  SState out = s;
  out.pc.push_back(registration(id));
  out.names[id] = std::move(name);
  return {std::move(out), Term::sym(id)};
}

bool well_formed(const SState& s) {
  std::set<SymbolId> seen;
  for (const auto& [x, t] : s.store.entries()) collect_symbols(t, seen);
  for (const auto& c : s.heap)
    for (const auto& t : c.args) collect_symbols(t, seen);
  for (const auto& f : s.pc) collect_symbols(f, seen);
  auto used = used_symbols(s);
  return std::includes(used.begin(), used.end(), seen.begin(), seen.end());
}

Term seval(const Store<Term>& s, const Expr& e) {
  return std::visit(Overloaded{
                        [](const Expr::Lit& l) { return Term::lit(l.value); },
                        [&](const Expr::Var& v) { return s.get(v.name); },
                        [&](const Expr::Add& a) { return Term::add(seval(s, *a.lhs), seval(s, *a.rhs)); },
                        [&](const Expr::Sub& a) { return Term::sub(seval(s, *a.lhs), seval(s, *a.rhs)); },
                    },
                    e.node);
}

Formula seval_bool(const Store<Term>& s, const BoolExpr& b) {
  return std::visit(Overloaded{
                        [&](const BoolExpr::Eq& e) { return Formula::eq(seval(s, e.lhs), seval(s, e.rhs)); },
                        [&](const BoolExpr::Lt& e) { return Formula::lt(seval(s, e.lhs), seval(s, e.rhs)); },
                        [&](const BoolExpr::Not& n) { return Formula::negate(seval_bool(s, *n.operand)); },
                    },
                    b.node);
}

namespace {

SymbolNamer namer(const SState& s) {
  return [&s](SymbolId id) {
    auto it = s.names.find(id);
    return it != s.names.end() ? it->second : "s" + std::to_string(id.value);
  };
}

}  // namespace

std::string term_string(const SState& s, const Term& t) { return to_string(t, namer(s)); }
std::string formula_string(const SState& s, const Formula& f) { return to_string(f, namer(s)); }

std::string sstate_string(const SState& s) {
  auto name = namer(s);
  std::vector<std::string> items;
  for (SymbolId id : used_symbols(s)) items.push_back(name(id));
  for (const auto& f : s.pc)
    if (!registered_symbol(f)) items.push_back(to_string(f, name));
  std::string phi = "\xCE\xA6:{";  // U+03A6
  for (std::size_t i = 0; i < items.size(); ++i) phi += (i ? ", " : "") + items[i];
  phi += "}";
  auto show = [&](const Term& t) { return to_string(t, name); };
  return phi + " | s:" + store_string(s.store, show, ", ") + " | h:" + heap_string(s.heap, show);
}

struct SymbolicExecutor::Ctx {
  std::shared_ptr<const Program> program;
  std::shared_ptr<const EntailmentProver> prover;
  SymOptions options;
};

struct SymbolicImpl {
  using CtxP = std::shared_ptr<const SymbolicExecutor::Ctx>;
  using O = SOutcome;
  using OT = Outcome<SState, std::vector<Term>>;

  static void check(const CtxP& ctx, const SState& s) {
    if (ctx->options.check_invariants && !well_formed(s))
      throw std::logic_error("ill-formed symbolic state: " + sstate_string(s));
  }

  static O step(const CtxP& ctx, const std::string& text, SState s) {
    check(ctx, s);
    if (!ctx->options.trace) return O::single(std::move(s));
    std::string line = text + " | " + sstate_string(s);
    return O::message(MessageKind::Trace, std::move(line), O::single(std::move(s)));
  }

  static O failure(const std::string& step, const std::string& reason, const SState& s) {
    return O::fail(step + ": " + reason + " | " + sstate_string(s));
  }

  static bool provably_equal(const CtxP& ctx, const SState& s, const Term& a, const Term& b) {
    if (a == b) return true;
    try {
      if (normalize(a) == normalize(b)) return true;
    } catch (const ArithmeticOverflow&) {
    }
    return ctx->prover->entails(s.pc, Formula::eq(a, b));
  }

  static O sassume(const CtxP& ctx, const SState& s, const Formula& f) {
    if (ctx->prover->entails(s.pc, Formula::negate(f))) return O::top();
    SState out = s;
    if (std::find(out.pc.begin(), out.pc.end(), f) == out.pc.end()) out.pc.push_back(f);
    check(ctx, out);
    return O::single(std::move(out));
  }

  static O sassert(const CtxP& ctx, const SState& s, const Formula& f, const std::string& step) {
    if (ctx->prover->entails(s.pc, f)) return O::single(s);
    return failure(step, "cannot prove " + formula_string(s, f), s);
  }

  static OT sconsume_chunk(const CtxP& ctx, const SState& s, const Pred& pred, const std::vector<Term>& fixed,
                           std::size_t n_unfixed, const std::string& step) {
    const std::size_t arity = fixed.size() + n_unfixed;
    for (auto it = s.heap.begin(); it != s.heap.end(); ++it) {
      if (!(it->pred == pred) || it->args.size() != arity) continue;
      bool match = true;
      for (std::size_t k = 0; k < fixed.size() && match; ++k)
        match = provably_equal(ctx, s, it->args[k], fixed[k]);
      if (!match) continue;
      std::vector<Term> rest(it->args.begin() + static_cast<std::ptrdiff_t>(fixed.size()), it->args.end());
      SState out = s;
      // Same position in the copy: canonical order is deterministic.
      auto pos = out.heap.begin();
      std::advance(pos, std::distance(s.heap.begin(), it));
      out.heap.erase(pos);
      return OT::single(std::move(out), std::move(rest));
    }
    std::vector<std::string> shown;
    for (const auto& t : fixed) shown.push_back(term_string(s, t));
    return OT::fail(step + ": no chunk matching " + describe_wanted(pred, shown, n_unfixed) + " | " +
                    sstate_string(s));
  }

  static std::vector<Term> seval_all(const Store<Term>& s, const std::vector<Expr>& es) {
    std::vector<Term> out;
    for (const auto& e : es) out.push_back(seval(s, e));
    return out;
  }

  static Store<Term> param_store(const std::vector<std::string>& params, const std::vector<Term>& vals) {
    Store<Term> st;
    for (std::size_t i = 0; i < params.size(); ++i) st.set(params[i], vals[i]);
    return st;
  }

  // Runs f with `inner` as the store and restores the outer store afterwards.
  template <class F>
  static O with_store(Store<Term> inner, const SState& s, F f) {
    Store<Term> outer = s.store;
    SState in = s;
    in.store = std::move(inner);
    return fvf::bind(f(in), [outer](Unit, const SState& s2) {
      SState out = s2;
      out.store = outer;
      return O::single(std::move(out));
    });
  }

  static O split(const CtxP& ctx, const SState& s, const Formula& f, std::function<O(const SState&)> yes,
                 std::function<O(const SState&)> no) {
    return O::demonic(IndexDomain::Bool, [ctx, s, f, yes, no](const IndexValue& i) {
      if (std::get<bool>(i))
        return fvf::bind(sassume(ctx, s, f), [yes](Unit, const SState& s2) { return yes(s2); });
      return fvf::bind(sassume(ctx, s, Formula::negate(f)), [no](Unit, const SState& s2) { return no(s2); });
    });
  }

  static O sproduce(const CtxP& ctx, const Box<Assertion>& a, const SState& s) {
    return std::visit(
        Overloaded{
            [&](const Assertion::Fact& f) { return sassume(ctx, s, seval_bool(s.store, f.cond)); },
            [&](const Assertion::Chunk& ch) {
              SState out = s;
              auto args = seval_all(s.store, ch.args);
              for (const auto& p : ch.patterns) {
                auto [next, t] = fresh(out, p);
                out = std::move(next);
                out.store.set(p, t);
                args.push_back(t);
              }
              out.heap.add({ch.pred, std::move(args)});
              check(ctx, out);
              return O::single(std::move(out));
            },
            [&](const Assertion::Star& st) {
              Box<Assertion> rhs = st.rhs;
              return fvf::bind(sproduce(ctx, st.lhs, s), [ctx, rhs](Unit, const SState& s2) { return sproduce(ctx, rhs, s2); });
            },
            [&](const Assertion::Cond& c) {
              Box<Assertion> then_a = c.then_branch, else_a = c.else_branch;
              return split(
                  ctx, s, seval_bool(s.store, c.cond), [ctx, then_a](const SState& s2) { return sproduce(ctx, then_a, s2); },
                  [ctx, else_a](const SState& s2) { return sproduce(ctx, else_a, s2); });
            },
        },
        a->node);
  }

  static O sconsume(const CtxP& ctx, const Box<Assertion>& a, const SState& s, const std::string& step) {
    return std::visit(
        Overloaded{
            [&](const Assertion::Fact& f) { return sassert(ctx, s, seval_bool(s.store, f.cond), step); },
            [&](const Assertion::Chunk& ch) {
              auto patterns = ch.patterns;
              return fvf::bind(sconsume_chunk(ctx, s, ch.pred, seval_all(s.store, ch.args), patterns.size(), step),
                          [patterns](const std::vector<Term>& rest, const SState& s2) {
                            SState out = s2;
                            for (std::size_t k = 0; k < patterns.size(); ++k) out.store.set(patterns[k], rest[k]);
                            return O::single(std::move(out));
                          });
            },
            [&](const Assertion::Star& st) {
              Box<Assertion> rhs = st.rhs;
              return fvf::bind(sconsume(ctx, st.lhs, s, step),
                          [ctx, rhs, step](Unit, const SState& s2) { return sconsume(ctx, rhs, s2, step); });
            },
            [&](const Assertion::Cond& c) {
              Box<Assertion> then_a = c.then_branch, else_a = c.else_branch;
              return split(
                  ctx, s, seval_bool(s.store, c.cond),
                  [ctx, then_a, step](const SState& s2) { return sconsume(ctx, then_a, s2, step); },
                  [ctx, else_a, step](const SState& s2) { return sconsume(ctx, else_a, s2, step); });
            },
        },
        a->node);
  }

  static O sleakcheck(const SState& s, const std::string& step) {
    if (s.heap.empty()) return O::top();
    auto show = [&](const Term& t) { return term_string(s, t); };
    return failure(step, "leaked " + heap_string(s.heap, show), s);
  }

  static SState havoc(const std::vector<std::string>& vars, SState s) {
    for (const auto& x : vars) {
      auto [next, t] = fresh(s, x);
      s = std::move(next);
      s.store.set(x, t);
    }
    return s;
  }

  static Term offset(const Term& base, Int k) { return k == 0 ? base : Term::add(base, Term::lit(k)); }

  static bool mentions_result(const Assertion& a) { return free_vars(a).count(kResultVar) > 0; }

  static const PredicateDef& predicate(const CtxP& ctx, const Pred& p) {
    const PredicateDef* d = ctx->program->find_predicate(p.name());
    if (!d) throw std::logic_error("undeclared predicate " + p.name());
    return *d;
  }

  // Consumes the points-to chunk at `address`; answers its value.
  static OT cell(const CtxP& ctx, const SState& s, const Term& address, const std::string& step) {
    return sconsume_chunk(ctx, s, Pred::points_to(), {address}, 1, step);
  }

  static O free_cells(const CtxP& ctx, const SState& s, Term base, Int next, Int size, std::string text) {
    if (next == size) return step(ctx, text, s);
    return fvf::bind(cell(ctx, s, offset(base, next), text), [=](const std::vector<Term>&, const SState& s2) {
      return free_cells(ctx, s2, base, next + 1, size, text);
    });
  }

  static O exec(const CtxP& ctx, const Box<Command>& cmd, const SState& s) {
    const Command& c = *cmd;
    const bool compound = std::holds_alternative<Command::Seq>(c.node) ||
                          std::holds_alternative<Command::If>(c.node) ||
                          std::holds_alternative<Command::While>(c.node);
    const std::string text = compound ? std::string() : to_string(c);
    return std::visit(
        Overloaded{
            [&](const Command::Assign& a) {
              SState out = s;
              out.store.set(a.var, seval(s.store, a.value));
              return step(ctx, text, std::move(out));
            },
            [&](const Command::Seq& q) {
              Box<Command> second = q.second;
              return fvf::bind(exec(ctx, q.first, s), [ctx, second](Unit, const SState& s2) { return exec(ctx, second, s2); });
            },
            [&](const Command::If& g) {
              Box<Command> then_c = g.then_branch, else_c = g.else_branch;
              std::string yes = "assume " + to_string(g.cond);
              std::string no = "assume " + to_string(BoolExpr::negate(g.cond));
              return split(
                  ctx, s, seval_bool(s.store, g.cond),
                  [ctx, then_c, yes](const SState& s2) {
                    return fvf::bind(step(ctx, yes, s2), [ctx, then_c](Unit, const SState& s3) { return exec(ctx, then_c, s3); });
                  },
                  [ctx, else_c, no](const SState& s2) {
                    return fvf::bind(step(ctx, no, s2), [ctx, else_c](Unit, const SState& s3) { return exec(ctx, else_c, s3); });
                  });
            },
            [&](const Command::While& w) {
              Box<Assertion> inv = w.invariant;
              Box<Command> body = w.body;
              BoolExpr cond = w.cond;
              std::string enter = "enter loop body: assume " + to_string(w.cond);
              std::string leave = "exit loop: assume " + to_string(BoolExpr::negate(w.cond));
              auto ts = targets(*w.body);
              std::vector<std::string> vars(ts.begin(), ts.end());
              auto entry = with_store(s.store, s, [&](const SState& st) {
                return sconsume(ctx, inv, st, "loop invariant on entry");
              });
              return fvf::bind(entry, [=](Unit, const SState& s1) {
                SState s2 = havoc(vars, s1);
                return O::demonic(IndexDomain::Bool, [=](const IndexValue& i) {
                  if (std::get<bool>(i)) {
                    SState empty = s2;
                    empty.heap.clear();
                    auto o = with_store(s2.store, empty, [&](const SState& st) { return sproduce(ctx, inv, st); });
                    return fvf::bind(o, [=](Unit, const SState& s3) {
                      auto assumed = fvf::bind(sassume(ctx, s3, seval_bool(s3.store, cond)),
                                          [=](Unit, const SState& s4) { return step(ctx, enter, s4); });
                      return fvf::bind(assumed, [=](Unit, const SState& s4) {
                        return fvf::bind(exec(ctx, body, s4), [=](Unit, const SState& s5) {
                          auto back = with_store(s5.store, s5, [&](const SState& st) {
                            return sconsume(ctx, inv, st, "loop invariant after body");
                          });
                          return fvf::bind(back, [](Unit, const SState& s6) {
                            return sleakcheck(s6, "leak check after loop body");
                          });
                        });
                      });
                    });
                  }
                  auto o = with_store(s2.store, s2, [&](const SState& st) { return sproduce(ctx, inv, st); });
                  return fvf::bind(o, [=](Unit, const SState& s3) {
                    return fvf::bind(sassume(ctx, s3, Formula::negate(seval_bool(s3.store, cond))),
                                [=](Unit, const SState& s4) { return step(ctx, leave, s4); });
                  });
                });
              });
            },
            [&](const Command::Call& call) {
              const RoutineDef* r = ctx->program->find_routine(call.routine);
              if (!r || r->params.size() != call.args.size())
                throw std::logic_error("call to undeclared routine " + call.routine);
              Store<Term> callee = param_store(r->params, seval_all(s.store, call.args));
              Store<Term> caller = s.store;
              Box<Assertion> pre = r->pre, post = r->post;
              bool need_result = call.result_var.has_value() || mentions_result(r->post);
              SState in = s;
              in.store = callee;
              auto consumed = sconsume(ctx, pre, in, "precondition of " + call.routine);
              auto produced = fvf::bind(consumed, [ctx, post, need_result](Unit, const SState& s1) -> O {
                if (!need_result) return sproduce(ctx, post, s1);
                auto [s2, t] = fresh(s1, kResultVar);
                s2.store.set(kResultVar, t);
                return sproduce(ctx, post, s2);
              });
              return fvf::bind(produced, [ctx, cmd, caller, text](Unit, const SState& s3) {
                const auto& k = std::get<Command::Call>(cmd->node);
                SState back = s3;
                back.store = caller;
                if (k.result_var) back.store.set(*k.result_var, s3.store.get(kResultVar));
                return step(ctx, text, std::move(back));
              });
            },
            [&](const Command::Malloc& m) {
              auto [s1, base] = fresh(s, m.var);
              std::vector<Term> values;
              for (Int k = 0; k < m.size; ++k) {
                auto [next, v] = fresh(s1, "v");
                s1 = std::move(next);
                values.push_back(v);
              }
              std::string var = m.var;
              Int size = m.size;
              return fvf::bind(sassume(ctx, s1, Formula::lt(Term::lit(0), base)),
                          [ctx, base, values, var, size, text](Unit, const SState& s2) {
                            SState out = s2;
                            out.heap.add({Pred::malloc_block(), {base, Term::lit(size)}});
                            for (Int k = 0; k < size; ++k)
                              out.heap.add({Pred::points_to(), {offset(base, k), values[static_cast<std::size_t>(k)]}});
                            out.store.set(var, base);
                            return step(ctx, text, std::move(out));
                          });
            },
            [&](const Command::Read& r) {
              Term address = seval(s.store, r.address);
              std::string var = r.var;
              return fvf::bind(cell(ctx, s, address, text), [=](const std::vector<Term>& v, const SState& s2) {
                SState out = s2;
                out.heap.add({Pred::points_to(), {address, v[0]}});
                out.store.set(var, v[0]);
                return step(ctx, text, std::move(out));
              });
            },
            [&](const Command::Write& w) {
              Term address = seval(s.store, w.address);
              Term value = seval(s.store, w.value);
              return fvf::bind(cell(ctx, s, address, text), [=](const std::vector<Term>&, const SState& s2) {
                SState out = s2;
                out.heap.add({Pred::points_to(), {address, value}});
                return step(ctx, text, std::move(out));
              });
            },
            [&](const Command::Free& f) {
              Term address = seval(s.store, f.address);
              return fvf::bind(sconsume_chunk(ctx, s, Pred::malloc_block(), {address}, 1, text),
                          [=](const std::vector<Term>& size, const SState& s2) {
                            const auto* lit = std::get_if<Term::Lit>(&size[0].node);
                            if (!lit) return failure(text, "block size " + term_string(s2, size[0]) + " is not a literal", s2);
                            return free_cells(ctx, s2, address, 0, lit->value, text);
                          });
            },
            [&](const Command::Open& op) {
              const PredicateDef& d = predicate(ctx, op.pred);
              Box<Assertion> body = d.body;
              std::vector<std::string> params = d.params;
              auto fixed = seval_all(s.store, op.args);
              return fvf::bind(sconsume_chunk(ctx, s, op.pred, fixed, op.wildcards, text),
                          [=](const std::vector<Term>& rest, const SState& s2) {
                            auto args = fixed;
                            args.insert(args.end(), rest.begin(), rest.end());
                            auto o = with_store(param_store(params, args), s2,
                                                [&](const SState& st) { return sproduce(ctx, body, st); });
                            return fvf::bind(o, [ctx, text](Unit, const SState& s3) { return step(ctx, text, s3); });
                          });
            },
            [&](const Command::Close& cl) {
              const PredicateDef& d = predicate(ctx, cl.pred);
              auto args = seval_all(s.store, cl.args);
              Box<Assertion> body = d.body;
              auto o = with_store(param_store(d.params, args), s,
                                  [&](const SState& st) { return sconsume(ctx, body, st, text); });
              return fvf::bind(o, [ctx, text, args, pred = cl.pred](Unit, const SState& s2) {
                SState out = s2;
                out.heap.add({pred, args});
                return step(ctx, text, std::move(out));
              });
            },
            [&](const Command::Message& m) { return O::message(MessageKind::User, m.text, step(ctx, text, s)); },
            [&](const Command::Skip&) { return step(ctx, text, s); },
        },
        c.node);
  }

  static O routine_validity(const CtxP& ctx, const RoutineDef* r) {
    SState s;
    for (const auto& p : r->params) {
      auto [next, t] = fresh(s, p);
      s = std::move(next);
      s.store.set(p, t);
    }
    Store<Term> params = s.store;
    Box<Assertion> pre = r->pre, post = r->post;
    std::string pre_text = "produce " + to_string(r->pre);
    std::string post_text = "consume " + to_string(r->post);
    return fvf::bind(sproduce(ctx, pre, s), [=](Unit, const SState& s1) {
      Store<Term> saved = s1.store;
      SState entry = s1;
      entry.store = params;
      auto body = fvf::bind(step(ctx, pre_text, entry), [ctx, r](Unit, const SState& s2) { return exec(ctx, r->body, s2); });
      return fvf::bind(body, [=](Unit, const SState& s3) {
        SState at_post = s3;
        at_post.store = saved;
        at_post.store.set(kResultVar, s3.store.get(kResultVar));
        return fvf::bind(sconsume(ctx, post, at_post, "postcondition"), [=](Unit, const SState& s4) {
          SState out = s4;
          out.store = s3.store;
          return fvf::bind(step(ctx, post_text, std::move(out)),
                      [](Unit, const SState& s5) { return sleakcheck(s5, "leak check"); });
        });
      });
    });
  }
};

SymbolicExecutor::SymbolicExecutor(std::shared_ptr<const Program> program,
                                   std::shared_ptr<const EntailmentProver> prover, SymOptions options) {
  if (!prover) prover = std::make_shared<const EntailmentProver>();
  ctx_ = std::make_shared<const Ctx>(Ctx{std::move(program), std::move(prover), options});
}

SOutcome SymbolicExecutor::sassume(const SState& s, const Formula& f) const { return SymbolicImpl::sassume(ctx_, s, f); }

SOutcome SymbolicExecutor::sassert(const SState& s, const Formula& f, const std::string& step) const {
  return SymbolicImpl::sassert(ctx_, s, f, step);
}

Outcome<SState, std::vector<Term>> SymbolicExecutor::sconsume_chunk(const SState& s, const Pred& pred,
                                                                    const std::vector<Term>& fixed,
                                                                    std::size_t n_unfixed,
                                                                    const std::string& step) const {
  return SymbolicImpl::sconsume_chunk(ctx_, s, pred, fixed, n_unfixed, step);
}

SOutcome SymbolicExecutor::sproduce(const Assertion& a, const SState& s) const {
  return SymbolicImpl::sproduce(ctx_, a, s);
}

SOutcome SymbolicExecutor::sconsume(const Assertion& a, const SState& s, const std::string& step) const {
  return SymbolicImpl::sconsume(ctx_, a, s, step);
}

SOutcome SymbolicExecutor::symexec(const Command& c, const SState& s) const { return SymbolicImpl::exec(ctx_, c, s); }

SOutcome SymbolicExecutor::sleakcheck(const SState& s) const { return SymbolicImpl::sleakcheck(s, "leak check"); }

SOutcome SymbolicExecutor::routine_validity(const std::string& routine) const {
  const RoutineDef* r = ctx_->program->find_routine(routine);
  if (!r) throw std::invalid_argument("unknown routine " + routine);
  return SymbolicImpl::routine_validity(ctx_, r);
}

SOutcome SymbolicExecutor::main_safety() const { return SymbolicImpl::exec(ctx_, ctx_->program->main, SState{}); }

namespace {

SymVerdict verdict_of(const SOutcome& o, std::string where) {
  SymVerdict v;
  v.where = std::move(where);
  v.valid = satisfies(o, [](const SState&, const Unit&) { return true; });
  if (!v.valid) {
    ChoiceScript none;
    auto res = resolve(o, none);
    v.failure = res.failure();
    v.path = std::move(res.events);
  }
  return v;
}

}  // namespace

SymVerdict svalid_routine(std::shared_ptr<const Program> program, const std::string& routine,
                          std::shared_ptr<const EntailmentProver> prover, SymOptions options) {
  SymbolicExecutor ex(std::move(program), std::move(prover), options);
  return verdict_of(ex.routine_validity(routine), routine);
}

SymVerdict svalid_main(std::shared_ptr<const Program> program, std::shared_ptr<const EntailmentProver> prover,
                       SymOptions options) {
  SymbolicExecutor ex(std::move(program), std::move(prover), options);
  return verdict_of(ex.main_safety(), "main");
}

ProgramVerdict svalid_program(std::shared_ptr<const Program> program, std::shared_ptr<const EntailmentProver> prover,
                              SymOptions options) {
  if (!prover) prover = std::make_shared<const EntailmentProver>();
  ProgramVerdict pv;
  pv.valid = true;
  for (const auto& r : program->routines) {
    pv.routines.push_back(svalid_routine(program, r.name, prover, options));
    pv.valid = pv.valid && pv.routines.back().valid;
  }
  pv.main = svalid_main(program, prover, options);
  pv.valid = pv.valid && pv.main.valid;
  return pv;
}

std::vector<std::string> render_tree(const SOutcome& o) {
  std::vector<std::string> out;
  const SOutcome* cur = &o;
  while (cur->is_message()) {
    switch (cur->message_kind()) {
      case MessageKind::Trace: out.push_back(cur->text()); break;
      case MessageKind::User: out.push_back("message: " + cur->text()); break;
      case MessageKind::Failure: out.push_back("error: " + cur->text()); break;
    }
    cur = &cur->rest();
  }
  if (!cur->is_choice() || cur->domain() == IndexDomain::Empty) return out;
  if (cur->domain() != IndexDomain::Bool) throw NonFinitaryOutcome();
  auto a = render_tree(cur->branch(true));
  auto b = render_tree(cur->branch(false));
  if (a.empty() || b.empty()) {
    const auto& only = a.empty() ? b : a;
    out.insert(out.end(), only.begin(), only.end());
    return out;
  }
  int k = 1;
  for (const auto* lines : {&a, &b}) {
    out.push_back("-- branch " + std::to_string(k++));
    for (const auto& l : *lines) out.push_back("  " + l);
  }
  return out;
}

}  // namespace fvf
