#include "fvf/semiconcrete.hpp"

#include <limits>
#include <stdexcept>

#include "fvf/syntax.hpp"

namespace fvf {

struct SemiconcreteExecutor::Ctx {
  std::shared_ptr<const Program> program;
  ExecOptions options;
};

struct SemiconcreteImpl {
  using CtxP = std::shared_ptr<const SemiconcreteExecutor::Ctx>;
  using O = SCOutcome;

  static O step(const CtxP& ctx, const std::string& text, SCState s) {
    if (!ctx->options.trace) return O::single(std::move(s));
    std::string line = text + " | " + state_string(s);
    return O::message(MessageKind::Trace, std::move(line), O::single(std::move(s)));
  }

  static O failure(const std::string& step, const std::string& reason, const SCState& s) {
    return O::fail(step + ": " + reason + " | " + state_string(s));
  }

  static std::vector<Int> eval_all(const Store<Int>& s, const std::vector<Expr>& es) {
    std::vector<Int> out;
    for (const auto& e : es) out.push_back(eval(s, e));
    return out;
  }

  static Store<Int> param_store(const std::vector<std::string>& params, const std::vector<Int>& vals) {
    Store<Int> st;
    for (std::size_t i = 0; i < params.size(); ++i) st.set(params[i], vals[i]);
    return st;
  }

  // Runs f on (inner, heap) and restores the outer store afterwards.
  template <class F>
  static O with_store(Store<Int> inner, const SCState& s, F f) {
    Store<Int> outer = s.store;
    return bind(f(SCState{std::move(inner), s.heap}),
                [outer](Unit, const SCState& s2) { return O::single(SCState{outer, s2.heap}); });
  }

  // Chooses one integer per remaining pattern, then adds the chunk.
  static O produce_patterns(const Assertion::Chunk& ch, std::vector<Int> args, std::size_t next,
                            const SCState& s) {
    if (next == ch.patterns.size()) {
      SCState out = s;
      out.heap.add({ch.pred, std::move(args)});
      return O::single(std::move(out));
    }
    return O::demonic(
        IndexDomain::Int,
        [ch, args, next, s](const IndexValue& i) {
          Int v = std::get<Int>(i);
          SCState s2 = s;
          s2.store.set(ch.patterns[next], v);
          auto more = args;
          more.push_back(v);
          return produce_patterns(ch, std::move(more), next + 1, s2);
        },
        ChoiceTag::Value);
  }

  static O produce(const CtxP& ctx, const Box<Assertion>& a, const SCState& s) {
    return std::visit(
        Overloaded{
            [&](const Assertion::Fact& f) { return eval_bool(s.store, f.cond) ? O::single(s) : O::top(); },
            [&](const Assertion::Chunk& ch) { return produce_patterns(ch, eval_all(s.store, ch.args), 0, s); },
            [&](const Assertion::Star& st) {
              Box<Assertion> rhs = st.rhs;
              return bind(produce(ctx, st.lhs, s),
                          [ctx, rhs](Unit, const SCState& s2) { return produce(ctx, rhs, s2); });
            },
            [&](const Assertion::Cond&) {
              return O::demonic(IndexDomain::Bool, [ctx, a, s](const IndexValue& i) {
                const auto& c = std::get<Assertion::Cond>(a->node);
                bool take = std::get<bool>(i);
                if (eval_bool(s.store, c.cond) != take) return O::top();
                return produce(ctx, take ? c.then_branch : c.else_branch, s);
              });
            },
        },
        a->node);
  }

  static O consume(const CtxP& ctx, const Box<Assertion>& a, const SCState& s, const std::string& step) {
    return std::visit(
        Overloaded{
            [&](const Assertion::Fact& f) {
              if (eval_bool(s.store, f.cond)) return O::single(s);
              return failure(step, "cannot establish " + to_string(f.cond), s);
            },
            [&](const Assertion::Chunk& ch) {
              auto fixed = eval_all(s.store, ch.args);
              auto it = find_chunk(s.heap, ch.pred, fixed, fixed.size() + ch.patterns.size());
              if (!it) {
                std::vector<std::string> shown;
                for (Int v : fixed) shown.push_back(std::to_string(v));
                return failure(step, "no chunk matching " + describe_wanted(ch.pred, shown, ch.patterns.size()), s);
              }
              SCState out = s;
              for (std::size_t k = 0; k < ch.patterns.size(); ++k)
                out.store.set(ch.patterns[k], (*it)->args[fixed.size() + k]);
              out.heap.erase(*find_chunk(out.heap, ch.pred, fixed, fixed.size() + ch.patterns.size()));
              return O::single(std::move(out));
            },
            [&](const Assertion::Star& st) {
              Box<Assertion> rhs = st.rhs;
              return bind(consume(ctx, st.lhs, s, step), [ctx, rhs, step](Unit, const SCState& s2) {
                return consume(ctx, rhs, s2, step);
              });
            },
            [&](const Assertion::Cond&) {
              return O::demonic(IndexDomain::Bool, [ctx, a, s, step](const IndexValue& i) {
                const auto& c = std::get<Assertion::Cond>(a->node);
                bool take = std::get<bool>(i);
                if (eval_bool(s.store, c.cond) != take) return O::top();
                return consume(ctx, take ? c.then_branch : c.else_branch, s, step);
              });
            },
        },
        a->node);
  }

  static O leakcheck(const SCState& s, const std::string& step) {
    if (s.heap.empty()) return O::top();
    return failure(step, "leaked " + heap_string(s.heap, [](Int v) { return std::to_string(v); }), s);
  }

  static O havoc(std::vector<std::string> vars, std::size_t next, const SCState& s) {
    if (next == vars.size()) return O::single(s);
    return O::demonic(
        IndexDomain::Int,
        [vars, next, s](const IndexValue& i) {
          SCState s2 = s;
          s2.store.set(vars[next], std::get<Int>(i));
          return havoc(vars, next + 1, s2);
        },
        ChoiceTag::Value);
  }

  static O malloc_cells(const CtxP& ctx, const Box<Command>& cmd, Int addr, std::vector<Int> values,
                        const SCState& s) {
    const auto& m = std::get<Command::Malloc>(cmd->node);
    if (static_cast<Int>(values.size()) == m.size) {
      SCState out = s;
      out.heap.add({Pred::malloc_block(), {addr, m.size}});
      for (std::size_t i = 0; i < values.size(); ++i)
        out.heap.add({Pred::points_to(), {checked_add(addr, static_cast<Int>(i)), values[i]}});
      out.store.set(m.var, addr);
      return step(ctx, to_string(*cmd), std::move(out));
    }
    return O::demonic(
        IndexDomain::Int,
        [ctx, cmd, addr, values, s](const IndexValue& i) {
          auto next = values;
          next.push_back(std::get<Int>(i));
          return malloc_cells(ctx, cmd, addr, std::move(next), s);
        },
        ChoiceTag::Value);
  }

  static bool mentions_result(const Assertion& a) { return free_vars(a).count(kResultVar) > 0; }

  static const PredicateDef& predicate(const CtxP& ctx, const Pred& p) {
    const PredicateDef* d = ctx->program->find_predicate(p.name());
    if (!d) throw std::logic_error("undeclared predicate " + p.name());
    return *d;
  }

  static O exec(const CtxP& ctx, const Box<Command>& cmd, const SCState& s) {
    const Command& c = *cmd;
    // Compound commands are never printed as a whole.
    const bool compound = std::holds_alternative<Command::Seq>(c.node) ||
                          std::holds_alternative<Command::If>(c.node) ||
                          std::holds_alternative<Command::While>(c.node);
    const std::string text = compound ? std::string() : to_string(c);
    return std::visit(
        Overloaded{
            [&](const Command::Assign& a) {
              SCState out = s;
              out.store.set(a.var, eval(s.store, a.value));
              return step(ctx, text, std::move(out));
            },
            [&](const Command::Seq& q) {
              Box<Command> second = q.second;
              return bind(exec(ctx, q.first, s),
                          [ctx, second](Unit, const SCState& s2) { return exec(ctx, second, s2); });
            },
            [&](const Command::If&) {
              return O::demonic(IndexDomain::Bool, [ctx, cmd, s](const IndexValue& i) {
                const auto& g = std::get<Command::If>(cmd->node);
                bool take = std::get<bool>(i);
                if (eval_bool(s.store, g.cond) != take) return O::top();
                return exec(ctx, take ? g.then_branch : g.else_branch, s);
              });
            },
            [&](const Command::While& w) {
              Box<Assertion> inv = w.invariant;
              std::string inv_text = to_string(w.invariant);
              auto entry = with_store(s.store, s, [&](const SCState& st) {
                return consume(ctx, inv, st, "loop invariant on entry");
              });
              auto targets_sorted = targets(*w.body);
              std::vector<std::string> vars(targets_sorted.begin(), targets_sorted.end());
              return bind(entry, [ctx, cmd, inv, inv_text, vars](Unit, const SCState& s1) {
                return bind(havoc(vars, 0, s1), [ctx, cmd, inv, inv_text](Unit, const SCState& s2) {
                  return O::demonic(IndexDomain::Bool, [ctx, cmd, inv, inv_text, s2](const IndexValue& i) {
                    if (std::get<bool>(i)) {
                      SCState fresh{s2.store, {}};
                      auto o = with_store(s2.store, fresh, [&](const SCState& st) { return produce(ctx, inv, st); });
                      return bind(o, [ctx, cmd, inv](Unit, const SCState& s3) {
                        const auto& wl2 = std::get<Command::While>(cmd->node);
                        if (!eval_bool(s3.store, wl2.cond)) return O::top();
                        return bind(exec(ctx, wl2.body, s3), [ctx, inv](Unit, const SCState& s4) {
                          auto o2 = with_store(s4.store, s4, [&](const SCState& st) {
                            return consume(ctx, inv, st, "loop invariant after body");
                          });
                          return bind(o2, [](Unit, const SCState& s5) {
                            return leakcheck(s5, "leak check after loop body");
                          });
                        });
                      });
                    }
                    auto o = with_store(s2.store, s2, [&](const SCState& st) { return produce(ctx, inv, st); });
                    return bind(o, [ctx, cmd, inv_text](Unit, const SCState& s3) {
                      const auto& wl2 = std::get<Command::While>(cmd->node);
                      if (eval_bool(s3.store, wl2.cond)) return O::top();
                      return step(ctx, "exit loop (" + inv_text + ")", s3);
                    });
                  });
                });
              });
            },
            [&](const Command::Call& call) {
              const RoutineDef* r = ctx->program->find_routine(call.routine);
              if (!r || r->params.size() != call.args.size())
                throw std::logic_error("call to undeclared routine " + call.routine);
              Store<Int> callee = param_store(r->params, eval_all(s.store, call.args));
              Store<Int> caller = s.store;
              Box<Assertion> pre = r->pre, post = r->post;
              bool need_result = call.result_var.has_value() || mentions_result(r->post);
              auto consumed = consume(ctx, pre, SCState{callee, s.heap}, "precondition of " + call.routine);
              auto produced = bind(consumed, [ctx, post, need_result](Unit, const SCState& s1) -> O {
                if (!need_result) return produce(ctx, post, s1);
                return O::demonic(
                    IndexDomain::Int,
                    [ctx, post, s1](const IndexValue& i) {
                      SCState s2 = s1;
                      s2.store.set(kResultVar, std::get<Int>(i));
                      return produce(ctx, post, s2);
                    },
                    ChoiceTag::Value);
              });
              return bind(produced, [ctx, cmd, caller, text](Unit, const SCState& s3) {
                const auto& k = std::get<Command::Call>(cmd->node);
                SCState back{caller, s3.heap};
                if (k.result_var) back.store.set(*k.result_var, s3.store.get(kResultVar));
                return step(ctx, text, std::move(back));
              });
            },
            [&](const Command::Malloc& m) {
              return O::demonic(
                  IndexDomain::Int,
                  [ctx, cmd, s, n = m.size](const IndexValue& i) {
                    Int addr = std::get<Int>(i);
                    if (addr <= 0 || addr > std::numeric_limits<Int>::max() - n) return O::top();
                    return malloc_cells(ctx, cmd, addr, {}, s);
                  },
                  ChoiceTag::Address);
            },
            [&](const Command::Read& r) {
              Int addr = eval(s.store, r.address);
              auto it = find_chunk(s.heap, Pred::points_to(), {addr}, 2);
              if (!it)
                return failure(text, "no chunk matching " + describe_wanted(Pred::points_to(), {std::to_string(addr)}, 1), s);
              SCState out = s;
              out.store.set(r.var, (*it)->args[1]);
              return step(ctx, text, std::move(out));
            },
            [&](const Command::Write& w) {
              Int addr = eval(s.store, w.address);
              Int value = eval(s.store, w.value);
              auto it = find_chunk(s.heap, Pred::points_to(), {addr}, 2);
              if (!it)
                return failure(text, "no chunk matching " + describe_wanted(Pred::points_to(), {std::to_string(addr)}, 1), s);
              SCState out = s;
              out.heap.erase(*find_chunk(out.heap, Pred::points_to(), {addr}, 2));
              out.heap.add({Pred::points_to(), {addr, value}});
              return step(ctx, text, std::move(out));
            },
            [&](const Command::Free& f) {
              Int addr = eval(s.store, f.address);
              SCState out = s;
              auto block = find_chunk(out.heap, Pred::malloc_block(), {addr}, 2);
              if (!block)
                return failure(text, "no chunk matching " + describe_wanted(Pred::malloc_block(), {std::to_string(addr)}, 1), s);
              Int size = (*block)->args[1];
              out.heap.erase(*block);
              for (Int k = 0; k < size; ++k) {
                Int cell = checked_add(addr, k);
                auto it = find_chunk(out.heap, Pred::points_to(), {cell}, 2);
                if (!it)
                  return failure(text, "no chunk matching " + describe_wanted(Pred::points_to(), {std::to_string(cell)}, 1), s);
                out.heap.erase(*it);
              }
              return step(ctx, text, std::move(out));
            },
            [&](const Command::Open& op) {
              const PredicateDef& d = predicate(ctx, op.pred);
              auto fixed = eval_all(s.store, op.args);
              auto it = find_chunk(s.heap, op.pred, fixed, fixed.size() + op.wildcards);
              if (!it) {
                std::vector<std::string> shown;
                for (Int v : fixed) shown.push_back(std::to_string(v));
                return failure(text, "no chunk matching " + describe_wanted(op.pred, shown, op.wildcards), s);
              }
              std::vector<Int> args = (*it)->args;
              SCState out = s;
              out.heap.erase(*find_chunk(out.heap, op.pred, fixed, fixed.size() + op.wildcards));
              Box<Assertion> body = d.body;
              auto o = with_store(param_store(d.params, args), out,
                                  [&](const SCState& st) { return produce(ctx, body, st); });
              return bind(o, [ctx, text](Unit, const SCState& s2) { return step(ctx, text, s2); });
            },
            [&](const Command::Close& cl) {
              const PredicateDef& d = predicate(ctx, cl.pred);
              auto args = eval_all(s.store, cl.args);
              Box<Assertion> body = d.body;
              auto o = with_store(param_store(d.params, args), s,
                                  [&](const SCState& st) { return consume(ctx, body, st, text); });
              return bind(o, [ctx, text, args, pred = cl.pred](Unit, const SCState& s2) {
                SCState out = s2;
                out.heap.add({pred, args});
                return step(ctx, text, std::move(out));
              });
            },
            [&](const Command::Message& m) { return O::message(MessageKind::User, m.text, step(ctx, text, s)); },
            [&](const Command::Skip&) { return step(ctx, text, s); },
        },
        c.node);
  }

  static O params_then(const CtxP& ctx, const RoutineDef* r, std::vector<Int> vals) {
    if (vals.size() < r->params.size()) {
      return O::demonic(
          IndexDomain::Int,
          [ctx, r, vals](const IndexValue& i) {
            auto more = vals;
            more.push_back(std::get<Int>(i));
            return params_then(ctx, r, std::move(more));
          },
          ChoiceTag::Value);
    }
    Store<Int> params = param_store(r->params, vals);
    Box<Assertion> pre = r->pre, post = r->post;
    std::string pre_text = "produce " + to_string(r->pre);
    std::string post_text = "consume " + to_string(r->post);
    auto produced = produce(ctx, pre, SCState{params, {}});
    return bind(produced, [=](Unit, const SCState& s1) {
      Store<Int> saved = s1.store;
      auto body = bind(step(ctx, pre_text, SCState{params, s1.heap}),
                       [ctx, r](Unit, const SCState& s2) { return exec(ctx, r->body, s2); });
      return bind(body, [=](Unit, const SCState& s3) {
        Store<Int> post_store = saved;
        post_store.set(kResultVar, s3.store.get(kResultVar));
        auto o = consume(ctx, post, SCState{post_store, s3.heap}, "postcondition");
        return bind(o, [=](Unit, const SCState& s4) {
          return bind(step(ctx, post_text, SCState{s3.store, s4.heap}),
                      [](Unit, const SCState& s5) { return leakcheck(s5, "leak check"); });
        });
      });
    });
  }
};

SemiconcreteExecutor::SemiconcreteExecutor(std::shared_ptr<const Program> program, ExecOptions options)
    : ctx_(std::make_shared<const Ctx>(Ctx{std::move(program), options})) {}

SCOutcome SemiconcreteExecutor::produce(const Assertion& a, const SCState& s) const {
  return SemiconcreteImpl::produce(ctx_, a, s);
}

SCOutcome SemiconcreteExecutor::consume(const Assertion& a, const SCState& s, const std::string& step) const {
  return SemiconcreteImpl::consume(ctx_, a, s, step);
}

SCOutcome SemiconcreteExecutor::exec(const Command& c, const SCState& s) const {
  return SemiconcreteImpl::exec(ctx_, c, s);
}

SCOutcome SemiconcreteExecutor::leakcheck(const SCState& s) const {
  return SemiconcreteImpl::leakcheck(s, "leak check");
}

SCOutcome SemiconcreteExecutor::routine_validity(const std::string& routine) const {
  const RoutineDef* r = ctx_->program->find_routine(routine);
  if (!r) throw std::invalid_argument("unknown routine " + routine);
  return SemiconcreteImpl::params_then(ctx_, r, {});
}

SCOutcome SemiconcreteExecutor::main_safety() const {
  return SemiconcreteImpl::exec(ctx_, ctx_->program->main, SCState{});
}

namespace {

ScVerdict to_verdict(Resolution<SCState, Unit> res, std::string where) {
  ScVerdict v;
  v.status = res.status;
  v.valid = res.status == RunStatus::Ok || res.status == RunStatus::Blocked;
  v.where = std::move(where);
  v.failure = res.failure();
  v.events = std::move(res.events);
  return v;
}

}  // namespace

ScVerdict valid_routine(std::shared_ptr<const Program> program, const std::string& routine,
                        ChoiceScript& values, ExecOptions options) {
  SemiconcreteExecutor ex(std::move(program), options);
  return to_verdict(resolve(ex.routine_validity(routine), values), routine);
}

ScVerdict sc_safe_program(std::shared_ptr<const Program> program, ChoiceScript& values,
                          ExecOptions options) {
  SemiconcreteExecutor ex(program, options);
  for (const auto& r : program->routines) {
    auto v = to_verdict(resolve(ex.routine_validity(r.name), values), r.name);
    if (!v.valid) return v;
  }
  return to_verdict(resolve(ex.main_safety(), values), "main");
}

}  // namespace fvf
