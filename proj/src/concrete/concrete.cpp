#include "fvf/concrete.hpp"

#include <limits>
#include <set>
#include <stdexcept>

#include "fvf/syntax.hpp"

namespace fvf {

Int eval(const Store<Int>& s, const Expr& e) {
  return std::visit(Overloaded{
                        [](const Expr::Lit& l) { return l.value; },
                        [&](const Expr::Var& v) { return s.get(v.name); },
                        [&](const Expr::Add& a) { return checked_add(eval(s, *a.lhs), eval(s, *a.rhs)); },
                        [&](const Expr::Sub& a) { return checked_sub(eval(s, *a.lhs), eval(s, *a.rhs)); },
                    },
                    e.node);
}

bool eval_bool(const Store<Int>& s, const BoolExpr& b) {
  return std::visit(Overloaded{
                        [&](const BoolExpr::Eq& e) { return eval(s, e.lhs) == eval(s, e.rhs); },
                        [&](const BoolExpr::Lt& e) { return eval(s, e.lhs) < eval(s, e.rhs); },
                        [&](const BoolExpr::Not& n) { return !eval_bool(s, *n.operand); },
                    },
                    b.node);
}

namespace {

std::string show_int(Int v) { return std::to_string(v); }

std::string wanted(const Pred& pred, const std::vector<Int>& fixed, std::size_t n_unfixed) {
  std::vector<std::string> parts;
  for (Int v : fixed) parts.push_back(std::to_string(v));
  return describe_wanted(pred, parts, n_unfixed);
}

}  // namespace

std::string describe_wanted(const Pred& pred, const std::vector<std::string>& fixed,
                            std::size_t n_unfixed) {
  std::vector<std::string> parts = fixed;
  for (std::size_t i = 0; i < n_unfixed; ++i) parts.push_back("_");
  if (pred.is_points_to() && parts.size() == 2) return parts[0] + " |-> " + parts[1];
  std::string out = pred.name() + "(";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
  return out + ")";
}

std::optional<Heap<Int>::const_iterator> find_chunk(const Heap<Int>& h, const Pred& pred,
                                                    const std::vector<Int>& fixed,
                                                    std::size_t arity) {
  for (auto it = h.begin(); it != h.end(); ++it) {
    if (it->pred != pred || it->args.size() != arity) continue;
    if (std::equal(fixed.begin(), fixed.end(), it->args.begin())) return it;
  }
  return std::nullopt;
}

std::string chunk_string(const CChunk& c) { return chunk_string(c, show_int); }

std::string state_string(const CState& s) {
  return "s: " + store_string(s.store, show_int, ", ") + " | h: " + heap_string(s.heap, show_int);
}

Outcome<CState, std::vector<Int>> cconsume_chunk(const CState& s, const Pred& pred,
                                                 const std::vector<Int>& fixed,
                                                 std::size_t n_unfixed) {
  using O = Outcome<CState, std::vector<Int>>;
  auto it = find_chunk(s.heap, pred, fixed, fixed.size() + n_unfixed);
  if (!it) return O::fail("no chunk matching " + wanted(pred, fixed, n_unfixed));
  std::vector<Int> rest((*it)->args.begin() + static_cast<std::ptrdiff_t>(fixed.size()),
                        (*it)->args.end());
  CState out = s;
  out.heap.erase(*find_chunk(out.heap, pred, fixed, fixed.size() + n_unfixed));
  return O::single(std::move(out), std::move(rest));
}

COutcome cproduce_chunks(const CState& s, const std::vector<CChunk>& chunks) {
  std::set<std::pair<Pred, Int>> dom;
  for (const auto& c : s.heap)
    if (!c.args.empty()) dom.insert({c.pred, c.args[0]});
  for (const auto& c : chunks)
    if (!c.args.empty() && !dom.insert({c.pred, c.args[0]}).second) return COutcome::top();
  CState out = s;
  for (const auto& c : chunks) out.heap.add(c);
  return COutcome::single(std::move(out));
}

struct ConcreteExecutor::Ctx {
  std::shared_ptr<const Program> program;
  ExecOptions options;
};

struct ConcreteImpl {
  using Ctx = ConcreteExecutor::Ctx;
  using CtxP = std::shared_ptr<const Ctx>;

  static std::string indent(int level) { return std::string(static_cast<std::size_t>(level) * 2, ' '); }

  static COutcome step(const CtxP& ctx, int level, const std::string& text, CState s) {
    if (!ctx->options.trace) return COutcome::single(std::move(s));
    std::string line = indent(level) + text + " | " + state_string(s);
    return COutcome::message(MessageKind::Trace, std::move(line), COutcome::single(std::move(s)));
  }

  static COutcome failure(const std::string& text, const std::string& reason, const CState& s) {
    return COutcome::fail(text + ": " + reason + " | " + state_string(s));
  }

  static COutcome malloc_cells(const CtxP& ctx, int level, const Box<Command>& cmd, Int addr,
                               std::vector<Int> values, const CState& s) {
    const auto& m = std::get<Command::Malloc>(cmd->node);
    if (static_cast<Int>(values.size()) == m.size) {
      std::vector<CChunk> chunks{{Pred::malloc_block(), {addr, m.size}}};
      for (std::size_t i = 0; i < values.size(); ++i)
        chunks.push_back({Pred::points_to(), {addr + static_cast<Int>(i), values[i]}});
      return bind(cproduce_chunks(s, chunks), [ctx, level, cmd, addr](Unit, const CState& s2) {
        CState s3 = s2;
        s3.store.set(std::get<Command::Malloc>(cmd->node).var, addr);
        return step(ctx, level, to_string(*cmd), std::move(s3));
      });
    }
    return COutcome::demonic(
        IndexDomain::Int,
        [ctx, level, cmd, addr, values, s](const IndexValue& i) {
          auto next = values;
          next.push_back(std::get<Int>(i));
          return malloc_cells(ctx, level, cmd, addr, std::move(next), s);
        },
        ChoiceTag::Value);
  }

  static COutcome loop(const CtxP& ctx, int level, const Box<Command>& cmd, int depth, int iteration,
                       const CState& s) {
    return COutcome::demonic(IndexDomain::Bool, [=](const IndexValue& i) {
      const auto& w = std::get<Command::While>(cmd->node);
      bool guard = eval_bool(s.store, w.cond);
      if (std::get<bool>(i)) return guard ? COutcome::top() : COutcome::single(s);
      if (!guard || iteration >= depth) return COutcome::top();
      return bind(exec(ctx, w.body, depth, s, level), [=](Unit, const CState& s2) {
        return loop(ctx, level, cmd, depth, iteration + 1, s2);
      });
    });
  }

  static COutcome exec(const CtxP& ctx, const Box<Command>& cmd, int depth, const CState& s,
                       int level) {
    if (depth <= 0) return COutcome::top();
    const int d = depth - 1;
    const Command& c = *cmd;
    return std::visit(
        Overloaded{
            [&](const Command::Assign& a) {
              CState out = s;
              out.store.set(a.var, eval(s.store, a.value));
              return step(ctx, level, to_string(c), std::move(out));
            },
            [&](const Command::Seq& q) {
              Box<Command> second = q.second;
              return bind(exec(ctx, q.first, d, s, level), [ctx, second, d, level](Unit, const CState& s2) {
                return exec(ctx, second, d, s2, level);
              });
            },
            [&](const Command::If&) {
              return COutcome::demonic(IndexDomain::Bool, [ctx, cmd, d, s, level](const IndexValue& i) {
                const auto& g = std::get<Command::If>(cmd->node);
                bool take = std::get<bool>(i);
                if (eval_bool(s.store, g.cond) != take) return COutcome::top();
                return exec(ctx, take ? g.then_branch : g.else_branch, d, s, level);
              });
            },
            [&](const Command::While&) { return loop(ctx, level, cmd, d, 0, s); },
            [&](const Command::Call& call) {
              const RoutineDef* r = ctx->program->find_routine(call.routine);
              if (!r || r->params.size() != call.args.size())
                throw std::logic_error("call to undeclared routine " + call.routine);
              CState entry{{}, s.heap};
              for (std::size_t i = 0; i < call.args.size(); ++i)
                entry.store.set(r->params[i], eval(s.store, call.args[i]));
              Store<Int> caller = s.store;
              auto after = bind(exec(ctx, r->body, d, entry, level + 1),
                                [ctx, cmd, caller, level](Unit, const CState& exit) {
                                  const auto& k = std::get<Command::Call>(cmd->node);
                                  CState back{caller, exit.heap};
                                  if (k.result_var) back.store.set(*k.result_var, exit.store.get(kResultVar));
                                  return step(ctx, level, to_string(*cmd), std::move(back));
                                });
              if (!ctx->options.trace) return after;
              return COutcome::message(MessageKind::Trace,
                                       indent(level) + "call " + to_string(c) + " | " + state_string(entry),
                                       std::move(after));
            },
            [&](const Command::Malloc& m) {
              return COutcome::demonic(
                  IndexDomain::Int,
                  [ctx, cmd, s, level, n = m.size](const IndexValue& i) {
                    Int addr = std::get<Int>(i);
                    if (addr <= 0 || addr > std::numeric_limits<Int>::max() - n) return COutcome::top();
                    return malloc_cells(ctx, level, cmd, addr, {}, s);
                  },
                  ChoiceTag::Address);
            },
            [&](const Command::Read& r) {
              Int addr = eval(s.store, r.address);
              auto it = find_chunk(s.heap, Pred::points_to(), {addr}, 2);
              if (!it) return failure(to_string(c), "no chunk matching " + wanted(Pred::points_to(), {addr}, 1), s);
              CState out = s;
              out.store.set(r.var, (*it)->args[1]);
              return step(ctx, level, to_string(c), std::move(out));
            },
            [&](const Command::Write& w) {
              Int addr = eval(s.store, w.address);
              Int value = eval(s.store, w.value);
              auto it = find_chunk(s.heap, Pred::points_to(), {addr}, 2);
              if (!it) return failure(to_string(c), "no chunk matching " + wanted(Pred::points_to(), {addr}, 1), s);
              CState out = s;
              out.heap.erase(*find_chunk(out.heap, Pred::points_to(), {addr}, 2));
              out.heap.add({Pred::points_to(), {addr, value}});
              return step(ctx, level, to_string(c), std::move(out));
            },
            [&](const Command::Free& f) {
              Int addr = eval(s.store, f.address);
              CState out = s;
              auto block = find_chunk(out.heap, Pred::malloc_block(), {addr}, 2);
              if (!block)
                return failure(to_string(c), "no chunk matching " + wanted(Pred::malloc_block(), {addr}, 1), s);
              Int size = (*block)->args[1];
              out.heap.erase(*block);
              for (Int k = 0; k < size; ++k) {
                Int cell = checked_add(addr, k);
                auto it = find_chunk(out.heap, Pred::points_to(), {cell}, 2);
                if (!it)
                  return failure(to_string(c), "no chunk matching " + wanted(Pred::points_to(), {cell}, 1), s);
                out.heap.erase(*it);
              }
              return step(ctx, level, to_string(c), std::move(out));
            },
            [&](const Command::Message& m) {
              return COutcome::message(MessageKind::User, m.text, step(ctx, level, to_string(c), s));
            },
            [&](const auto&) { return step(ctx, level, to_string(c), s); },  // skip, open, close
        },
        c.node);
  }
};

ConcreteExecutor::ConcreteExecutor(std::shared_ptr<const Program> program, ExecOptions options)
    : ctx_(std::make_shared<const Ctx>(Ctx{std::move(program), options})) {}

COutcome ConcreteExecutor::exec(const Command& c, int depth, const CState& s) const {
  return ConcreteImpl::exec(ctx_, Box<Command>(c), depth, s, 0);
}

COutcome ConcreteExecutor::exec_main(int depth) const {
  return ConcreteImpl::exec(ctx_, ctx_->program->main, depth, CState{}, 0);
}

RunResult run(std::shared_ptr<const Program> program, int depth, ChoiceScript& script,
              ExecOptions options) {
  ConcreteExecutor ex(std::move(program), options);
  auto res = resolve(ex.exec_main(depth), script);
  RunResult out;
  out.status = res.status;
  out.final_state = std::move(res.state);
  out.failure = res.failure();
  out.events = std::move(res.events);
  out.script = script.consumed();
  return out;
}

namespace {

Assertion trivially_true() { return Assertion::fact(BoolExpr::eq(Expr::lit(0), Expr::lit(0))); }

Command erase(const Command& c) {
  Command out = c;
  std::visit(Overloaded{
                 [&](const Command::Seq& q) {
                   out.node = Command::Seq{erase(*q.first), erase(*q.second)};
                 },
                 [&](const Command::If& f) {
                   out.node = Command::If{f.cond, erase(*f.then_branch), erase(*f.else_branch)};
                 },
                 [&](const Command::While& w) {
                   out.node = Command::While{w.cond, trivially_true(), erase(*w.body)};
                 },
                 [&](const Command::Open&) { out.node = Command::Skip{}; },
                 [&](const Command::Close&) { out.node = Command::Skip{}; },
                 [&](const auto&) {},
             },
             c.node);
  return out;
}

}  // namespace

Program erase_annotations(const Program& p) {
  Program out;
  for (const auto& r : p.routines)
    out.routines.push_back({r.name, r.params, trivially_true(), trivially_true(), erase(*r.body), r.loc});
  out.main = erase(*p.main);
  return out;
}

}  // namespace fvf
