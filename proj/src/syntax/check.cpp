#include <algorithm>
#include <map>

#include "fvf/syntax.hpp"

namespace fvf {

std::set<std::string> targets(const Command& c) {
  return std::visit(
      Overloaded{
          [](const Command::Assign& s) { return std::set<std::string>{s.var}; },
          [](const Command::Malloc& s) { return std::set<std::string>{s.var}; },
          [](const Command::Read& s) { return std::set<std::string>{s.var}; },
          [](const Command::Seq& s) {
            auto out = targets(*s.first);
            out.merge(targets(*s.second));
            return out;
          },
          [](const Command::If& s) {
            auto out = targets(*s.then_branch);
            out.merge(targets(*s.else_branch));
            return out;
          },
          [](const Command::While& s) { return targets(*s.body); },
          [](const Command::Call& s) {
            return s.result_var ? std::set<std::string>{*s.result_var} : std::set<std::string>{};
          },
          [](const auto&) { return std::set<std::string>{}; },
      },
      c.node);
}

std::set<std::string> free_vars(const Expr& e) {
  return std::visit(Overloaded{
                        [](const Expr::Lit&) { return std::set<std::string>{}; },
                        [](const Expr::Var& v) { return std::set<std::string>{v.name}; },
                        [](const auto& bin) {
                          auto out = free_vars(*bin.lhs);
                          out.merge(free_vars(*bin.rhs));
                          return out;
                        },
                    },
                    e.node);
}

std::set<std::string> free_vars(const BoolExpr& b) {
  return std::visit(Overloaded{
                        [](const BoolExpr::Not& n) { return free_vars(*n.operand); },
                        [](const auto& cmp) {
                          auto out = free_vars(cmp.lhs);
                          out.merge(free_vars(cmp.rhs));
                          return out;
                        },
                    },
                    b.node);
}

namespace {

// Free variables of `a` given the patterns already bound to its left.
void assertion_vars(const Assertion& a, std::set<std::string>& bound, std::set<std::string>& out) {
  auto use = [&](const std::set<std::string>& vs) {
    for (const auto& v : vs)
      if (!bound.count(v)) out.insert(v);
  };
  std::visit(Overloaded{
                 [&](const Assertion::Fact& f) { use(free_vars(f.cond)); },
                 [&](const Assertion::Chunk& c) {
                   for (const auto& e : c.args) use(free_vars(e));
                   bound.insert(c.patterns.begin(), c.patterns.end());
                 },
                 [&](const Assertion::Star& s) {
                   assertion_vars(*s.lhs, bound, out);
                   assertion_vars(*s.rhs, bound, out);
                 },
                 [&](const Assertion::Cond& c) {
                   use(free_vars(c.cond));
                   auto bt = bound, be = bound;
                   assertion_vars(*c.then_branch, bt, out);
                   assertion_vars(*c.else_branch, be, out);
                 },
             },
             a.node);
}

void collect_patterns(const Assertion& a, std::vector<std::string>& out) {
  std::visit(Overloaded{
                 [&](const Assertion::Fact&) {},
                 [&](const Assertion::Chunk& c) {
                   out.insert(out.end(), c.patterns.begin(), c.patterns.end());
                 },
                 [&](const Assertion::Star& s) {
                   collect_patterns(*s.lhs, out);
                   collect_patterns(*s.rhs, out);
                 },
                 [&](const Assertion::Cond& c) {
                   collect_patterns(*c.then_branch, out);
                   collect_patterns(*c.else_branch, out);
                 },
             },
             a.node);
}

class Checker {
 public:
  explicit Checker(const Program& p) : p_(p) {}

  std::vector<StaticError> run() {
    std::set<std::string> seen;
    for (const auto& d : p_.predicates) {
      if (d.name == "mb") error(d.loc, "predicate name 'mb' is reserved");
      if (!seen.insert(d.name).second) error(d.loc, "duplicate predicate '" + d.name + "'");
      check_params(d.params, d.loc, "predicate " + d.name);
      assertion(d.body, d.loc);
    }
    seen.clear();
    for (const auto& r : p_.routines) {
      if (!seen.insert(r.name).second) error(r.loc, "duplicate routine '" + r.name + "'");
      check_params(r.params, r.loc, "routine " + r.name);
      if (std::find(r.params.begin(), r.params.end(), kResultVar) != r.params.end())
        error(r.loc, "'result' cannot be a parameter of routine " + r.name);
      std::vector<std::string> pats;
      collect_patterns(r.pre, pats);
      for (const auto& x : pats)
        if (std::find(r.params.begin(), r.params.end(), x) != r.params.end())
          error(r.loc, "precondition pattern ?" + x + " shadows a parameter of routine " + r.name);
      assertion(r.pre, r.loc);
      assertion(r.post, r.loc);
      command(*r.body);
    }
    command(*p_.main);
    std::stable_sort(errors_.begin(), errors_.end(), [](const StaticError& a, const StaticError& b) {
      return std::pair(a.loc.line, a.loc.column) < std::pair(b.loc.line, b.loc.column);
    });
    return std::move(errors_);
  }

 private:
  const Program& p_;
  std::vector<StaticError> errors_;

  void error(SourceLoc loc, std::string msg) { errors_.push_back({loc, std::move(msg)}); }

  void check_params(const std::vector<std::string>& ps, SourceLoc loc, const std::string& what) {
    std::set<std::string> s;
    for (const auto& x : ps)
      if (!s.insert(x).second) error(loc, "duplicate parameter '" + x + "' in " + what);
  }

  void predicate_use(const Pred& pred, std::size_t arity, SourceLoc loc) {
    if (pred.is_builtin()) {
      if (arity != 2) error(loc, "built-in predicate " + pred.name() + " takes 2 arguments");
      return;
    }
    const PredicateDef* d = p_.find_predicate(pred.name());
    if (!d) {
      error(loc, "unknown predicate '" + pred.name() + "'");
    } else if (d->params.size() != arity) {
      error(loc, "predicate " + pred.name() + " expects " + std::to_string(d->params.size()) +
                     " arguments, got " + std::to_string(arity));
    }
  }

  void assertion(const Assertion& a, SourceLoc loc) {
    std::visit(Overloaded{
                   [&](const Assertion::Fact&) {},
                   [&](const Assertion::Chunk& c) {
                     predicate_use(c.pred, c.args.size() + c.patterns.size(), loc);
                   },
                   [&](const Assertion::Star& s) {
                     assertion(*s.lhs, loc);
                     assertion(*s.rhs, loc);
                   },
                   [&](const Assertion::Cond& c) {
                     assertion(*c.then_branch, loc);
                     assertion(*c.else_branch, loc);
                   },
               },
               a.node);
  }

  void ghost_target(const Pred& pred, std::size_t arity, SourceLoc loc) {
    if (pred.name() == "mb" || pred.is_builtin()) {
      error(loc, "cannot open or close built-in predicate " + pred.name());
      return;
    }
    predicate_use(pred, arity, loc);
  }

  void command(const Command& c) {
    std::visit(Overloaded{
                   [&](const Command::Seq& s) {
                     command(*s.first);
                     command(*s.second);
                   },
                   [&](const Command::If& s) {
                     command(*s.then_branch);
                     command(*s.else_branch);
                   },
                   [&](const Command::While& s) {
                     assertion(s.invariant, c.loc);
                     command(*s.body);
                   },
                   [&](const Command::Call& s) {
                     const RoutineDef* r = p_.find_routine(s.routine);
                     if (!r) {
                       error(c.loc, "unknown routine '" + s.routine + "'");
                     } else if (r->params.size() != s.args.size()) {
                       error(c.loc, "routine " + s.routine + " expects " +
                                        std::to_string(r->params.size()) + " arguments, got " +
                                        std::to_string(s.args.size()));
                     }
                   },
                   [&](const Command::Open& s) {
                     ghost_target(s.pred, s.args.size() + s.wildcards, c.loc);
                   },
                   [&](const Command::Close& s) { ghost_target(s.pred, s.args.size(), c.loc); },
                   [&](const auto&) {},
               },
               c.node);
  }
};

std::string render(const std::vector<StaticError>& errors) {
  std::string out;
  for (const auto& e : errors) {
    if (!out.empty()) out += "\n";
    out += std::to_string(e.loc.line) + ":" + std::to_string(e.loc.column) + ": " + e.message;
  }
  return out;
}

}  // namespace

std::set<std::string> free_vars(const Assertion& a) {
  std::set<std::string> bound, out;
  assertion_vars(a, bound, out);
  return out;
}

std::vector<StaticError> check_well_formed(const Program& p) { return Checker(p).run(); }

ProgramError::ProgramError(std::vector<StaticError> errors)
    : std::runtime_error(render(errors)), errors_(std::move(errors)) {}

Program load_program(std::string_view source) {
  Program p;
  try {
    p = parse_program(source);
  } catch (const ParseError& e) {
    std::string msg = e.what();
    // Strip the "line:col: " prefix; StaticError carries the location.
    auto pos = msg.find(": ");
    throw ProgramError({{e.loc(), pos == std::string::npos ? msg : msg.substr(pos + 2)}});
  }
  auto errors = check_well_formed(p);
  if (!errors.empty()) throw ProgramError(std::move(errors));
  return p;
}

}  // namespace fvf
