#include <sstream>

#include "fvf/syntax.hpp"

namespace fvf {

namespace {

bool is_arith(const Expr& e) {
  return std::holds_alternative<Expr::Add>(e.node) || std::holds_alternative<Expr::Sub>(e.node);
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += ", ";
    out += parts[i];
  }
  return out;
}

std::string args_string(const std::vector<Expr>& args) {
  std::vector<std::string> parts;
  for (const auto& a : args) parts.push_back(to_string(a));
  return join(parts);
}

bool is_seq(const Command& c) { return std::holds_alternative<Command::Seq>(c.node); }

std::string paren_if_seq(const Command& c) {
  return is_seq(c) ? "(" + to_string(c) + ")" : to_string(c);
}

void print_block(std::ostream& os, const Command& c, int indent);

// A branch body; sequences become an indented parenthesised block.
void print_branch(std::ostream& os, const Command& c, int indent) {
  if (!is_seq(c)) {
    print_block(os, c, indent);
    return;
  }
  os << "(\n" << std::string(indent + 2, ' ');
  print_block(os, c, indent + 2);
  os << "\n" << std::string(indent, ' ') << ")";
}

void print_block(std::ostream& os, const Command& c, int indent) {
  std::visit(Overloaded{
                 [&](const Command::Seq& s) {
                   if (is_seq(*s.first)) {
                     os << "(";
                     print_block(os, *s.first, indent + 1);
                     os << ")";
                   } else {
                     print_block(os, *s.first, indent);
                   }
                   os << ";\n" << std::string(indent, ' ');
                   print_block(os, *s.second, indent);
                 },
                 [&](const Command::If& s) {
                   os << "if " << to_string(s.cond) << " then ";
                   print_branch(os, *s.then_branch, indent);
                   os << " else ";
                   print_branch(os, *s.else_branch, indent);
                 },
                 [&](const Command::While& s) {
                   os << "while " << to_string(s.cond) << " inv " << to_string(s.invariant)
                      << " do ";
                   print_branch(os, *s.body, indent);
                 },
                 [&](const auto&) { os << to_string(c); },
             },
             c.node);
}

}  // namespace

std::string to_string(const Expr& e) {
  return std::visit(Overloaded{
                        [](const Expr::Lit& l) { return std::to_string(l.value); },
                        [](const Expr::Var& v) { return v.name; },
                        [](const Expr::Add& a) {
                          std::string rhs = to_string(*a.rhs);
                          if (is_arith(*a.rhs)) rhs = "(" + rhs + ")";
                          return to_string(*a.lhs) + " + " + rhs;
                        },
                        [](const Expr::Sub& a) {
                          std::string rhs = to_string(*a.rhs);
                          if (is_arith(*a.rhs)) rhs = "(" + rhs + ")";
                          return to_string(*a.lhs) + " - " + rhs;
                        },
                    },
                    e.node);
}

std::string to_string(const BoolExpr& b) {
  return std::visit(Overloaded{
                        [](const BoolExpr::Eq& e) { return to_string(e.lhs) + " = " + to_string(e.rhs); },
                        [](const BoolExpr::Lt& e) { return to_string(e.lhs) + " < " + to_string(e.rhs); },
                        [](const BoolExpr::Not& n) {
                          std::string inner = to_string(*n.operand);
                          if (!std::holds_alternative<BoolExpr::Not>(n.operand->node))
                            inner = "(" + inner + ")";
                          return "!" + inner;
                        },
                    },
                    b.node);
}

std::string to_string(const Assertion& a) {
  return std::visit(
      Overloaded{
          [](const Assertion::Fact& f) { return to_string(f.cond); },
          [](const Assertion::Chunk& c) {
            if (c.pred.is_points_to() && c.args.size() + c.patterns.size() == 2 && !c.args.empty()) {
              std::string rhs = c.patterns.empty() ? to_string(c.args[1]) : "?" + c.patterns[0];
              return to_string(c.args[0]) + " |-> " + rhs;
            }
            std::vector<std::string> parts;
            for (const auto& e : c.args) parts.push_back(to_string(e));
            for (const auto& p : c.patterns) parts.push_back("?" + p);
            return c.pred.name() + "(" + join(parts) + ")";
          },
          [](const Assertion::Star& s) {
            std::string lhs = to_string(*s.lhs);
            if (!std::holds_alternative<Assertion::Fact>(s.lhs->node) &&
                !std::holds_alternative<Assertion::Chunk>(s.lhs->node))
              lhs = "(" + lhs + ")";
            return lhs + " * " + to_string(*s.rhs);
          },
          [](const Assertion::Cond& c) {
            return "if " + to_string(c.cond) + " then " + to_string(*c.then_branch) + " else " +
                   to_string(*c.else_branch);
          },
      },
      a.node);
}

std::string to_string(const Command& c) {
  return std::visit(
      Overloaded{
          [](const Command::Assign& s) { return s.var + " := " + to_string(s.value); },
          [](const Command::Seq& s) { return paren_if_seq(*s.first) + "; " + to_string(*s.second); },
          [](const Command::If& s) {
            return "if " + to_string(s.cond) + " then " + paren_if_seq(*s.then_branch) + " else " +
                   paren_if_seq(*s.else_branch);
          },
          [](const Command::While& s) {
            return "while " + to_string(s.cond) + " inv " + to_string(s.invariant) + " do " +
                   paren_if_seq(*s.body);
          },
          [](const Command::Call& s) {
            std::string lhs = s.result_var ? *s.result_var + " := " : "";
            return lhs + s.routine + "(" + args_string(s.args) + ")";
          },
          [](const Command::Malloc& s) { return s.var + " := malloc(" + std::to_string(s.size) + ")"; },
          [](const Command::Read& s) { return s.var + " := [" + to_string(s.address) + "]"; },
          [](const Command::Write& s) {
            return "[" + to_string(s.address) + "] := " + to_string(s.value);
          },
          [](const Command::Free& s) { return "free(" + to_string(s.address) + ")"; },
          [](const Command::Open& s) {
            std::vector<std::string> parts;
            for (const auto& e : s.args) parts.push_back(to_string(e));
            for (std::size_t i = 0; i < s.wildcards; ++i) parts.push_back("?_");
            return "open " + s.pred.name() + "(" + join(parts) + ")";
          },
          [](const Command::Close& s) {
            return "close " + s.pred.name() + "(" + args_string(s.args) + ")";
          },
          [](const Command::Skip&) { return std::string("skip"); },
          [](const Command::Message& s) { return "message \"" + s.text + "\""; },
      },
      c.node);
}

std::string pretty_print(const Program& p) {
  std::ostringstream os;
  for (const auto& d : p.predicates)
    os << "predicate " << d.name << "(" << join(d.params) << ") =\n  " << to_string(d.body)
       << "\n\n";
  for (const auto& r : p.routines) {
    os << "routine " << r.name << "(" << join(r.params) << ")\n  req " << to_string(r.pre)
       << "\n  ens " << to_string(r.post) << "\n= (\n  ";
    print_block(os, *r.body, 2);
    os << "\n)\n\n";
  }
  print_block(os, *p.main, 0);
  os << "\n";
  return os.str();
}

}  // namespace fvf
