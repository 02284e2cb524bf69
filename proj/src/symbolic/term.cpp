#include "fvf/term.hpp"

#include <optional>

namespace fvf {

namespace {

template <class V>
std::strong_ordering compare_variants(const V& a, const V& b) {
  if (a.index() != b.index()) return a.index() <=> b.index();
  return std::visit(
      [&](const auto& x) -> std::strong_ordering {
        return x <=> std::get<std::decay_t<decltype(x)>>(b);
      },
      a);
}

bool compound(const Term& t) {
  return std::holds_alternative<Term::Add>(t.node) || std::holds_alternative<Term::Sub>(t.node);
}

}  // namespace

std::strong_ordering Term::operator<=>(const Term& o) const { return compare_variants(node, o.node); }
std::strong_ordering Formula::operator<=>(const Formula& o) const { return compare_variants(node, o.node); }

Formula registration(SymbolId id) { return Formula::eq(Term::sym(id), Term::sym(id)); }

std::optional<SymbolId> registered_symbol(const Formula& f) {
  const auto* eq = std::get_if<Formula::Eq>(&f.node);
  if (!eq) return std::nullopt;
  const auto* a = std::get_if<Term::Sym>(&eq->lhs.node);
  const auto* b = std::get_if<Term::Sym>(&eq->rhs.node);
  if (a && b && a->id == b->id) return a->id;
  return std::nullopt;
}

void collect_symbols(const Term& t, std::set<SymbolId>& out) {
  std::visit(Overloaded{
                 [](const Term::Lit&) {},
                 [&](const Term::Sym& s) { out.insert(s.id); },
                 [&](const auto& bin) {
                   collect_symbols(*bin.lhs, out);
                   collect_symbols(*bin.rhs, out);
                 },
             },
             t.node);
}

void collect_symbols(const Formula& f, std::set<SymbolId>& out) {
  std::visit(Overloaded{
                 [&](const Formula::Not& n) { collect_symbols(*n.operand, out); },
                 [&](const auto& cmp) {
                   collect_symbols(cmp.lhs, out);
                   collect_symbols(cmp.rhs, out);
                 },
             },
             f.node);
}

std::string to_string(const Term& t, const SymbolNamer& name) {
  return std::visit(Overloaded{
                        [](const Term::Lit& l) { return std::to_string(l.value); },
                        [&](const Term::Sym& s) { return name(s.id); },
                        [&](const Term::Add& a) {
                          std::string rhs = to_string(*a.rhs, name);
                          if (compound(*a.rhs)) rhs = "(" + rhs + ")";
                          return to_string(*a.lhs, name) + " + " + rhs;
                        },
                        [&](const Term::Sub& a) {
                          std::string rhs = to_string(*a.rhs, name);
                          if (compound(*a.rhs)) rhs = "(" + rhs + ")";
                          return to_string(*a.lhs, name) + " - " + rhs;
                        },
                    },
                    t.node);
}

std::string to_string(const Formula& f, const SymbolNamer& name) {
  return std::visit(Overloaded{
                        [&](const Formula::Eq& e) {
                          return to_string(e.lhs, name) + " = " + to_string(e.rhs, name);
                        },
                        [&](const Formula::Lt& e) {
                          return to_string(e.lhs, name) + " < " + to_string(e.rhs, name);
                        },
                        [&](const Formula::Not& n) {
                          if (const auto* eq = std::get_if<Formula::Eq>(&n.operand->node))
                            return to_string(eq->lhs, name) + " != " + to_string(eq->rhs, name);
                          return "!(" + to_string(*n.operand, name) + ")";
                        },
                    },
                    f.node);
}

Int evaluate(const Term& t, const std::function<Int(SymbolId)>& model) {
  return std::visit(Overloaded{
                        [](const Term::Lit& l) { return l.value; },
                        [&](const Term::Sym& s) { return model(s.id); },
                        [&](const Term::Add& a) {
                          return checked_add(evaluate(*a.lhs, model), evaluate(*a.rhs, model));
                        },
                        [&](const Term::Sub& a) {
                          return checked_sub(evaluate(*a.lhs, model), evaluate(*a.rhs, model));
                        },
                    },
                    t.node);
}

bool evaluate(const Formula& f, const std::function<Int(SymbolId)>& model) {
  return std::visit(Overloaded{
                        [&](const Formula::Eq& e) { return evaluate(e.lhs, model) == evaluate(e.rhs, model); },
                        [&](const Formula::Lt& e) { return evaluate(e.lhs, model) < evaluate(e.rhs, model); },
                        [&](const Formula::Not& n) { return !evaluate(*n.operand, model); },
                    },
                    f.node);
}

}  // namespace fvf
