#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <variant>

#include "fvf/common.hpp"

namespace fvf {

struct SymbolId {
  std::uint32_t value = 0;
  bool operator==(const SymbolId&) const = default;
  std::strong_ordering operator<=>(const SymbolId&) const = default;
};

struct Term {
  struct Lit {
    Int value;
    bool operator==(const Lit&) const = default;
    std::strong_ordering operator<=>(const Lit&) const = default;
  };
  struct Sym {
    SymbolId id;
    bool operator==(const Sym&) const = default;
    std::strong_ordering operator<=>(const Sym&) const = default;
  };
  struct Add {
    Box<Term> lhs, rhs;
    bool operator==(const Add&) const = default;
    std::strong_ordering operator<=>(const Add&) const = default;
  };
  struct Sub {
    Box<Term> lhs, rhs;
    bool operator==(const Sub&) const = default;
    std::strong_ordering operator<=>(const Sub&) const = default;
  };
  std::variant<Lit, Sym, Add, Sub> node;

  static Term lit(Int v) { return {Lit{v}}; }
  static Term sym(SymbolId id) { return {Sym{id}}; }
  static Term add(Term a, Term b) { return {Add{std::move(a), std::move(b)}}; }
  static Term sub(Term a, Term b) { return {Sub{std::move(a), std::move(b)}}; }

  bool operator==(const Term&) const = default;
  std::strong_ordering operator<=>(const Term& o) const;
};

struct Formula {
  struct Eq {
    Term lhs, rhs;
    bool operator==(const Eq&) const = default;
    std::strong_ordering operator<=>(const Eq&) const = default;
  };
  struct Lt {
    Term lhs, rhs;
    bool operator==(const Lt&) const = default;
    std::strong_ordering operator<=>(const Lt&) const = default;
  };
  struct Not {
    Box<Formula> operand;
    bool operator==(const Not&) const = default;
    std::strong_ordering operator<=>(const Not&) const = default;
  };
  std::variant<Eq, Lt, Not> node;

  static Formula eq(Term a, Term b) { return {Eq{std::move(a), std::move(b)}}; }
  static Formula lt(Term a, Term b) { return {Lt{std::move(a), std::move(b)}}; }
  static Formula negate(Formula f) { return {Not{std::move(f)}}; }

  bool operator==(const Formula&) const = default;
  std::strong_ordering operator<=>(const Formula& o) const;
};

// The housekeeping formula s = s that registers a symbol as used.
Formula registration(SymbolId id);
// The symbol a formula registers, if it is one.
std::optional<SymbolId> registered_symbol(const Formula& f);

void collect_symbols(const Term& t, std::set<SymbolId>& out);
void collect_symbols(const Formula& f, std::set<SymbolId>& out);

using SymbolNamer = std::function<std::string(SymbolId)>;

std::string to_string(const Term& t, const SymbolNamer& name);
std::string to_string(const Formula& f, const SymbolNamer& name);

// Integer value under an assignment of symbols (checked arithmetic).
Int evaluate(const Term& t, const std::function<Int(SymbolId)>& model);
bool evaluate(const Formula& f, const std::function<Int(SymbolId)>& model);

}  // namespace fvf
