#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fvf/common.hpp"

namespace fvf {

struct SourceLoc {
  int line = 0;
  int column = 0;
};

struct Expr {
  struct Lit {
    Int value;
    bool operator==(const Lit&) const = default;
  };
  struct Var {
    std::string name;
    bool operator==(const Var&) const = default;
  };
  struct Add {
    Box<Expr> lhs, rhs;
    bool operator==(const Add&) const = default;
  };
  struct Sub {
    Box<Expr> lhs, rhs;
    bool operator==(const Sub&) const = default;
  };
  std::variant<Lit, Var, Add, Sub> node;

  static Expr lit(Int v) { return {Lit{v}}; }
  static Expr var(std::string x) { return {Var{std::move(x)}}; }
  static Expr add(Expr a, Expr b) { return {Add{std::move(a), std::move(b)}}; }
  static Expr sub(Expr a, Expr b) { return {Sub{std::move(a), std::move(b)}}; }

  bool operator==(const Expr&) const = default;
};

struct BoolExpr {
  struct Eq {
    Expr lhs, rhs;
    bool operator==(const Eq&) const = default;
  };
  struct Lt {
    Expr lhs, rhs;
    bool operator==(const Lt&) const = default;
  };
  struct Not {
    Box<BoolExpr> operand;
    bool operator==(const Not&) const = default;
  };
  std::variant<Eq, Lt, Not> node;

  static BoolExpr eq(Expr a, Expr b) { return {Eq{std::move(a), std::move(b)}}; }
  static BoolExpr lt(Expr a, Expr b) { return {Lt{std::move(a), std::move(b)}}; }
  static BoolExpr negate(BoolExpr b) { return {Not{std::move(b)}}; }

  bool operator==(const BoolExpr&) const = default;
};

// Predicate names. The two built-ins sort before user predicates, which sort
// by name; this is the canonical chunk order used for display and matching.
class Pred {
 public:
  static Pred points_to() { return Pred(Kind::PointsTo, "|->"); }
  static Pred malloc_block() { return Pred(Kind::MallocBlock, "mb"); }
  static Pred user(std::string name) { return Pred(Kind::User, std::move(name)); }

  bool is_points_to() const { return kind_ == Kind::PointsTo; }
  bool is_malloc_block() const { return kind_ == Kind::MallocBlock; }
  bool is_builtin() const { return kind_ != Kind::User; }
  const std::string& name() const { return name_; }

  bool operator==(const Pred&) const = default;
  std::strong_ordering operator<=>(const Pred&) const = default;

 private:
  enum class Kind { MallocBlock, PointsTo, User };
  Pred(Kind k, std::string n) : kind_(k), name_(std::move(n)) {}
  Kind kind_;
  std::string name_;
};

struct Assertion {
  struct Fact {
    BoolExpr cond;
    bool operator==(const Fact&) const = default;
  };
  // p(e1, ..., ek, ?x1, ..., ?xm): fixed arguments followed by patterns.
  struct Chunk {
    Pred pred;
    std::vector<Expr> args;
    std::vector<std::string> patterns;
    bool operator==(const Chunk&) const = default;
  };
  struct Star {
    Box<Assertion> lhs, rhs;
    bool operator==(const Star&) const = default;
  };
  struct Cond {
    BoolExpr cond;
    Box<Assertion> then_branch, else_branch;
    bool operator==(const Cond&) const = default;
  };
  std::variant<Fact, Chunk, Star, Cond> node;

  static Assertion fact(BoolExpr b) { return {Fact{std::move(b)}}; }
  static Assertion chunk(Pred p, std::vector<Expr> args, std::vector<std::string> patterns = {}) {
    return {Chunk{std::move(p), std::move(args), std::move(patterns)}};
  }
  static Assertion star(Assertion a, Assertion b) { return {Star{std::move(a), std::move(b)}}; }
  static Assertion cond(BoolExpr b, Assertion t, Assertion e) {
    return {Cond{std::move(b), std::move(t), std::move(e)}};
  }

  bool operator==(const Assertion&) const = default;
};

struct Command {
  struct Assign {
    std::string var;
    Expr value;
    bool operator==(const Assign&) const = default;
  };
  struct Seq {
    Box<Command> first, second;
    bool operator==(const Seq&) const = default;
  };
  struct If {
    BoolExpr cond;
    Box<Command> then_branch, else_branch;
    bool operator==(const If&) const = default;
  };
  struct While {
    BoolExpr cond;
    Assertion invariant;
    Box<Command> body;
    bool operator==(const While&) const = default;
  };
  struct Call {
    std::optional<std::string> result_var;
    std::string routine;
    std::vector<Expr> args;
    bool operator==(const Call&) const = default;
  };
  struct Malloc {
    std::string var;
    Int size;
    bool operator==(const Malloc&) const = default;
  };
  struct Read {
    std::string var;
    Expr address;
    bool operator==(const Read&) const = default;
  };
  struct Write {
    Expr address, value;
    bool operator==(const Write&) const = default;
  };
  struct Free {
    Expr address;
    bool operator==(const Free&) const = default;
  };
  struct Open {
    Pred pred;
    std::vector<Expr> args;
    std::size_t wildcards = 0;
    bool operator==(const Open&) const = default;
  };
  struct Close {
    Pred pred;
    std::vector<Expr> args;
    bool operator==(const Close&) const = default;
  };
  struct Skip {
    bool operator==(const Skip&) const = default;
  };
  struct Message {
    std::string text;
    bool operator==(const Message&) const = default;
  };

  using Node = std::variant<Assign, Seq, If, While, Call, Malloc, Read, Write, Free, Open, Close,
                            Skip, Message>;
  Node node;
  SourceLoc loc{};

  // Structural equality; source locations are ignored.
  bool operator==(const Command& o) const { return node == o.node; }
};

struct PredicateDef {
  std::string name;
  std::vector<std::string> params;
  Assertion body;
  SourceLoc loc{};
  bool operator==(const PredicateDef& o) const {
    return name == o.name && params == o.params && body == o.body;
  }
};

struct RoutineDef {
  std::string name;
  std::vector<std::string> params;
  Assertion pre, post;
  Box<Command> body;
  SourceLoc loc{};
  bool operator==(const RoutineDef& o) const {
    return name == o.name && params == o.params && pre == o.pre && post == o.post &&
           body == o.body;
  }
};

struct Program {
  std::vector<PredicateDef> predicates;
  std::vector<RoutineDef> routines;
  Box<Command> main{Command{Command::Skip{}}};

  const PredicateDef* find_predicate(const std::string& name) const {
    for (const auto& p : predicates)
      if (p.name == name) return &p;
    return nullptr;
  }
  const RoutineDef* find_routine(const std::string& name) const {
    for (const auto& r : routines)
      if (r.name == name) return &r;
    return nullptr;
  }

  bool operator==(const Program&) const = default;
};

// Variable the callee stores its return value in.
inline constexpr const char* kResultVar = "result";

}  // namespace fvf
