#pragma once

#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fvf/ast.hpp"
#include "fvf/syntax.hpp"

namespace fvf::testing {

inline std::string corpus_path(const std::string& file) { return std::string(FVF_CORPUS_DIR) + "/" + file; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::shared_ptr<const Program> load_corpus_program(const std::string& file) {
  return std::make_shared<const Program>(load_program(read_file(corpus_path(file))));
}

inline std::shared_ptr<const Program> load_source(const std::string& src) {
  return std::make_shared<const Program>(load_program(src));
}

// Random ASTs that respect the concrete grammar (identifiers avoid keywords
// and the "mb" name, points-to chunks keep their address fixed), so that
// printing and reparsing must give the same tree back.
class AstGen {
 public:
  explicit AstGen(std::uint64_t seed) : rng_(seed) {}

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return pick(0, 1) == 1; }

  std::string var() {
    static const char* const kNames[] = {"x", "y", "z", "i", "n", "r", "tail", "acc", "l1", "result"};
    return kNames[pick(0, 9)];
  }
  std::string pattern() {
    static const char* const kNames[] = {"v", "w", "d", "q2", "next"};
    return kNames[pick(0, 4)];
  }
  std::string pred_name() {
    static const char* const kNames[] = {"list", "tree", "seg"};
    return kNames[pick(0, 2)];
  }
  std::string routine_name() {
    static const char* const kNames[] = {"f", "go", "range", "swap"};
    return kNames[pick(0, 3)];
  }

  Expr expr(int depth) {
    int k = depth <= 0 ? pick(0, 1) : pick(0, 3);
    switch (k) {
      case 0: return Expr::lit(pick(0, 4) == 0 ? -pick(1, 50) : pick(0, 99));
      case 1: return Expr::var(var());
      case 2: return Expr::add(expr(depth - 1), expr(depth - 1));
      default: return Expr::sub(expr(depth - 1), expr(depth - 1));
    }
  }

  BoolExpr bexpr(int depth) {
    int k = depth <= 0 ? pick(0, 1) : pick(0, 2);
    switch (k) {
      case 0: return BoolExpr::eq(expr(depth - 1), expr(depth - 1));
      case 1: return BoolExpr::lt(expr(depth - 1), expr(depth - 1));
      default: return BoolExpr::negate(bexpr(depth - 1));
    }
  }

  std::vector<Expr> exprs(int n, int depth) {
    std::vector<Expr> out;
    for (int i = 0; i < n; ++i) out.push_back(expr(depth));
    return out;
  }

  Assertion chunk(int depth) {
    switch (pick(0, 2)) {
      case 0: {
        if (coin()) return Assertion::chunk(Pred::points_to(), {expr(depth)}, {pattern()});
        return Assertion::chunk(Pred::points_to(), exprs(2, depth));
      }
      case 1: {
        int fixed = pick(0, 2);
        std::vector<std::string> pats;
        for (int i = fixed; i < 2; ++i) pats.push_back(pattern());
        return Assertion::chunk(Pred::malloc_block(), exprs(fixed, depth), pats);
      }
      default: {
        int arity = pick(0, 3), fixed = pick(0, arity);
        std::vector<std::string> pats;
        for (int i = fixed; i < arity; ++i) pats.push_back(pattern());
        return Assertion::chunk(Pred::user(pred_name()), exprs(fixed, depth), pats);
      }
    }
  }

  Assertion assertion(int depth) {
    int k = depth <= 0 ? pick(0, 1) : pick(0, 3);
    switch (k) {
      case 0: return Assertion::fact(bexpr(depth - 1));
      case 1: return chunk(depth - 1);
      case 2: return Assertion::star(assertion(depth - 1), assertion(depth - 1));
      default: return Assertion::cond(bexpr(depth - 1), assertion(depth - 1), assertion(depth - 1));
    }
  }

  Command command(int depth) {
    int k = depth <= 0 ? pick(0, 9) : pick(0, 12);
    auto e = [&] { return expr(std::max(0, depth - 1)); };
    switch (k) {
      case 0: return {Command::Assign{var(), e()}};
      case 1: {
        std::optional<std::string> ret;
        if (coin()) ret = var();
        return {Command::Call{ret, routine_name(), exprs(pick(0, 3), std::max(0, depth - 1))}};
      }
      case 2: return {Command::Malloc{var(), pick(0, 5)}};
      case 3: return {Command::Read{var(), e()}};
      case 4: return {Command::Write{e(), e()}};
      case 5: return {Command::Free{e()}};
      case 6: {
        int arity = pick(0, 3), wild = pick(0, arity);
        return {Command::Open{Pred::user(pred_name()), exprs(arity - wild, std::max(0, depth - 1)),
                              static_cast<std::size_t>(wild)}};
      }
      case 7: return {Command::Close{Pred::user(pred_name()), exprs(pick(0, 3), std::max(0, depth - 1))}};
      case 8: return {Command::Skip{}};
      case 9: {
        static const char* const kTexts[] = {"", "hello", "x = 1; y < 2", "(*) |-> ?_", "a\\b"};
        return {Command::Message{kTexts[pick(0, 4)]}};
      }
      case 10: return {Command::Seq{command(depth - 1), command(depth - 1)}};
      case 11: return {Command::If{bexpr(depth - 1), command(depth - 1), command(depth - 1)}};
      default: return {Command::While{bexpr(depth - 1), assertion(depth - 1), command(depth - 1)}};
    }
  }

  Program program(int depth) {
    Program p;
    for (int i = pick(0, 2); i > 0; --i)
      p.predicates.push_back({pred_name(), params(), assertion(depth), {}});
    for (int i = pick(0, 2); i > 0; --i)
      p.routines.push_back({routine_name(), params(), assertion(depth), assertion(depth), command(depth), {}});
    p.main = command(depth);
    return p;
  }

  std::vector<std::string> params() {
    std::vector<std::string> out;
    for (int i = pick(0, 3); i > 0; --i) out.push_back(var());
    return out;
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace fvf::testing
