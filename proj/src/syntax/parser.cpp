#include <cctype>
#include <charconv>
#include <limits>
#include <optional>
#include <sstream>

#include "fvf/syntax.hpp"

namespace fvf {

namespace {

std::string render_expected(const std::vector<std::string>& expected, const std::string& found) {
  std::ostringstream os;
  os << "expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) os << (i + 1 == expected.size() ? " or " : ", ");
    os << expected[i];
  }
  os << ", found " << found;
  return os.str();
}

std::string render_loc(SourceLoc loc, const std::string& msg) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + msg;
}

enum class Tok { Ident, Keyword, Nat, String, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  SourceLoc loc;
  std::uint64_t nat = 0;
};

const std::set<std::string, std::less<>> kKeywords = {
    "predicate", "routine", "req",    "ens",  "if",   "then", "else",   "while", "inv",
    "do",        "malloc",  "free",   "open", "close", "skip", "message"};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    SourceLoc loc{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string word(src.substr(i, j - i));
      Tok kind = kKeywords.count(word) ? Tok::Keyword : Tok::Ident;
      out.push_back({kind, word, loc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      std::uint64_t value = 0;
      auto [ptr, ec] = std::from_chars(src.data() + i, src.data() + j, value);
      if (ec != std::errc() || value > static_cast<std::uint64_t>(std::numeric_limits<Int>::max()) + 1)
        throw ParseError(loc, "integer literal out of range");
      out.push_back({Tok::Nat, std::string(src.substr(i, j - i)), loc, value});
      advance(j - i);
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < src.size() && src[j] != '"') {
        unsigned char ch = static_cast<unsigned char>(src[j]);
        if (ch < 0x20 || ch > 0x7e) throw ParseError(loc, "non-printable character in string");
        ++j;
      }
      if (j >= src.size()) throw ParseError(loc, "unterminated string literal");
      out.push_back({Tok::String, std::string(src.substr(i + 1, j - i - 1)), loc});
      advance(j + 1 - i);
      continue;
    }
    static const char* const kPuncts[] = {"|->", ":=", "(", ")", "[", "]", ";", ",",
                                          "=",   "<",  "!", "+", "-", "*", "?"};
    bool matched = false;
    for (const char* p : kPuncts) {
      std::string_view pv(p);
      if (src.substr(i, pv.size()) == pv) {
        out.push_back({Tok::Punct, std::string(pv), loc});
        advance(pv.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(loc, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Program program() {
    Program p;
    while (true) {
      if (is_kw("predicate")) {
        p.predicates.push_back(predicate_def());
      } else if (is_kw("routine")) {
        p.routines.push_back(routine_def());
      } else {
        break;
      }
    }
    if (peek().kind != Tok::End) p.main = command();
    expect_end();
    return p;
  }

  template <class F>
  auto whole(F f) {
    auto r = f();
    expect_end();
    return r;
  }

  Command command() {
    Command first = simple();
    if (!is_punct(";")) return first;
    next();
    Command rest = command();
    SourceLoc loc = first.loc;
    return Command{Command::Seq{std::move(first), std::move(rest)}, loc};
  }

  Assertion assertion() {
    Assertion lhs = aterm();
    if (!is_punct("*")) return lhs;
    next();
    return Assertion::star(std::move(lhs), assertion());
  }

  Expr expr() {
    Expr e = term();
    while (is_punct("+") || is_punct("-")) {
      bool plus = next().text == "+";
      Expr rhs = term();
      e = plus ? Expr::add(std::move(e), std::move(rhs)) : Expr::sub(std::move(e), std::move(rhs));
    }
    return e;
  }

  BoolExpr bexpr() {
    if (is_punct("!")) {
      next();
      return BoolExpr::negate(bexpr());
    }
    if (is_punct("(")) {
      auto cmp = attempt([&] { return comparison(); });
      if (cmp) return *cmp;
      next();
      BoolExpr inner = bexpr();
      expect_punct(")");
      return inner;
    }
    return comparison();
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::optional<ParseError> furthest_;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool is_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool is_kw(std::string_view w) const { return peek().kind == Tok::Keyword && peek().text == w; }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::End:
        return "end of input";
      case Tok::String:
        return "string \"" + t.text + "\"";
      default:
        return "'" + t.text + "'";
    }
  }

  static bool later(SourceLoc a, SourceLoc b) {
    return a.line > b.line || (a.line == b.line && a.column > b.column);
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    ParseError here(peek().loc, std::move(expected), describe(peek()));
    if (furthest_ && later(furthest_->loc(), here.loc())) throw *furthest_;
    throw here;
  }

  template <class F>
  auto attempt(F f) -> std::optional<decltype(f())> {
    std::size_t saved = pos_;
    try {
      return f();
    } catch (const ParseError& e) {
      if (!furthest_ || later(e.loc(), furthest_->loc())) furthest_ = e;
      pos_ = saved;
      return std::nullopt;
    }
  }

  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail({"'" + std::string(p) + "'"});
    next();
  }
  void expect_kw(std::string_view w) {
    if (!is_kw(w)) fail({"'" + std::string(w) + "'"});
    next();
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail({"end of input"});
  }
  std::string ident() {
    if (peek().kind != Tok::Ident) fail({"identifier"});
    return next().text;
  }
  Int nat_value(const Token& t, bool negate) {
    if (negate) return t.nat == 0 ? 0 : static_cast<Int>(-static_cast<__int128>(t.nat));
    if (t.nat > static_cast<std::uint64_t>(std::numeric_limits<Int>::max()))
      throw ParseError(t.loc, "integer literal out of range");
    return static_cast<Int>(t.nat);
  }

  std::vector<std::string> params() {
    std::vector<std::string> ps;
    expect_punct("(");
    if (!is_punct(")")) {
      ps.push_back(ident());
      while (is_punct(",")) {
        next();
        ps.push_back(ident());
      }
    }
    expect_punct(")");
    return ps;
  }

  std::vector<Expr> args() {
    std::vector<Expr> as;
    expect_punct("(");
    if (!is_punct(")")) {
      as.push_back(expr());
      while (is_punct(",")) {
        next();
        as.push_back(expr());
      }
    }
    expect_punct(")");
    return as;
  }

  PredicateDef predicate_def() {
    SourceLoc loc = next().loc;
    PredicateDef d;
    d.loc = loc;
    d.name = ident();
    d.params = params();
    expect_punct("=");
    d.body = assertion();
    return d;
  }

  RoutineDef routine_def() {
    SourceLoc loc = next().loc;
    std::string name = ident();
    auto ps = params();
    expect_kw("req");
    Assertion pre = assertion();
    expect_kw("ens");
    Assertion post = assertion();
    expect_punct("=");
    Command body = command();
    return RoutineDef{std::move(name), std::move(ps), std::move(pre), std::move(post),
                      std::move(body), loc};
  }

  Expr term() {
    const Token& t = peek();
    if (t.kind == Tok::Nat) {
      next();
      return Expr::lit(nat_value(t, false));
    }
    if (t.kind == Tok::Ident) {
      next();
      return Expr::var(t.text);
    }
    if (is_punct("-") && peek(1).kind == Tok::Nat) {
      next();
      return Expr::lit(nat_value(next(), true));
    }
    if (is_punct("(")) {
      next();
      Expr e = expr();
      expect_punct(")");
      return e;
    }
    fail({"integer", "identifier", "'('"});
  }

  BoolExpr comparison() {
    Expr lhs = expr();
    if (is_punct("=")) {
      next();
      return BoolExpr::eq(std::move(lhs), expr());
    }
    if (is_punct("<")) {
      next();
      return BoolExpr::lt(std::move(lhs), expr());
    }
    fail({"'='", "'<'"});
  }

  Assertion aterm() {
    if (is_kw("if")) {
      next();
      BoolExpr b = bexpr();
      expect_kw("then");
      Assertion t = assertion();
      expect_kw("else");
      Assertion e = assertion();
      return Assertion::cond(std::move(b), std::move(t), std::move(e));
    }
    if (peek().kind == Tok::Ident && is_punct("(", 1)) {
      std::string name = next().text;
      Pred pred = name == "mb" ? Pred::malloc_block() : Pred::user(name);
      std::vector<Expr> as;
      std::vector<std::string> pats;
      next();
      if (!is_punct(")")) {
        bool first = true;
        while (first || is_punct(",")) {
          if (!first) next();
          first = false;
          if (is_punct("?")) {
            next();
            pats.push_back(ident());
          } else {
            if (!pats.empty()) fail({"'?' pattern (patterns must follow all expressions)"});
            as.push_back(expr());
          }
        }
      }
      expect_punct(")");
      return Assertion::chunk(std::move(pred), std::move(as), std::move(pats));
    }
    if (is_punct("!")) return Assertion::fact(bexpr());
    auto simple_atom = attempt([&]() -> Assertion {
      Expr lhs = expr();
      if (is_punct("|->")) {
        next();
        if (is_punct("?")) {
          next();
          return Assertion::chunk(Pred::points_to(), {std::move(lhs)}, {ident()});
        }
        return Assertion::chunk(Pred::points_to(), {std::move(lhs), expr()});
      }
      if (is_punct("=")) {
        next();
        return Assertion::fact(BoolExpr::eq(std::move(lhs), expr()));
      }
      if (is_punct("<")) {
        next();
        return Assertion::fact(BoolExpr::lt(std::move(lhs), expr()));
      }
      fail({"'|->'", "'='", "'<'"});
    });
    if (simple_atom) return *simple_atom;
    if (is_punct("(")) {
      next();
      Assertion inner = assertion();
      expect_punct(")");
      return inner;
    }
    fail({"assertion"});
  }

  Command simple() {
    SourceLoc loc = peek().loc;
    auto mk = [&](Command::Node n) { return Command{std::move(n), loc}; };
    if (is_punct("(")) {
      next();
      Command c = command();
      expect_punct(")");
      return c;
    }
    if (is_kw("skip")) {
      next();
      return mk(Command::Skip{});
    }
    if (is_kw("message")) {
      next();
      if (peek().kind != Tok::String) fail({"string literal"});
      return mk(Command::Message{next().text});
    }
    if (is_kw("if")) {
      next();
      BoolExpr b = bexpr();
      expect_kw("then");
      Command t = command();
      expect_kw("else");
      Command e = simple();
      return mk(Command::If{std::move(b), std::move(t), std::move(e)});
    }
    if (is_kw("while")) {
      next();
      BoolExpr b = bexpr();
      expect_kw("inv");
      Assertion inv = assertion();
      expect_kw("do");
      Command body = simple();
      return mk(Command::While{std::move(b), std::move(inv), std::move(body)});
    }
    if (is_kw("free")) {
      next();
      expect_punct("(");
      Expr e = expr();
      expect_punct(")");
      return mk(Command::Free{std::move(e)});
    }
    if (is_kw("open")) {
      next();
      std::string name = ident();
      std::vector<Expr> as;
      std::size_t wild = 0;
      expect_punct("(");
      if (!is_punct(")")) {
        bool first = true;
        while (first || is_punct(",")) {
          if (!first) next();
          first = false;
          if (is_punct("?")) {
            next();
            if (peek().kind != Tok::Ident || peek().text != "_") fail({"'_'"});
            next();
            ++wild;
          } else {
            if (wild > 0) fail({"'?_' (wildcards must follow all expressions)"});
            as.push_back(expr());
          }
        }
      }
      expect_punct(")");
      return mk(Command::Open{Pred::user(name), std::move(as), wild});
    }
    if (is_kw("close")) {
      next();
      std::string name = ident();
      return mk(Command::Close{Pred::user(name), args()});
    }
    if (is_punct("[")) {
      next();
      Expr addr = expr();
      expect_punct("]");
      expect_punct(":=");
      return mk(Command::Write{std::move(addr), expr()});
    }
    if (peek().kind == Tok::Ident) {
      std::string x = next().text;
      if (is_punct("(")) return mk(Command::Call{std::nullopt, x, args()});
      expect_punct(":=");
      if (is_kw("malloc")) {
        next();
        expect_punct("(");
        if (peek().kind != Tok::Nat) fail({"integer"});
        Int n = nat_value(next(), false);
        expect_punct(")");
        return mk(Command::Malloc{x, n});
      }
      if (is_punct("[")) {
        next();
        Expr addr = expr();
        expect_punct("]");
        return mk(Command::Read{x, std::move(addr)});
      }
      if (peek().kind == Tok::Ident && is_punct("(", 1)) {
        std::string r = next().text;
        return mk(Command::Call{x, r, args()});
      }
      return mk(Command::Assign{x, expr()});
    }
    fail({"command"});
  }
};

}  // namespace

ParseError::ParseError(SourceLoc loc, std::vector<std::string> expected, std::string found)
    : std::runtime_error(render_loc(loc, render_expected(expected, found))),
      loc_(loc),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

ParseError::ParseError(SourceLoc loc, std::string message)
    : std::runtime_error(render_loc(loc, message)), loc_(loc) {}

Program parse_program(std::string_view source) { return Parser(source).program(); }

Command parse_command(std::string_view source) {
  Parser p(source);
  return p.whole([&] { return p.command(); });
}

Assertion parse_assertion(std::string_view source) {
  Parser p(source);
  return p.whole([&] { return p.assertion(); });
}

Expr parse_expr(std::string_view source) {
  Parser p(source);
  return p.whole([&] { return p.expr(); });
}

BoolExpr parse_bool_expr(std::string_view source) {
  Parser p(source);
  return p.whole([&] { return p.bexpr(); });
}

}  // namespace fvf
