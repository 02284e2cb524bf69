#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fvf/ast.hpp"

namespace fvf {

// Lexical or syntactic error at a source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLoc loc, std::vector<std::string> expected, std::string found);
  ParseError(SourceLoc loc, std::string message);

  SourceLoc loc() const { return loc_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  SourceLoc loc_;
  std::vector<std::string> expected_;
  std::string found_;
};

// Syntax only; see load_program for the well-formedness pass.
Program parse_program(std::string_view source);
Command parse_command(std::string_view source);
Assertion parse_assertion(std::string_view source);
Expr parse_expr(std::string_view source);
BoolExpr parse_bool_expr(std::string_view source);

std::string to_string(const Expr& e);
std::string to_string(const BoolExpr& b);
std::string to_string(const Assertion& a);
std::string to_string(const Command& c);  // single line
std::string pretty_print(const Program& p);

// Variables a command may assign.
std::set<std::string> targets(const Command& c);

// Variables read by an expression, boolean expression or assertion
// (patterns bound by the assertion are excluded).
std::set<std::string> free_vars(const Expr& e);
std::set<std::string> free_vars(const BoolExpr& b);
std::set<std::string> free_vars(const Assertion& a);

struct StaticError {
  SourceLoc loc;
  std::string message;
};

std::vector<StaticError> check_well_formed(const Program& p);

// Parse errors and static errors, rendered as "line:col: message" lines.
class ProgramError : public std::runtime_error {
 public:
  explicit ProgramError(std::vector<StaticError> errors);
  const std::vector<StaticError>& errors() const { return errors_; }

 private:
  std::vector<StaticError> errors_;
};

// parse_program followed by check_well_formed; throws ProgramError.
Program load_program(std::string_view source);

}  // namespace fvf
