#pragma once

#include "arrabs/lang/ast.hpp"

#include <stdexcept>
#include <string>

namespace arrabs::lang {

/// Syntax or static-check error; what() is "line:col: message".
class LangError : public std::runtime_error {
 public:
  LangError(Pos pos, const std::string& msg);
  Pos pos() const { return pos_; }
  const std::string& message() const { return msg_; }

 private:
  Pos pos_;
  std::string msg_;
};

/// Parses and checks a program.
Program parse_program(const std::string& text);

/// Parses a standalone condition or expression (no name resolution).
ExprPtr parse_expr(const std::string& text);

/// Static checks: unique declarations, known identifiers, sorts, array
/// arity, linearity, assignments only to local scalars.
void check_program(const Program& p);

}  // namespace arrabs::lang
