#pragma once

#include "arrabs/lang/ast.hpp"
#include "arrabs/lia/formula.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace arrabs::lang {

/// Name resolution for conversion to arithmetic: enum constants of the
/// program become literals; program booleans and `bools` become boolean
/// variables; every other identifier becomes an integer variable.
struct FormulaContext {
  const Program* program = nullptr;
  std::set<std::string> bools;
};

class NotArithmetic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Array-free linear expression; throws NotArithmetic otherwise.
lia::LinExpr to_linexpr(const ExprPtr& e, const FormulaContext& ctx = {});
/// Array-free condition; throws NotArithmetic otherwise.
lia::Formula to_formula(const ExprPtr& e, const FormulaContext& ctx = {});
/// Parses a condition in mini-language syntax directly to a formula.
lia::Formula parse_formula(const std::string& text, const FormulaContext& ctx = {});
/// Mini-language expression denoting f.
ExprPtr from_formula(const lia::Formula& f);

}  // namespace arrabs::lang
