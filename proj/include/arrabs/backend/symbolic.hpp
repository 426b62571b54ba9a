#pragma once

#include "arrabs/lang/ast.hpp"
#include "arrabs/lia/formula.hpp"

#include <functional>
#include <string>

namespace arrabs::backend {

/// Interpretation of program variables for symbolic evaluation.
struct SymbolicEnv {
  const lang::Program* program = nullptr;
  std::function<lia::LinExpr(const std::string&)> int_value;
  std::function<lia::Formula(const std::string&)> bool_value;
};

/// Array-free expressions only; throws lang::NotArithmetic otherwise.
lia::LinExpr sym_int(const lang::ExprPtr& e, const SymbolicEnv& env);
lia::Formula sym_bool(const lang::ExprPtr& e, const SymbolicEnv& env);

/// Environment mapping every variable to the lia variable of the same name.
SymbolicEnv identity_env(const lang::Program& p);

}  // namespace arrabs::backend
