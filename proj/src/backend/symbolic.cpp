#include "arrabs/backend/symbolic.hpp"

#include "arrabs/lang/convert.hpp"
#include "arrabs/lang/printer.hpp"

namespace arrabs::backend {

using lang::Expr;
using lang::ExprPtr;
using lang::NotArithmetic;
using K = Expr::Kind;

namespace {

bool is_bool_var(const ExprPtr& e, const SymbolicEnv& env) {
  if (e->kind != K::Var || !env.program) return false;
  const lang::VarDecl* d = env.program->scalar(e->name);
  return d && d->type.is_bool();
}

bool bool_side(const ExprPtr& x, const SymbolicEnv& env) {
  return x->kind == K::BoolLit || is_bool_var(x, env) || lang::is_comparison(x->kind) ||
         lang::is_boolean_connective(x->kind);
}

}  // namespace

lia::LinExpr sym_int(const ExprPtr& e, const SymbolicEnv& env) {
  switch (e->kind) {
    case K::IntLit:
      return lia::LinExpr(e->value);
    case K::Var:
      if (env.program && !env.program->scalar(e->name))
        if (auto c = env.program->enum_constant(e->name)) return lia::LinExpr(*c);
      if (is_bool_var(e, env)) throw NotArithmetic("boolean " + e->name + " used as integer");
      return env.int_value(e->name);
    case K::Neg:
      return -sym_int(e->args[0], env);
    case K::Add:
      return sym_int(e->args[0], env) + sym_int(e->args[1], env);
    case K::Sub:
      return sym_int(e->args[0], env) - sym_int(e->args[1], env);
    case K::Mul: {
      lia::LinExpr a = sym_int(e->args[0], env), b = sym_int(e->args[1], env);
      if (a.is_constant()) return b * a.constant();
      if (b.is_constant()) return a * b.constant();
      throw NotArithmetic("nonlinear product " + lang::to_string(e));
    }
    default:
      throw NotArithmetic("not an integer expression: " + lang::to_string(e));
  }
}

lia::Formula sym_bool(const ExprPtr& e, const SymbolicEnv& env) {
  auto lin = [&](int i) { return sym_int(e->args[i], env); };
  switch (e->kind) {
    case K::BoolLit:
      return lia::f_bool(e->value != 0);
    case K::Var:
      if (!is_bool_var(e, env)) throw NotArithmetic("integer " + e->name + " used as condition");
      return env.bool_value(e->name);
    case K::Not:
      return lia::f_not(sym_bool(e->args[0], env));
    case K::And:
      return lia::f_and(sym_bool(e->args[0], env), sym_bool(e->args[1], env));
    case K::Or:
      return lia::f_or(sym_bool(e->args[0], env), sym_bool(e->args[1], env));
    case K::Implies:
      return lia::f_implies(sym_bool(e->args[0], env), sym_bool(e->args[1], env));
    case K::Eq:
    case K::Ne: {
      if (bool_side(e->args[0], env) || bool_side(e->args[1], env)) {
        lia::Formula iff = lia::f_iff(sym_bool(e->args[0], env), sym_bool(e->args[1], env));
        return e->kind == K::Eq ? iff : lia::f_not(iff);
      }
      return e->kind == K::Eq ? lia::f_eq(lin(0), lin(1)) : lia::f_ne(lin(0), lin(1));
    }
    case K::Lt:
      return lia::f_lt(lin(0), lin(1));
    case K::Le:
      return lia::f_le(lin(0), lin(1));
    case K::Gt:
      return lia::f_gt(lin(0), lin(1));
    case K::Ge:
      return lia::f_geq(lin(0), lin(1));
    case K::Divides:
      return lia::f_divides(e->args[0]->value, lin(1));
    default:
      throw NotArithmetic("not a condition: " + lang::to_string(e));
  }
}

SymbolicEnv identity_env(const lang::Program& p) {
  SymbolicEnv env;
  env.program = &p;
  env.int_value = [](const std::string& n) { return lia::LinExpr::of(lia::Var::named(n)); };
  env.bool_value = [](const std::string& n) { return lia::f_var(lia::Var::named(n)); };
  return env;
}

}  // namespace arrabs::backend
