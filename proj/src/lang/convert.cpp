#include "arrabs/lang/convert.hpp"

#include "arrabs/lang/parser.hpp"
#include "arrabs/lang/printer.hpp"

namespace arrabs::lang {

namespace {

bool is_bool_name(const std::string& n, const FormulaContext& ctx) {
  if (ctx.bools.contains(n)) return true;
  if (ctx.program)
    if (const VarDecl* d = ctx.program->scalar(n)) return d->type.is_bool();
  return false;
}

}  // namespace

lia::LinExpr to_linexpr(const ExprPtr& e, const FormulaContext& ctx) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::IntLit:
      return lia::LinExpr(e->value);
    case K::Var:
      if (ctx.program && !ctx.program->scalar(e->name))
        if (auto c = ctx.program->enum_constant(e->name)) return lia::LinExpr(*c);
      if (is_bool_name(e->name, ctx)) throw NotArithmetic("boolean " + e->name + " used as integer");
      return lia::LinExpr::of(lia::Var::named(e->name));
    case K::Neg:
      return -to_linexpr(e->args[0], ctx);
    case K::Add:
      return to_linexpr(e->args[0], ctx) + to_linexpr(e->args[1], ctx);
    case K::Sub:
      return to_linexpr(e->args[0], ctx) - to_linexpr(e->args[1], ctx);
    case K::Mul: {
      lia::LinExpr a = to_linexpr(e->args[0], ctx), b = to_linexpr(e->args[1], ctx);
      if (a.is_constant()) return b * a.constant();
      if (b.is_constant()) return a * b.constant();
      throw NotArithmetic("nonlinear product " + to_string(e));
    }
    case K::Read:
      throw NotArithmetic("array read " + to_string(e));
    default:
      throw NotArithmetic("not an integer expression: " + to_string(e));
  }
}

lia::Formula to_formula(const ExprPtr& e, const FormulaContext& ctx) {
  using K = Expr::Kind;
  auto lin = [&](int i) { return to_linexpr(e->args[i], ctx); };
  switch (e->kind) {
    case K::BoolLit:
      return lia::f_bool(e->value != 0);
    case K::Var:
      if (!is_bool_name(e->name, ctx)) throw NotArithmetic("integer " + e->name + " used as condition");
      return lia::f_var(lia::Var::named(e->name));
    case K::Not:
      return lia::f_not(to_formula(e->args[0], ctx));
    case K::And:
      return lia::f_and(to_formula(e->args[0], ctx), to_formula(e->args[1], ctx));
    case K::Or:
      return lia::f_or(to_formula(e->args[0], ctx), to_formula(e->args[1], ctx));
    case K::Implies:
      return lia::f_implies(to_formula(e->args[0], ctx), to_formula(e->args[1], ctx));
    case K::Eq:
    case K::Ne: {
      auto bool_side = [&](const ExprPtr& x) {
        return x->kind == K::BoolLit || (x->kind == K::Var && is_bool_name(x->name, ctx)) ||
               is_comparison(x->kind) || is_boolean_connective(x->kind);
      };
      if (bool_side(e->args[0]) || bool_side(e->args[1])) {
        lia::Formula iff =
            lia::f_iff(to_formula(e->args[0], ctx), to_formula(e->args[1], ctx));
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
    case K::Forall:
    case K::Exists: {
      std::vector<lia::Var> vars;
      for (const auto& b : e->bound) vars.push_back(lia::Var::named(b));
      FormulaContext inner = ctx;
      for (const auto& b : e->bound) inner.bools.erase(b);
      lia::Formula body = to_formula(e->args[0], inner);
      return e->kind == K::Forall ? lia::f_forall(vars, body) : lia::f_exists(vars, body);
    }
    default:
      throw NotArithmetic("not a condition: " + to_string(e));
  }
}

lia::Formula parse_formula(const std::string& text, const FormulaContext& ctx) {
  return to_formula(parse_expr(text), ctx);
}

ExprPtr from_formula(const lia::Formula& f) { return parse_expr(lia::to_string(f)); }

}  // namespace arrabs::lang
