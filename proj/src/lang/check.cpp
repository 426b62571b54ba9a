#include "arrabs/lang/parser.hpp"

#include <algorithm>
#include <set>

namespace arrabs::lang {

namespace {

enum class Sort { Int, Bool };

class Checker {
 public:
  explicit Checker(const Program& p) : p_(p) {}

  void run() {
    declarations();
    statement(p_.body);
    if (p_.target) {
      in_target_ = true;
      for (const auto& b : p_.target->bound) {
        if (p_.declares(b)) throw LangError(p_.target->body->pos, "duplicate declaration of " + b);
      }
      bound_ = p_.target->bound;
      expect(p_.target->body, Sort::Bool, "target");
      bound_.clear();
      in_target_ = false;
    }
  }

 private:
  void declare(const std::string& n, Pos pos) {
    if (!names_.insert(n).second) throw LangError(pos, "duplicate declaration of " + n);
  }

  void check_type(const Type& t, Pos pos) {
    if (t.sort == Type::Sort::Enum && !p_.enumeration(t.enum_name))
      throw LangError(pos, "unknown type " + t.enum_name);
  }

  void declarations() {
    for (const auto& e : p_.enums) {
      declare(e.name, e.pos);
      for (const auto& v : e.values) declare(v, e.pos);
    }
    for (const auto* list : {&p_.params, &p_.locals})
      for (const auto& d : *list) {
        declare(d.name, d.pos);
        check_type(d.type, d.pos);
      }
    for (const auto& a : p_.arrays) {
      declare(a.name, a.pos);
      check_type(a.elem, a.pos);
      if (a.elem.is_bool()) throw LangError(a.pos, "array elements must be numeric");
      for (const auto& d : a.dims) {
        if (d->kind == Expr::Kind::IntLit) {
          if (d->value < 0) throw LangError(d->pos, "negative array length");
          continue;
        }
        const VarDecl* v = d->kind == Expr::Kind::Var ? p_.scalar(d->name) : nullptr;
        bool is_param = v && std::any_of(p_.params.begin(), p_.params.end(),
                                         [&](const VarDecl& x) { return x.name == d->name; });
        if (!is_param || !v->type.is_numeric())
          throw LangError(d->pos, "array length must be a literal or an integer parameter");
      }
    }
  }

  bool is_param(const std::string& n) const {
    return std::any_of(p_.params.begin(), p_.params.end(),
                       [&](const VarDecl& d) { return d.name == n; });
  }

  bool is_constant(const ExprPtr& e) const {
    switch (e->kind) {
      case Expr::Kind::IntLit:
        return true;
      case Expr::Kind::Var:
        return std::find(bound_.begin(), bound_.end(), e->name) == bound_.end() &&
               !p_.scalar(e->name) && p_.enum_constant(e->name).has_value();
      case Expr::Kind::Neg:
      case Expr::Kind::Add:
      case Expr::Kind::Sub:
      case Expr::Kind::Mul:
        return std::all_of(e->args.begin(), e->args.end(),
                           [&](const ExprPtr& a) { return is_constant(a); });
      default:
        return false;
    }
  }

  void expect(const ExprPtr& e, Sort s, const char* what) {
    if (sort(e) != s)
      throw LangError(e->pos, std::string("sort mismatch: ") + what + " must be " +
                                  (s == Sort::Bool ? "boolean" : "integer"));
  }

  Sort sort(const ExprPtr& e) {
    using K = Expr::Kind;
    switch (e->kind) {
      case K::IntLit:
        return Sort::Int;
      case K::BoolLit:
        return Sort::Bool;
      case K::Var: {
        if (std::find(bound_.begin(), bound_.end(), e->name) != bound_.end()) return Sort::Int;
        if (const VarDecl* d = p_.scalar(e->name))
          return d->type.is_bool() ? Sort::Bool : Sort::Int;
        if (p_.enum_constant(e->name)) return Sort::Int;
        if (p_.array(e->name)) throw LangError(e->pos, "sort mismatch: array " + e->name + " used as scalar");
        throw LangError(e->pos, "unknown identifier " + e->name);
      }
      case K::Read: {
        const ArrayDecl* a = p_.array(e->name);
        if (!a) {
          if (p_.declares(e->name)) throw LangError(e->pos, "sort mismatch: " + e->name + " is not an array");
          throw LangError(e->pos, "unknown identifier " + e->name);
        }
        if (e->old && !in_target_) throw LangError(e->pos, "old() is only allowed in ensures");
        if (a->dims.size() != e->args.size())
          throw LangError(e->pos, "sort mismatch: array " + e->name + " has " +
                                      std::to_string(a->dims.size()) + " dimension(s)");
        for (const auto& i : e->args) expect(i, Sort::Int, "array index");
        return Sort::Int;
      }
      case K::Neg:
        expect(e->args[0], Sort::Int, "operand of -");
        return Sort::Int;
      case K::Not:
        expect(e->args[0], Sort::Bool, "operand of !");
        return Sort::Bool;
      case K::Add:
      case K::Sub:
        expect(e->args[0], Sort::Int, "arithmetic operand");
        expect(e->args[1], Sort::Int, "arithmetic operand");
        return Sort::Int;
      case K::Mul:
        expect(e->args[0], Sort::Int, "arithmetic operand");
        expect(e->args[1], Sort::Int, "arithmetic operand");
        if (!is_constant(e->args[0]) && !is_constant(e->args[1]))
          throw LangError(e->pos, "nonlinear multiplication");
        return Sort::Int;
      case K::Eq:
      case K::Ne: {
        Sort a = sort(e->args[0]);
        if (sort(e->args[1]) != a) throw LangError(e->pos, "sort mismatch in comparison");
        return Sort::Bool;
      }
      case K::Lt:
      case K::Le:
      case K::Gt:
      case K::Ge:
        expect(e->args[0], Sort::Int, "comparison operand");
        expect(e->args[1], Sort::Int, "comparison operand");
        return Sort::Bool;
      case K::And:
      case K::Or:
      case K::Implies:
        expect(e->args[0], Sort::Bool, "logical operand");
        expect(e->args[1], Sort::Bool, "logical operand");
        return Sort::Bool;
      case K::Divides:
        if (e->args[0]->value <= 0) throw LangError(e->pos, "divides() needs a positive modulus");
        expect(e->args[1], Sort::Int, "divides operand");
        return Sort::Bool;
      case K::Forall:
      case K::Exists: {
        if (!in_target_) throw LangError(e->pos, "quantifiers are only allowed in ensures");
        std::size_t mark = bound_.size();
        for (const auto& b : e->bound) {
          if (p_.declares(b)) throw LangError(e->pos, "duplicate declaration of " + b);
          bound_.push_back(b);
        }
        expect(e->args[0], Sort::Bool, "quantifier body");
        bound_.resize(mark);
        return Sort::Bool;
      }
    }
    return Sort::Int;
  }

  void assignable(const std::string& x, Pos pos) {
    if (p_.array(x)) throw LangError(pos, "sort mismatch: cannot assign array " + x);
    if (!p_.scalar(x)) throw LangError(pos, "unknown identifier " + x);
    if (is_param(x)) throw LangError(pos, "cannot assign parameter " + x);
  }

  void statement(const Stmt& s) {
    using K = Stmt::Kind;
    switch (s.kind) {
      case K::Seq:
        for (const auto& c : s.children) statement(c);
        return;
      case K::Assign: {
        assignable(s.target, s.pos);
        Sort want = p_.scalar(s.target)->type.is_bool() ? Sort::Bool : Sort::Int;
        expect(s.value, want, "assigned value");
        return;
      }
      case K::Havoc:
        assignable(s.target, s.pos);
        return;
      case K::Write: {
        const ArrayDecl* a = p_.array(s.target);
        if (!a) {
          if (p_.declares(s.target))
            throw LangError(s.pos, "sort mismatch: " + s.target + " is not an array");
          throw LangError(s.pos, "unknown identifier " + s.target);
        }
        if (a->dims.size() != s.index.size())
          throw LangError(s.pos, "sort mismatch: array " + s.target + " has " +
                                     std::to_string(a->dims.size()) + " dimension(s)");
        for (const auto& i : s.index) expect(i, Sort::Int, "array index");
        expect(s.value, Sort::Int, "stored value");
        return;
      }
      case K::If:
      case K::While:
        expect(s.cond, Sort::Bool, "condition");
        for (const auto& c : s.children) statement(c);
        return;
      case K::Assume:
      case K::Assert:
      case K::BoundsCheck:
        expect(s.cond, Sort::Bool, "condition");
        return;
    }
  }

  const Program& p_;
  std::set<std::string> names_;
  std::vector<std::string> bound_;
  bool in_target_ = false;
};

}  // namespace

void check_program(const Program& p) { Checker(p).run(); }

}  // namespace arrabs::lang
