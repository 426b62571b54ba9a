#include "arrabs/lang/ast.hpp"

#include <algorithm>

namespace arrabs::lang {

bool is_comparison(Expr::Kind k) {
  using K = Expr::Kind;
  return k == K::Eq || k == K::Ne || k == K::Lt || k == K::Le || k == K::Gt || k == K::Ge;
}

bool is_boolean_connective(Expr::Kind k) {
  using K = Expr::Kind;
  return k == K::And || k == K::Or || k == K::Implies || k == K::Not;
}

namespace {
ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
}  // namespace

ExprPtr int_lit(Int v, Pos p) {
  Expr e;
  e.kind = Expr::Kind::IntLit;
  e.value = std::move(v);
  e.pos = p;
  return make(std::move(e));
}

ExprPtr bool_lit(bool b, Pos p) {
  Expr e;
  e.kind = Expr::Kind::BoolLit;
  e.value = b ? 1 : 0;
  e.pos = p;
  return make(std::move(e));
}

ExprPtr var(std::string name, Pos p) {
  Expr e;
  e.kind = Expr::Kind::Var;
  e.name = std::move(name);
  e.pos = p;
  return make(std::move(e));
}

ExprPtr read(std::string array, std::vector<ExprPtr> idx, bool old, Pos p) {
  Expr e;
  e.kind = Expr::Kind::Read;
  e.name = std::move(array);
  e.args = std::move(idx);
  e.old = old;
  e.pos = p;
  return make(std::move(e));
}

ExprPtr unary(Expr::Kind k, ExprPtr a, Pos p) {
  Expr e;
  e.kind = k;
  e.args = {std::move(a)};
  e.pos = p;
  return make(std::move(e));
}

ExprPtr binary(Expr::Kind k, ExprPtr a, ExprPtr b, Pos p) {
  Expr e;
  e.kind = k;
  e.args = {std::move(a), std::move(b)};
  e.pos = p;
  return make(std::move(e));
}

ExprPtr divides(Int m, ExprPtr x, Pos p) {
  Expr e;
  e.kind = Expr::Kind::Divides;
  e.args = {int_lit(std::move(m), p), std::move(x)};
  e.pos = p;
  return make(std::move(e));
}

ExprPtr quantified(Expr::Kind k, std::vector<std::string> vars, ExprPtr body, Pos p) {
  Expr e;
  e.kind = k;
  e.bound = std::move(vars);
  e.args = {std::move(body)};
  e.pos = p;
  return make(std::move(e));
}

ExprPtr conjunction(const std::vector<ExprPtr>& cs) {
  if (cs.empty()) return bool_lit(true);
  ExprPtr r = cs.front();
  for (std::size_t i = 1; i < cs.size(); ++i) r = binary(Expr::Kind::And, r, cs[i]);
  return r;
}

bool same(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->value != b->value || a->name != b->name ||
      a->old != b->old || a->bound != b->bound || a->args.size() != b->args.size())
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!same(a->args[i], b->args[i])) return false;
  return true;
}

bool contains_read(const ExprPtr& e) {
  if (!e) return false;
  if (e->kind == Expr::Kind::Read) return true;
  return std::any_of(e->args.begin(), e->args.end(), contains_read);
}

namespace {
void names_impl(const ExprPtr& e, std::vector<std::string>& bound,
                std::vector<std::string>& out) {
  if (!e) return;
  if (e->kind == Expr::Kind::Var) {
    if (std::find(bound.begin(), bound.end(), e->name) == bound.end() &&
        std::find(out.begin(), out.end(), e->name) == out.end())
      out.push_back(e->name);
    return;
  }
  std::size_t mark = bound.size();
  bound.insert(bound.end(), e->bound.begin(), e->bound.end());
  for (const auto& a : e->args) names_impl(a, bound, out);
  bound.resize(mark);
}
}  // namespace

void collect_names(const ExprPtr& e, std::vector<std::string>& out) {
  std::vector<std::string> bound;
  names_impl(e, bound, out);
}

ExprPtr rename_vars(const ExprPtr& e,
                    const std::vector<std::pair<std::string, ExprPtr>>& sub) {
  if (!e) return e;
  if (e->kind == Expr::Kind::Var) {
    for (const auto& [n, r] : sub)
      if (n == e->name) return r;
    return e;
  }
  auto inner = sub;
  if (!e->bound.empty())
    inner.erase(std::remove_if(inner.begin(), inner.end(),
                               [&](const auto& kv) {
                                 return std::find(e->bound.begin(), e->bound.end(),
                                                  kv.first) != e->bound.end();
                               }),
                inner.end());
  bool changed = false;
  std::vector<ExprPtr> args;
  for (const auto& a : e->args) {
    args.push_back(rename_vars(a, inner));
    changed = changed || args.back() != a;
  }
  if (!changed) return e;
  Expr copy = *e;
  copy.args = std::move(args);
  return std::make_shared<const Expr>(std::move(copy));
}

Stmt Stmt::seq(std::vector<Stmt> ss) {
  Stmt s;
  s.kind = Kind::Seq;
  s.children = std::move(ss);
  return s;
}

Stmt Stmt::assign(std::string x, ExprPtr e, Pos p) {
  Stmt s;
  s.kind = Kind::Assign;
  s.target = std::move(x);
  s.value = std::move(e);
  s.pos = p;
  return s;
}

Stmt Stmt::havoc(std::string x, Pos p) {
  Stmt s;
  s.kind = Kind::Havoc;
  s.target = std::move(x);
  s.pos = p;
  return s;
}

Stmt Stmt::write(std::string a, std::vector<ExprPtr> idx, ExprPtr v, Pos p) {
  Stmt s;
  s.kind = Kind::Write;
  s.target = std::move(a);
  s.index = std::move(idx);
  s.value = std::move(v);
  s.pos = p;
  return s;
}

namespace {
Stmt as_seq(Stmt s) {
  if (s.kind == Stmt::Kind::Seq) return s;
  return Stmt::seq({std::move(s)});
}
}  // namespace

Stmt Stmt::if_(ExprPtr c, Stmt then, Stmt otherwise, Pos p) {
  then = as_seq(std::move(then));
  otherwise = as_seq(std::move(otherwise));
  Stmt s;
  s.kind = Kind::If;
  s.cond = std::move(c);
  s.children = {std::move(then), std::move(otherwise)};
  s.pos = p;
  return s;
}

Stmt Stmt::while_(ExprPtr c, Stmt body, Pos p) {
  body = as_seq(std::move(body));
  Stmt s;
  s.kind = Kind::While;
  s.cond = std::move(c);
  s.children = {std::move(body)};
  s.pos = p;
  return s;
}

Stmt Stmt::assume(ExprPtr c, Pos p) {
  Stmt s;
  s.kind = Kind::Assume;
  s.cond = std::move(c);
  s.pos = p;
  return s;
}

Stmt Stmt::assert_(ExprPtr c, Pos p) {
  Stmt s;
  s.kind = Kind::Assert;
  s.cond = std::move(c);
  s.pos = p;
  return s;
}

Stmt Stmt::bounds_check(ExprPtr c, Pos p) {
  Stmt s;
  s.kind = Kind::BoundsCheck;
  s.cond = std::move(c);
  s.pos = p;
  return s;
}

bool same(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.target != b.target || a.index.size() != b.index.size() ||
      a.children.size() != b.children.size() || !same(a.value, b.value) ||
      !same(a.cond, b.cond))
    return false;
  for (std::size_t i = 0; i < a.index.size(); ++i)
    if (!same(a.index[i], b.index[i])) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same(a.children[i], b.children[i])) return false;
  return true;
}

bool contains_loop(const Stmt& s) {
  if (s.kind == Stmt::Kind::While) return true;
  return std::any_of(s.children.begin(), s.children.end(), contains_loop);
}

const VarDecl* Program::scalar(const std::string& n) const {
  for (const auto* list : {&params, &locals})
    for (const auto& d : *list)
      if (d.name == n) return &d;
  return nullptr;
}

const ArrayDecl* Program::array(const std::string& n) const {
  for (const auto& a : arrays)
    if (a.name == n) return &a;
  return nullptr;
}

const EnumDecl* Program::enumeration(const std::string& n) const {
  for (const auto& e : enums)
    if (e.name == n) return &e;
  return nullptr;
}

std::optional<Int> Program::enum_constant(const std::string& n) const {
  for (const auto& e : enums)
    for (std::size_t i = 0; i < e.values.size(); ++i)
      if (e.values[i] == n) return Int(i);
  return std::nullopt;
}

bool Program::declares(const std::string& n) const {
  return scalar(n) || array(n) || enumeration(n) || enum_constant(n) || n == name;
}

std::string Program::fresh_name(const std::string& prefix) const {
  for (int i = 0;; ++i) {
    std::string n = prefix + std::to_string(i);
    if (!declares(n)) return n;
  }
}

namespace {
bool same_decls(const std::vector<VarDecl>& a, const std::vector<VarDecl>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || !(a[i].type == b[i].type)) return false;
  return true;
}
}  // namespace

bool same(const Program& a, const Program& b) {
  if (a.name != b.name || !same_decls(a.params, b.params) ||
      !same_decls(a.locals, b.locals) || a.arrays.size() != b.arrays.size() ||
      a.enums.size() != b.enums.size() || !same(a.body, b.body) ||
      a.target.has_value() != b.target.has_value())
    return false;
  for (std::size_t i = 0; i < a.enums.size(); ++i)
    if (a.enums[i].name != b.enums[i].name || a.enums[i].values != b.enums[i].values)
      return false;
  for (std::size_t i = 0; i < a.arrays.size(); ++i) {
    const auto &x = a.arrays[i], &y = b.arrays[i];
    if (x.name != y.name || !(x.elem == y.elem) || x.dims.size() != y.dims.size())
      return false;
    for (std::size_t d = 0; d < x.dims.size(); ++d)
      if (!same(x.dims[d], y.dims[d])) return false;
  }
  if (a.target &&
      (a.target->bound != b.target->bound || !same(a.target->body, b.target->body)))
    return false;
  return true;
}

}  // namespace arrabs::lang
