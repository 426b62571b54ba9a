#include "arrabs/lang/printer.hpp"

#include <sstream>

namespace arrabs::lang {

namespace {

int level(const ExprPtr& e) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::Forall:
    case K::Exists:
      return 0;
    case K::Implies:
      return 1;
    case K::Or:
      return 2;
    case K::And:
      return 3;
    case K::Eq:
    case K::Ne:
    case K::Lt:
    case K::Le:
    case K::Gt:
    case K::Ge:
      return 4;
    case K::Add:
    case K::Sub:
      return 5;
    case K::Mul:
      return 6;
    case K::Neg:
    case K::Not:
      return 7;
    case K::IntLit:
      return e->value < 0 ? 7 : 8;
    default:
      return 8;
  }
}

const char* op_text(Expr::Kind k) {
  using K = Expr::Kind;
  switch (k) {
    case K::Add: return "+";
    case K::Sub: return "-";
    case K::Mul: return "*";
    case K::Eq: return "==";
    case K::Ne: return "!=";
    case K::Lt: return "<";
    case K::Le: return "<=";
    case K::Gt: return ">";
    case K::Ge: return ">=";
    case K::And: return "&&";
    case K::Or: return "||";
    case K::Implies: return "==>";
    default: return "?";
  }
}

void print(const ExprPtr& e, int ctx, std::ostream& os) {
  using K = Expr::Kind;
  const int lv = level(e);
  const bool paren = lv < ctx;
  if (paren) os << "(";
  switch (e->kind) {
    case K::IntLit:
      os << lia::to_string(e->value);
      break;
    case K::BoolLit:
      os << (e->value != 0 ? "true" : "false");
      break;
    case K::Var:
      os << e->name;
      break;
    case K::Read:
      if (e->old)
        os << "old(" << e->name << ")";
      else
        os << e->name;
      for (const auto& i : e->args) {
        os << "[";
        print(i, 0, os);
        os << "]";
      }
      break;
    case K::Neg:
    case K::Not: {
      os << (e->kind == K::Neg ? "-" : "!");
      const auto& a = e->args[0];
      bool wrap = a->kind == K::IntLit || a->kind == K::Neg;
      if (wrap) os << "(";
      print(a, wrap ? 0 : 7, os);
      if (wrap) os << ")";
      break;
    }
    case K::Divides:
      os << "divides(" << lia::to_string(e->args[0]->value) << ", ";
      print(e->args[1], 0, os);
      os << ")";
      break;
    case K::Forall:
    case K::Exists:
      os << (e->kind == K::Forall ? "forall " : "exists ");
      for (std::size_t i = 0; i < e->bound.size(); ++i) os << (i ? ", " : "") << e->bound[i];
      os << ": ";
      print(e->args[0], 0, os);
      break;
    default: {
      int left = lv, right = lv + 1;
      if (e->kind == K::Implies) {
        left = lv + 1;
        right = lv;
      }
      if (lv == 4) left = right = 5;
      print(e->args[0], left, os);
      os << " " << op_text(e->kind) << " ";
      print(e->args[1], right, os);
    }
  }
  if (paren) os << ")";
}

std::string type_name(const Type& t) {
  switch (t.sort) {
    case Type::Sort::Int: return "int";
    case Type::Sort::Bool: return "bool";
    case Type::Sort::Enum: return t.enum_name;
  }
  return "int";
}

struct Style {
  bool c_like = false;
};

void print_stmt(const Stmt& s, int ind, std::ostream& os, const Style& st);

void print_body(const Stmt& s, int ind, std::ostream& os, const Style& st) {
  os << "{\n";
  for (const auto& c : s.children) print_stmt(c, ind + 1, os, st);
  os << std::string(2 * ind, ' ') << "}";
}

void print_stmt(const Stmt& s, int ind, std::ostream& os, const Style& st) {
  using K = Stmt::Kind;
  const std::string pad(2 * ind, ' ');
  switch (s.kind) {
    case K::Seq:
      os << pad;
      print_body(s, ind, os, st);
      os << "\n";
      return;
    case K::Assign:
      os << pad << s.target << " = " << to_string(s.value) << ";\n";
      return;
    case K::Havoc:
      if (st.c_like)
        os << pad << s.target << " = random();\n";
      else
        os << pad << "havoc " << s.target << ";\n";
      return;
    case K::Write:
      os << pad << s.target;
      for (const auto& i : s.index) os << "[" << to_string(i) << "]";
      os << " = " << to_string(s.value) << ";\n";
      return;
    case K::If: {
      os << pad << "if (" << to_string(s.cond) << ") ";
      print_body(s.children[0], ind, os, st);
      const Stmt* e = &s.children[1];
      while (e->children.size() == 1 && e->children[0].kind == K::If) {
        const Stmt& inner = e->children[0];
        os << " else if (" << to_string(inner.cond) << ") ";
        print_body(inner.children[0], ind, os, st);
        e = &inner.children[1];
      }
      if (!e->children.empty()) {
        os << " else ";
        print_body(*e, ind, os, st);
      }
      os << "\n";
      return;
    }
    case K::While:
      os << pad << "while (" << to_string(s.cond) << ") ";
      print_body(s.children[0], ind, os, st);
      os << "\n";
      return;
    case K::Assume:
      os << pad << "assume(" << to_string(s.cond) << ");\n";
      return;
    case K::Assert:
      os << pad << "assert(" << to_string(s.cond) << ");\n";
      return;
    case K::BoundsCheck:
      os << pad << (st.c_like ? "assert(" : "boundscheck(") << to_string(s.cond) << ");\n";
      return;
  }
}

}  // namespace

std::string to_string(const ExprPtr& e) {
  std::ostringstream os;
  print(e, 0, os);
  return os.str();
}

std::string to_string(const Stmt& s, int indent) {
  std::ostringstream os;
  print_stmt(s, indent, os, Style{});
  return os.str();
}

std::string to_source(const Program& p) {
  std::ostringstream os;
  for (const auto& e : p.enums) {
    os << "enum " << e.name << " { ";
    for (std::size_t i = 0; i < e.values.size(); ++i) os << (i ? ", " : "") << e.values[i];
    os << " }\n";
  }
  os << "proc " << p.name << "(";
  for (std::size_t i = 0; i < p.params.size(); ++i)
    os << (i ? ", " : "") << p.params[i].name << ": " << type_name(p.params[i].type);
  os << ") {\n";
  for (const auto& d : p.locals) os << "  var " << d.name << ": " << type_name(d.type) << ";\n";
  for (const auto& a : p.arrays) {
    os << "  array " << a.name;
    for (const auto& d : a.dims) os << "[" << to_string(d) << "]";
    os << ": " << type_name(a.elem) << ";\n";
  }
  for (const auto& s : p.body.children) print_stmt(s, 1, os, Style{});
  os << "}\n";
  if (p.target) {
    os << "ensures ";
    if (!p.target->bound.empty()) {
      os << "forall ";
      for (std::size_t i = 0; i < p.target->bound.size(); ++i)
        os << (i ? ", " : "") << p.target->bound[i];
      os << ": ";
    }
    os << to_string(p.target->body) << ";\n";
  }
  return os.str();
}

std::string to_c_like(const Program& p) {
  std::ostringstream os;
  for (const auto& e : p.enums) {
    os << "enum " << e.name << " { ";
    for (std::size_t i = 0; i < e.values.size(); ++i) os << (i ? ", " : "") << e.values[i];
    os << " };\n";
  }
  auto ctype = [](const Type& t) {
    if (t.is_bool()) return std::string("_Bool");
    return std::string("int");
  };
  os << "void " << p.name << "(";
  for (std::size_t i = 0; i < p.params.size(); ++i)
    os << (i ? ", " : "") << ctype(p.params[i].type) << " " << p.params[i].name;
  os << ") {\n";
  for (const auto& d : p.locals) os << "  " << ctype(d.type) << " " << d.name << " = 0;\n";
  for (const auto& a : p.arrays) {
    os << "  int " << a.name;
    for (const auto& d : a.dims) os << "[" << to_string(d) << "]";
    os << ";\n";
  }
  Style st{true};
  for (const auto& s : p.body.children) print_stmt(s, 1, os, st);
  os << "}\n";
  return os.str();
}

}  // namespace arrabs::lang
