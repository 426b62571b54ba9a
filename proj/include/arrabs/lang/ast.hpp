#pragma once

#include "arrabs/lia/integer.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace arrabs::lang {

using lia::Int;

struct Pos {
  int line = 0;
  int col = 0;
};

/// Scalar sort. Enum sorts are integers restricted to 0..k-1.
struct Type {
  enum class Sort { Int, Bool, Enum };
  Sort sort = Sort::Int;
  std::string enum_name;

  static Type integer() { return {}; }
  static Type boolean() { return {Sort::Bool, {}}; }
  static Type enumeration(std::string name) { return {Sort::Enum, std::move(name)}; }
  bool is_bool() const { return sort == Sort::Bool; }
  bool is_numeric() const { return sort != Sort::Bool; }
  friend bool operator==(const Type&, const Type&) = default;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind {
    IntLit, BoolLit, Var, Read,
    Neg, Not,
    Add, Sub, Mul,
    Eq, Ne, Lt, Le, Gt, Ge,
    And, Or, Implies,
    Divides,  // args: {modulus literal, expr}
    Forall, Exists,
  };

  Kind kind = Kind::IntLit;
  Pos pos;
  Int value = 0;            // IntLit, BoolLit (0/1)
  std::string name;         // Var, Read (array)
  bool old = false;         // Read of the initial array contents
  std::vector<ExprPtr> args;  // operands; indices for Read; body for quantifiers
  std::vector<std::string> bound;  // quantified names
};

bool is_comparison(Expr::Kind k);
bool is_boolean_connective(Expr::Kind k);

ExprPtr int_lit(Int v, Pos p = {});
ExprPtr bool_lit(bool b, Pos p = {});
ExprPtr var(std::string name, Pos p = {});
ExprPtr read(std::string array, std::vector<ExprPtr> idx, bool old = false, Pos p = {});
ExprPtr unary(Expr::Kind k, ExprPtr a, Pos p = {});
ExprPtr binary(Expr::Kind k, ExprPtr a, ExprPtr b, Pos p = {});
ExprPtr divides(Int m, ExprPtr e, Pos p = {});
ExprPtr quantified(Expr::Kind k, std::vector<std::string> vars, ExprPtr body, Pos p = {});
/// Conjunction of the given conditions (true when empty).
ExprPtr conjunction(const std::vector<ExprPtr>& cs);

/// Structural equality ignoring source positions.
bool same(const ExprPtr& a, const ExprPtr& b);
bool contains_read(const ExprPtr& e);
/// Free scalar identifiers (quantifier-bound names excluded).
void collect_names(const ExprPtr& e, std::vector<std::string>& out);
/// Replaces free occurrences of variables.
ExprPtr rename_vars(const ExprPtr& e, const std::vector<std::pair<std::string, ExprPtr>>& sub);

struct Stmt {
  enum class Kind {
    Seq,          // children
    Assign,       // target = value
    Havoc,        // target
    Write,        // target[index...] = value
    If,           // cond, children {then, else}
    While,        // cond, children {body}
    Assume,       // cond
    Assert,       // cond
    BoundsCheck,  // cond; failing means an out-of-bounds access
  };

  Kind kind = Kind::Seq;
  Pos pos;
  std::string target;
  std::vector<ExprPtr> index;
  ExprPtr value;
  ExprPtr cond;
  std::vector<Stmt> children;
  int site = -1;  // array access site id, kept through transformation

  static Stmt seq(std::vector<Stmt> ss = {});
  static Stmt assign(std::string x, ExprPtr e, Pos p = {});
  static Stmt havoc(std::string x, Pos p = {});
  static Stmt write(std::string a, std::vector<ExprPtr> idx, ExprPtr v, Pos p = {});
  static Stmt if_(ExprPtr c, Stmt then, Stmt otherwise = seq(), Pos p = {});
  static Stmt while_(ExprPtr c, Stmt body, Pos p = {});
  static Stmt assume(ExprPtr c, Pos p = {});
  static Stmt assert_(ExprPtr c, Pos p = {});
  static Stmt bounds_check(ExprPtr c, Pos p = {});
};

bool same(const Stmt& a, const Stmt& b);
bool contains_loop(const Stmt& s);

struct VarDecl {
  std::string name;
  Type type;
  Pos pos;
};

struct ArrayDecl {
  std::string name;
  std::vector<ExprPtr> dims;  // parameter names or literals
  Type elem;
  Pos pos;
};

struct EnumDecl {
  std::string name;
  std::vector<std::string> values;
  Pos pos;
};

/// `ensures forall k1, ...: body;` where body may read arrays at the final
/// state (t[e]) and the initial state (old(t)[e]).
struct Target {
  std::vector<std::string> bound;
  ExprPtr body;
};

struct Program {
  std::string name;
  std::vector<EnumDecl> enums;
  std::vector<VarDecl> params;
  std::vector<VarDecl> locals;
  std::vector<ArrayDecl> arrays;
  Stmt body;
  std::optional<Target> target;

  const VarDecl* scalar(const std::string& n) const;
  const ArrayDecl* array(const std::string& n) const;
  const EnumDecl* enumeration(const std::string& n) const;
  /// Enum constant lookup: its integer value.
  std::optional<Int> enum_constant(const std::string& n) const;
  bool declares(const std::string& n) const;
  /// A name of the form prefix<N> not yet used by any declaration.
  std::string fresh_name(const std::string& prefix) const;
};

bool same(const Program& a, const Program& b);

}  // namespace arrabs::lang
