#pragma once

#include "arrabs/lia/linexpr.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace arrabs::lia {

/// Normalized arithmetic atom: either `expr >= 0` with coprime
/// coefficients, or `modulus | expr` with modulus >= 2 and coefficients
/// reduced modulo the modulus.
class Atom {
 public:
  enum class Kind { Ge, Div };

  /// Normalizes `e >= 0`; constant atoms collapse to a bool.
  static std::variant<bool, Atom> ge(const LinExpr& e);
  /// Normalizes `m | e`; m must be nonzero.
  static std::variant<bool, Atom> divides(const Int& m, const LinExpr& e);

  Kind kind() const { return kind_; }
  const LinExpr& expr() const { return expr_; }
  const Int& modulus() const { return modulus_; }

  /// For Ge atoms: the atom equivalent to the negation (-e - 1 >= 0).
  Atom negated_ge() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);

 private:
  Atom(Kind k, LinExpr e, Int m)
      : kind_(k), expr_(std::move(e)), modulus_(std::move(m)) {}
  Kind kind_ = Kind::Ge;
  LinExpr expr_;
  Int modulus_ = 0;
};

struct Model {
  std::map<Var, Int> ints;
  std::map<Var, bool> bools;

  Int int_value(Var v) const;
  bool bool_value(Var v) const;
};

class UnassignedVariable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable formula tree with structural sharing.
class Formula {
 public:
  enum class Kind { True, False, Atom, Bool, Not, And, Or, Exists, Forall };

  Formula();  // true

  Kind kind() const;
  const Atom& atom() const;
  Var bool_var() const;
  const std::vector<Formula>& children() const;
  const std::vector<Var>& bound() const;
  const Formula& body() const { return children().front(); }

  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  /// Atom, boolean variable, or the negation of either.
  bool is_literal() const;
  bool is_quantifier_free() const;

  std::size_t hash() const;
  friend bool operator==(const Formula& a, const Formula& b);

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
  friend Formula make_node(Node&& n);
};

struct Formula::Node {
  Kind kind = Kind::True;
  std::optional<Atom> atom;
  Var var;
  std::vector<Formula> kids;
  std::vector<Var> bound;
  std::size_t hash = 0;
};

// Constructors. All of them fold constants and flatten nested and/or.
Formula f_true();
Formula f_false();
Formula f_bool(bool b);
Formula f_atom(const Atom& a);
Formula f_var(Var b);  // boolean variable
Formula f_ge(const LinExpr& e);  // e >= 0
Formula f_le(const LinExpr& a, const LinExpr& b);
Formula f_lt(const LinExpr& a, const LinExpr& b);
Formula f_geq(const LinExpr& a, const LinExpr& b);
Formula f_gt(const LinExpr& a, const LinExpr& b);
Formula f_eq(const LinExpr& a, const LinExpr& b);
Formula f_ne(const LinExpr& a, const LinExpr& b);
Formula f_divides(const Int& m, const LinExpr& e);
Formula f_not(const Formula& f);
Formula f_and(std::vector<Formula> fs);
Formula f_or(std::vector<Formula> fs);
Formula f_and(const Formula& a, const Formula& b);
Formula f_or(const Formula& a, const Formula& b);
Formula f_implies(const Formula& a, const Formula& b);
Formula f_iff(const Formula& a, const Formula& b);
Formula f_exists(std::vector<Var> vars, const Formula& body);
Formula f_forall(std::vector<Var> vars, const Formula& body);

/// Negation normal form: negations only on Div atoms and boolean variables.
Formula nnf(const Formula& f);

struct FreeVars {
  std::set<Var> ints;
  std::set<Var> bools;
};
FreeVars free_vars(const Formula& f);

/// Capture-avoiding substitution of an integer variable.
Formula substitute(const Formula& f, Var v, const LinExpr& e);
Formula substitute(const Formula& f, const std::map<Var, LinExpr>& sub);
/// Renames free variables (integer or boolean).
Formula rename(const Formula& f, const std::map<Var, Var>& ren);

/// Evaluates a quantifier-free formula. Throws UnassignedVariable when the
/// model lacks a variable that occurs in f.
bool evaluate(const Formula& f, const Model& m);

/// Mini-language condition syntax, e.g. "(x >= 0 && y == x + 1)".
std::string to_string(const Formula& f);
std::string to_string(const Atom& a);

/// Number of nodes in the tree (shared subtrees counted once per use).
std::size_t size(const Formula& f);

}  // namespace arrabs::lia

template <>
struct std::hash<arrabs::lia::Formula> {
  std::size_t operator()(const arrabs::lia::Formula& f) const noexcept {
    return f.hash();
  }
};
