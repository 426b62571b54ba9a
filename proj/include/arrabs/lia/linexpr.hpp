#pragma once

#include "arrabs/lia/integer.hpp"
#include "arrabs/lia/var.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace arrabs::lia {

/// Affine integer expression sum(c_i * v_i) + k. Terms are kept sorted by
/// variable with nonzero coefficients.
class LinExpr {
 public:
  using Term = std::pair<Var, Int>;

  LinExpr() = default;
  LinExpr(Int constant) : constant_(std::move(constant)) {}  // NOLINT
  LinExpr(long long constant) : constant_(constant) {}        // NOLINT
  static LinExpr of(Var v, Int coeff = 1);

  const std::vector<Term>& terms() const { return terms_; }
  const Int& constant() const { return constant_; }
  Int coeff(Var v) const;
  bool contains(Var v) const;
  bool is_constant() const { return terms_.empty(); }
  /// gcd of the variable coefficients; 0 for a constant.
  Int content() const;

  void add_term(Var v, const Int& c);
  void set_constant(Int c) { constant_ = std::move(c); }

  LinExpr operator-() const;
  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(const Int& k);
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(LinExpr a, const Int& k) { return a *= k; }
  friend LinExpr operator*(const Int& k, LinExpr a) { return a *= k; }

  /// Replaces v by e.
  LinExpr substitute(Var v, const LinExpr& e) const;
  /// Divides every coefficient and the constant exactly by d.
  LinExpr exact_div(const Int& d) const;

  Int evaluate(const std::function<Int(Var)>& value) const;

  friend bool operator==(const LinExpr&, const LinExpr&) = default;
  friend std::strong_ordering operator<=>(const LinExpr& a,
                                          const LinExpr& b);
  std::size_t hash() const;

 private:
  std::vector<Term> terms_;
  Int constant_ = 0;
};

/// Renders terms in variable-name order, e.g. "2*x - y + 3".
std::string to_string(const LinExpr& e);

}  // namespace arrabs::lia
