#pragma once

#include "arrabs/backend/octagon.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace arrabs::backend {

using Rat = boost::multiprecision::cpp_rational;

/// Affine equalities over n variables, kept in reduced row-echelon form.
/// Each row r encodes sum(r[i] * v_i) + r[n] == 0.
class AffineEqs {
 public:
  AffineEqs() = default;
  static AffineEqs top(std::size_t n);
  static AffineEqs bottom(std::size_t n);

  std::size_t dims() const { return n_; }
  bool is_bottom() const { return bottom_; }

  /// Meets with e == 0.
  void add_equality(const Linear& e);
  void forget(std::size_t v);
  /// v := e (e is evaluated in the state before the assignment).
  void assign(std::size_t v, const Linear& e);

  /// Rows scaled to integer coefficients, each meaning e == 0.
  std::vector<Linear> equalities() const;

  friend AffineEqs join(const AffineEqs& a, const AffineEqs& b);
  friend bool leq(const AffineEqs& a, const AffineEqs& b);
  friend bool operator==(const AffineEqs& a, const AffineEqs& b);

 private:
  using Row = std::vector<Rat>;
  void normalize();
  /// A point and direction vectors spanning the space.
  void generators(Row& point, std::vector<Row>& dirs) const;
  static AffineEqs from_generators(std::size_t n, const Row& point, std::vector<Row> dirs);

  std::size_t n_ = 0;
  bool bottom_ = false;
  std::vector<Row> rows_;
};

AffineEqs join(const AffineEqs& a, const AffineEqs& b);
bool leq(const AffineEqs& a, const AffineEqs& b);

}  // namespace arrabs::backend
