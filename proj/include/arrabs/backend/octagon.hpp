#pragma once

#include "arrabs/lia/integer.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace arrabs::backend {

using lia::Int;

/// Affine form sum(c_i * v_i) + constant over variable indices.
struct Linear {
  std::vector<std::pair<std::size_t, Int>> terms;
  Int constant = 0;
};

/// Octagon constraint a*v_i + b*v_j <= bound with a, b in {-1, 0, 1}
/// (b == 0 for unary constraints).
struct OctConstraint {
  std::size_t i = 0;
  int a = 1;
  std::size_t j = 0;
  int b = 0;
  Int bound = 0;
};

/// Difference-bound matrix over {+v, -v}: entry (p, q) bounds V_p - V_q
/// where V_2k = v_k and V_2k+1 = -v_k. Kept tightly closed by every
/// operation except widen.
class Octagon {
 public:
  using Bound = std::int64_t;
  static constexpr Bound kInf = std::int64_t{1} << 60;

  Octagon() = default;
  static Octagon top(std::size_t n);
  static Octagon bottom(std::size_t n);

  std::size_t dims() const { return n_; }
  bool is_bottom() const { return bottom_; }
  Bound at(std::size_t p, std::size_t q) const { return m_[p * 2 * n_ + q]; }

  /// Shortest-path closure, integer tightening, strengthening.
  void close();
  void forget(std::size_t v);
  /// Meets with e >= 0.
  void add_constraint(const Linear& e);
  void add_octagonal(const OctConstraint& c);
  /// v := e (e is evaluated in the state before the assignment).
  void assign(std::size_t v, const Linear& e);

  std::optional<Int> lower(std::size_t v) const;
  std::optional<Int> upper(std::size_t v) const;
  /// Interval of e from the variable bounds.
  std::pair<std::optional<Int>, std::optional<Int>> range(const Linear& e) const;

  /// Non-redundant constraints of the closed octagon.
  std::vector<OctConstraint> constraints() const;

  friend Octagon join(const Octagon& a, const Octagon& b);
  friend Octagon meet(const Octagon& a, const Octagon& b);
  /// Standard widening: bounds of a not stable in b become infinite.
  friend Octagon widen(const Octagon& a, const Octagon& b);
  friend bool leq(const Octagon& a, const Octagon& b);
  friend bool operator==(const Octagon& a, const Octagon& b);

 private:
  Bound& ref(std::size_t p, std::size_t q) { return m_[p * 2 * n_ + q]; }
  bool set_min(std::size_t p, std::size_t q, Bound c);
  void make_bottom();

  std::size_t n_ = 0;
  bool bottom_ = false;
  std::vector<Bound> m_;
};

Octagon join(const Octagon& a, const Octagon& b);
Octagon meet(const Octagon& a, const Octagon& b);
Octagon widen(const Octagon& a, const Octagon& b);
bool leq(const Octagon& a, const Octagon& b);

std::string to_string(const OctConstraint& c, const std::vector<std::string>& names);

}  // namespace arrabs::backend
