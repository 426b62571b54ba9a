#pragma once

#include "arrabs/lia/budget.hpp"
#include "arrabs/lia/linexpr.hpp"

#include <map>
#include <optional>
#include <vector>

namespace arrabs::lia::detail {

/// Theory literal handed to the conjunction solver.
struct Constraint {
  enum class Kind { Ge, Div, NotDiv };
  Kind kind = Kind::Ge;
  LinExpr expr;
  Int modulus = 0;
};

/// Decides a conjunction of linear constraints over the integers with the
/// Omega test. Returns an assignment for every variable that occurs, or
/// nullopt when the conjunction is unsatisfiable.
std::optional<std::map<Var, Int>> solve_conjunction(
    const std::vector<Constraint>& cs, Budget& budget);

}  // namespace arrabs::lia::detail
