#pragma once

#include "arrabs/lang/ast.hpp"
#include "arrabs/lia/budget.hpp"
#include "arrabs/lia/formula.hpp"

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace arrabs::backend {

class PathCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExactOptions {
  std::size_t path_cap = 20'000;
  /// Restricts integer havoc values to [first, second] (enums and booleans
  /// always range over their domain).
  std::optional<std::pair<lia::Int, lia::Int>> havoc_range;
  lia::Limits limits;
};

/// One feasible path: its relation between parameters and final locals.
struct PathSummary {
  lia::Formula relation;
};

/// A reachable failing assert or bounds check; `state` relates the
/// parameters to the locals at the failure point.
struct Failure {
  lang::Stmt::Kind kind = lang::Stmt::Kind::Assert;
  lang::Pos pos;
  lia::Formula state;
};

struct ExactResult {
  /// Disjunction of the path relations over params and final locals.
  lia::Formula exit;
  /// Disjunction of the failure states.
  lia::Formula failure;
  std::vector<PathSummary> paths;
  std::vector<Failure> failures;
};

/// Exact input/output relation of a loop-free scalar program. Locals start
/// at 0 (false); havoc values are existentially eliminated.
ExactResult analyze_loopfree_exact(const lang::Program& p, const ExactOptions& opts = {});

enum class UnrollMode {
  Assume,  // executions needing more iterations are cut off
  Assert,  // reaching a further iteration is a failure (unwinding check)
};

/// Replaces each while loop by k guarded copies of its body followed by
/// assume(!cond) or assert(!cond).
lang::Program unroll(const lang::Program& p, int k, UnrollMode mode = UnrollMode::Assume);

}  // namespace arrabs::backend
