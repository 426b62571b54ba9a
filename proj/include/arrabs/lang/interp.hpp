#pragma once

#include "arrabs/lang/ast.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace arrabs::lang {

using Value = std::int64_t;

enum class Status { Running, AssertFailed, OutOfBounds };

struct ConcreteState {
  std::map<std::string, Value> scalars;  // booleans as 0/1
  std::map<std::string, std::vector<Value>> arrays;  // row-major
  Status status = Status::Running;

  friend auto operator<=>(const ConcreteState&, const ConcreteState&) = default;
};

struct Execution {
  ConcreteState initial;
  ConcreteState final;

  friend auto operator<=>(const Execution&, const Execution&) = default;
};

/// Finite ranges for enumeration. Integer havocs and integer array cells
/// range over `values`; enum-sorted ones over their constants; booleans over
/// {false, true}. Parameters range over `params[name]` when present, else
/// over `param_values`.
struct Bounds {
  std::vector<Value> values = {0, 1, 2};
  std::vector<Value> param_values = {0, 1, 2, 3};
  std::map<std::string, std::vector<Value>> params;
  std::size_t state_cap = 2'000'000;
};

class EnumerationBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every initial state under the bounds: parameters, zero locals, and all
/// array contents.
std::vector<ConcreteState> initial_states(const Program& p, const Bounds& b);

/// All terminating executions from the given initial states. Runs that fail
/// an assertion or access out of bounds end in the corresponding status
/// with the state at the failure point. Runs blocked by assume disappear.
std::set<Execution> execute(const Program& p, const std::vector<ConcreteState>& init,
                            const Bounds& b);

std::set<Execution> enumerate_relation(const Program& p, const Bounds& b);
/// Final states of enumerate_relation.
std::set<ConcreteState> enumerate_executions(const Program& p, const Bounds& b);

/// Evaluates the program's target on an execution (true when there is no
/// target). Quantified indices range over [-1, longest dimension].
bool satisfies_target(const Program& p, const Execution& e);

/// Restricts states to the given scalars and arrays (status kept).
ConcreteState project(const ConcreteState& s, const std::set<std::string>& names);

std::string to_string(const ConcreteState& s);

}  // namespace arrabs::lang
