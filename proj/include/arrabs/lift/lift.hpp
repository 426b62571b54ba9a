#pragma once

#include "arrabs/lang/ast.hpp"
#include "arrabs/lia/budget.hpp"
#include "arrabs/lia/formula.hpp"
#include "arrabs/transform/transform.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace arrabs::lift {

using lia::Formula;
using lia::Var;

struct LiftedCell {
  std::string array;
  std::vector<Var> index;
  Var value;
  bool initial = false;
};

/// forall indices. (universe ==> matrix), where each cell value stands for
/// the array content at the cell's index.
struct QuantifiedInvariant {
  Formula universe;
  Formula matrix;
  std::vector<Var> indices;
  std::vector<LiftedCell> cells;
  /// Observer flags: like cell values, they depend on the indices.
  std::vector<Var> observers;
};

class TargetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

QuantifiedInvariant quantify(const Formula& phi, const transform::ScalarProgram& sp);
/// Same, for a matrix over the cells of `cfg` on `source`.
QuantifiedInvariant quantify(const Formula& phi, const lang::Program& source, const transform::IndexConfig& cfg);

/// forall indices. (universe ==> matrix) with cell values free.
Formula to_formula(const QuantifiedInvariant& inv);
/// `forall x: U ==> phi` with cell values rendered as array reads.
std::string to_string(const QuantifiedInvariant& inv);

/// The invariant's consequences on scalars: forall indices. exists cell
/// values and observers. (universe ==> matrix), eliminated.
Formula scalar_consequence(const QuantifiedInvariant& inv, const lia::Limits& limits = {});

/// True iff inv entails the target of `source`. The target's quantified
/// indices become fresh constants; its reads are matched one-to-one with
/// cells of the same array and state (final or initial), and every such
/// partial matching instantiates the invariant. `context` holds further
/// known facts over the scalars.
bool check_target(const QuantifiedInvariant& inv, const lang::Target& target, const lang::Program& source,
                  const Formula& context = lia::f_true(), const lia::Limits& limits = {});

/// The formula check_target refutes: instances of inv, context, and the
/// negated skolemized target.
Formula target_query(const QuantifiedInvariant& inv, const lang::Target& target, const lang::Program& source,
                     const Formula& context = lia::f_true(), const lia::Limits& limits = {});

enum class DualSide { Left, Both };

struct DualCells {
  Var left_index, left_value, right_index, right_value;
};

/// phi && QE(forall a. exists b. (U && a < a') ==> phi) where (a, b) is the
/// left cell; with DualSide::Both also the symmetric pass over the right
/// cell. On budget exhaustion phi is returned and a warning appended.
Formula reduce_dual(const Formula& phi, const Formula& universe, const DualCells& cells,
                    DualSide side = DualSide::Left, const lia::Limits& limits = {},
                    std::vector<std::string>* warnings = nullptr);
/// Same, with the universe and cells taken from an ordered config with
/// exactly two current cells on one array.
Formula reduce_dual(const Formula& phi, const lang::Program& source, const transform::IndexConfig& cfg,
                    DualSide side = DualSide::Left, const lia::Limits& limits = {},
                    std::vector<std::string>* warnings = nullptr);

}  // namespace arrabs::lift
