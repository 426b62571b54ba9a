#pragma once

#include "arrabs/lia/budget.hpp"
#include "arrabs/lia/formula.hpp"
#include "arrabs/lia/solver.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arrabs::simplify {

using lia::Formula;

struct SimplifyResult {
  lia::Dnf disjuncts;
  /// False when the solver ran out of budget; the disjuncts found so far
  /// are then implied by F modulo U but may not cover it.
  bool complete = true;
  std::size_t iterations = 0;
  std::string warning;
};

/// Literals over the atoms of f: each arithmetic atom, boolean variable,
/// and divisibility atom together with its negation. Equalities contribute
/// their two inequalities.
std::vector<Formula> literals(const Formula& f);

/// The literals satisfied by m. Throws lia::UnassignedVariable when m
/// lacks a variable of some literal.
std::vector<Formula> true_predicates(const std::vector<Formula>& literals, const lia::Model& m);

class GeneralizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Receives every satisfiability query before it is decided.
using QueryLog = std::function<void(const Formula&)>;

/// A subset of s, minimal for inclusion, whose conjunction with g is still
/// unsatisfiable: each literal is dropped in order when the rest suffices.
std::vector<Formula> generalize(const std::vector<Formula>& s, const Formula& g, const lia::Limits& limits = {},
                                const QueryLog& log = {});

/// Small DNF F' with F && U equivalent to F' && U. With `prune`, disjuncts
/// covered by the others modulo U are removed afterwards.
SimplifyResult dnf_simplify(const Formula& f, const Formula& universe = lia::f_true(),
                            const lia::Limits& limits = {}, bool prune = true, const QueryLog& log = {});

}  // namespace arrabs::simplify
