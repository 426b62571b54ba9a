#pragma once

#include "arrabs/lang/ast.hpp"
#include "arrabs/lang/interp.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace arrabs::oracle {

using lang::Value;

/// Index set A (sorted), value set B, scalar states S.
struct FiniteDomain {
  std::vector<Value> A;
  std::vector<Value> B;
  std::vector<Value> S;
};

/// f[A[k]] at position k.
using Fn = std::vector<Value>;
using ConcreteSet = std::set<std::pair<Value, Fn>>;
/// (s, a, f[a])
using AbstractSet1 = std::set<std::array<Value, 3>>;
/// (s, a, f[a], a', f[a']) with a < a'
using AbstractSet2 = std::set<std::array<Value, 5>>;

std::vector<Fn> all_functions(const FiniteDomain& dom);
/// S x (A -> B).
ConcreteSet all_states(const FiniteDomain& dom);
/// S x A x B.
AbstractSet1 all_tuples1(const FiniteDomain& dom);
/// S x {(a, b, a', b') | a < a'}.
AbstractSet2 all_tuples2(const FiniteDomain& dom);

AbstractSet1 alpha1(const ConcreteSet& f, const FiniteDomain& dom);
ConcreteSet gamma1(const AbstractSet1& x, const FiniteDomain& dom);
AbstractSet2 alpha2lt(const ConcreteSet& f, const FiniteDomain& dom);
ConcreteSet gamma2lt(const AbstractSet2& x, const FiniteDomain& dom);

/// alpha(gamma(x)).
AbstractSet1 reduce_opt(const AbstractSet1& x, const FiniteDomain& dom);
AbstractSet2 reduce_opt(const AbstractSet2& x, const FiniteDomain& dom);

struct LawCheck {
  std::string law = {};
  std::size_t cases = 0;
  std::size_t violations = 0;
  std::string counterexample = {};
};

struct Report {
  std::string name;
  std::vector<LawCheck> laws;

  bool ok() const;
  std::size_t cases() const;
  /// One line per law: name, law, cases, PASS/FAIL, counterexample.
  std::string to_string() const;
};

enum class Connection { Single, DualOrdered };

/// Galois laws (extensive, reductive, monotone both ways, additive alpha)
/// and reduce_opt laws (decreasing, idempotent, gamma-preserving). With
/// samples == 0 every subset of both universes is checked and monotonicity
/// and additivity are checked on all one-element extensions; otherwise
/// that many random subsets are drawn on each side.
Report check_galois(const FiniteDomain& dom, Connection which, std::size_t samples = 0, std::uint64_t seed = 1);

/// Soundness of one elementary statement over scalars i, r and the array
/// t[|A|] (A must be 0..|A|-1): forward images of concretizations are
/// contained in the concretization of the transformed statement's image,
/// and likewise for pre-images. Scalars range over dom.S, array contents
/// and havoc values over dom.B. Abstract states carry `cells` index cells
/// (strictly increasing indices when `ordered`). With samples == 0 every
/// abstract set is checked.
Report check_statement_soundness(const std::string& statement, const FiniteDomain& dom, std::size_t cells = 1,
                                 bool ordered = false, std::size_t samples = 0, std::uint64_t seed = 1);

struct CompletenessOptions {
  lang::Bounds bounds;
  /// Cells per array; arrays not listed get one cell per access.
  std::vector<std::pair<std::string, std::size_t>> cells;
};

struct CompletenessResult {
  /// Scalar projections of the concrete final states.
  std::set<lang::ConcreteState> concrete;
  /// Scalar projections of the concretized abstract final states: normal
  /// final states need one array content consistent with every index
  /// instantiation; failures count when some instantiation reaches them.
  std::set<lang::ConcreteState> abstract;
  bool states_equal = false;    // non-failing parts agree
  bool failures_equal = false;  // failing parts agree
  bool included = false;        // concrete within abstract
  bool equal() const { return states_equal && failures_equal; }
  std::string witness;          // an abstract-only state, if any
};

/// Compares the scalar projection of a program's concrete semantics with
/// the round trip through the index-cell abstraction, both enumerated.
CompletenessResult check_completeness(const lang::Program& p, const CompletenessOptions& opts);

struct PrecisionLoss {
  std::size_t before = 0;  // states (0, f) with f constant
  std::size_t after = 0;   // concretization after forgetting v abstractly
  bool strict() const { return after > before; }
};

/// Forgetting v in {(v, a, v)}: the concrete result keeps constant arrays,
/// the abstract one concretizes to every array.
PrecisionLoss check_precision_loss_example(const FiniteDomain& dom);

struct RandomProgramOptions {
  std::size_t max_arrays = 2;
  std::size_t max_accesses = 4;
  std::size_t max_length = 3;
  std::size_t max_statements = 6;
};

/// Random loop-free program text with in-bounds accesses only; every
/// scalar and array value stays within {0, 1, 2}.
std::string random_loopfree_program(std::mt19937& rng, const RandomProgramOptions& opts = {});

}  // namespace arrabs::oracle
