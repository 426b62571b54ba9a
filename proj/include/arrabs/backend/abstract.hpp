#pragma once

#include "arrabs/backend/affine.hpp"
#include "arrabs/backend/octagon.hpp"
#include "arrabs/lang/ast.hpp"
#include "arrabs/lia/formula.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace arrabs::backend {

class PartitionCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AnalysisConfig {
  int widening_delay = 2;
  int narrowing_passes = 1;
  /// Maximum number of partitioning booleans and predicates.
  std::size_t partition_cap = 12;
  /// When false, booleans are numeric 0/1 dimensions of a single element.
  bool partition = true;
  /// Numeric conditions whose truth value also partitions the state.
  std::vector<lang::ExprPtr> partition_predicates;
};

/// Reduced product of an octagon and affine equalities.
struct Elem {
  Octagon oct;
  AffineEqs aff;
  bool is_bottom() const { return oct.is_bottom() || aff.is_bottom(); }
  friend bool operator==(const Elem&, const Elem&) = default;
};

/// Partition key: values of the partitioning booleans followed by the
/// truth values of the partitioning predicates.
using Key = std::vector<bool>;

/// Map from partition keys to non-bottom elements; empty means bottom.
struct AbstractState {
  std::map<Key, Elem> parts;
  bool is_bottom() const { return parts.empty(); }
};

class Domain {
 public:
  Domain(const lang::Program& p, const AnalysisConfig& cfg = {});

  /// Numeric dimensions (integers, enums, and unpartitioned booleans).
  const std::vector<std::string>& dims() const { return dims_; }
  const std::vector<std::string>& bools() const { return bools_; }
  const std::vector<std::string>& predicates() const { return pred_text_; }
  /// Partition predicates dropped because of the cap.
  const std::vector<std::string>& dropped_predicates() const { return dropped_; }

  Elem top_elem() const;
  Elem assume(const Elem& e, const lia::Formula& numeric) const;
  /// Assignment, havoc, or assume over numeric variables only.
  Elem transfer(const Elem& e, const lang::Stmt& s) const;
  void reduce(Elem& e) const;

  AbstractState initial() const;
  /// Assign, Havoc, Assume; Assert and BoundsCheck act as Assume.
  AbstractState transfer(const AbstractState& s, const lang::Stmt& st) const;
  AbstractState assume(const AbstractState& s, const lang::ExprPtr& cond) const;
  /// True when some state of s violates cond.
  bool may_violate(const AbstractState& s, const lang::ExprPtr& cond) const;
  AbstractState join(const AbstractState& a, const AbstractState& b) const;
  AbstractState widen(const AbstractState& a, const AbstractState& b) const;
  bool leq(const AbstractState& a, const AbstractState& b) const;
  AbstractState close(const AbstractState& s) const;

  lia::Formula to_formula(const Key& k, const Elem& e) const;
  /// Disjunction over partitions; free variables are program variables.
  lia::Formula to_formula(const AbstractState& s) const;
  std::string to_string(const AbstractState& s) const;

 private:
  Linear linear(const lia::LinExpr& e) const;
  lia::Formula condition(const Key& k, const lang::ExprPtr& c) const;
  void insert(AbstractState& s, Key k, Elem e) const;
  /// Re-establishes the predicate bits after dimension v changed.
  AbstractState resplit(const AbstractState& s, std::size_t v) const;
  AbstractState split_all(const AbstractState& s) const;

  const lang::Program& p_;
  std::vector<std::string> dims_;
  std::vector<bool> dim_bool_;
  std::unordered_map<std::string, std::size_t> dim_index_;
  std::vector<std::string> bools_;
  std::unordered_map<std::string, std::size_t> bool_index_;
  std::vector<lia::Formula> preds_;
  std::vector<std::string> pred_text_;
  std::vector<std::vector<std::size_t>> preds_of_dim_;
  std::vector<std::string> dropped_;
};

/// Join for iterations below the widening delay, widening afterwards.
AbstractState join_widen(const Domain& d, const AbstractState& a, const AbstractState& b, int iteration,
                         const AnalysisConfig& cfg);

struct PossibleFailure {
  lang::Stmt::Kind kind = lang::Stmt::Kind::Assert;
  lang::Pos pos;
};

struct AbstractResult {
  /// Loop-head invariants keyed "loop@line:col", in program order.
  std::vector<std::pair<std::string, AbstractState>> locations;
  AbstractState exit;
  lia::Formula invariant;  // exit state as a formula
  std::vector<PossibleFailure> failures;
  std::vector<std::string> warnings;
  std::string report;
};

AbstractResult analyze_abstract(const lang::Program& p, const AnalysisConfig& cfg = {});

/// Partition predicates derived from index-equality guards: for each guard
/// e == x with x an index variable, the predicates e < x and e <= x.
std::vector<lang::ExprPtr> guard_predicates(const lang::Program& p, const std::vector<std::string>& index_vars);

}  // namespace arrabs::backend
