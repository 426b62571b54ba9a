#pragma once

#include "arrabs/lia/budget.hpp"
#include "arrabs/lia/formula.hpp"

#include <optional>
#include <vector>

namespace arrabs::lia {

/// Satisfiability over the integers. Quantified input is first reduced:
/// positive existentials become free variables and the rest is eliminated.
/// The returned model assigns every free variable of f and satisfies it.
/// Throws BudgetExceeded when the limits are hit.
std::optional<Model> is_sat(const Formula& f, const Limits& limits = {});

/// True iff every model of gamma satisfies psi (gamma && !psi is unsat).
bool entails(const Formula& gamma, const Formula& psi, const Limits& limits = {});
bool equivalent(const Formula& a, const Formula& b, const Limits& limits = {});

/// Equivalent quantifier-free formula (Cooper's method).
Formula eliminate_quantifiers(const Formula& f, const Limits& limits = {});

using Conjunction = std::vector<Formula>;  // literals
using Dnf = std::vector<Conjunction>;

/// Disjunctive normal form of a quantifier-free formula. Literals within a
/// disjunct and the disjuncts themselves are sorted by their printed form;
/// contradictory disjuncts (p and !p) are dropped. Throws BudgetExceeded
/// past limits.dnf_cap disjuncts.
Dnf to_dnf(const Formula& f, const Limits& limits = {});
Formula from_dnf(const Dnf& d);
Formula from_conjunction(const Conjunction& c);

}  // namespace arrabs::lia
