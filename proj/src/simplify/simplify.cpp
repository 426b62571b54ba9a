#include "arrabs/simplify/simplify.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace arrabs::simplify {

namespace {

void collect(const Formula& f, std::set<lia::Atom>& atoms, std::set<lia::Var>& bools) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      atoms.insert(f.atom());
      return;
    case Formula::Kind::Bool:
      bools.insert(f.bool_var());
      return;
    default:
      for (const auto& c : f.children()) collect(c, atoms, bools);
  }
}

void complete_model(const Formula& f, lia::Model& m) {
  lia::FreeVars fv = lia::free_vars(f);
  for (lia::Var v : fv.ints) m.ints.try_emplace(v, 0);
  for (lia::Var v : fv.bools) m.bools.try_emplace(v, false);
}

}  // namespace

std::vector<Formula> literals(const Formula& f) {
  if (!f.is_quantifier_free()) throw std::invalid_argument("literals: formula has quantifiers");
  std::set<lia::Atom> atoms;
  std::set<lia::Var> bools;
  collect(lia::nnf(f), atoms, bools);
  std::set<lia::Atom> closed;
  std::vector<Formula> out;
  for (const auto& a : atoms) {
    if (a.kind() == lia::Atom::Kind::Div) {
      out.push_back(lia::f_atom(a));
      out.push_back(lia::f_not(lia::f_atom(a)));
    } else {
      for (const auto& b : {a, a.negated_ge()})
        if (closed.insert(b).second) out.push_back(lia::f_atom(b));
    }
  }
  for (lia::Var b : bools) {
    out.push_back(lia::f_var(b));
    out.push_back(lia::f_not(lia::f_var(b)));
  }
  return out;
}

std::vector<Formula> true_predicates(const std::vector<Formula>& lits, const lia::Model& m) {
  std::vector<Formula> out;
  for (const auto& l : lits)
    if (lia::evaluate(l, m)) out.push_back(l);
  return out;
}

namespace {

std::optional<lia::Model> sat(const Formula& f, const lia::Limits& limits, const QueryLog& log) {
  if (log) log(f);
  return lia::is_sat(f, limits);
}

}  // namespace

std::vector<Formula> generalize(const std::vector<Formula>& s, const Formula& g, const lia::Limits& limits,
                                const QueryLog& log) {
  if (sat(lia::f_and(lia::f_and(s), g), limits, log))
    throw GeneralizeError("generalize: the literals are consistent with the formula");
  std::vector<Formula> kept = s;
  for (std::size_t i = 0; i < kept.size();) {
    std::vector<Formula> rest = kept;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (!sat(lia::f_and(lia::f_and(rest), g), limits, log))
      kept = std::move(rest);
    else
      ++i;
  }
  return kept;
}

SimplifyResult dnf_simplify(const Formula& f, const Formula& universe, const lia::Limits& limits, bool prune,
                            const QueryLog& log) {
  if (!f.is_quantifier_free() || !universe.is_quantifier_free())
    throw std::invalid_argument("dnf_simplify: formulas must be quantifier-free");
  SimplifyResult res;
  std::vector<Formula> lits = literals(f);
  std::size_t atom_count = lits.size() / 2;
  std::size_t bound = atom_count >= 63 ? SIZE_MAX : std::size_t{1} << atom_count;
  Formula outside = lia::f_and(universe, lia::f_not(f));
  Formula work = f;
  try {
    while (true) {
      auto m = sat(lia::f_and(work, universe), limits, log);
      if (!m) break;
      if (++res.iterations > bound) throw std::logic_error("dnf_simplify: iteration bound exceeded");
      complete_model(f, *m);
      std::vector<Formula> p = generalize(true_predicates(lits, *m), outside, limits, log);
      res.disjuncts.push_back(p);
      work = lia::f_and(work, lia::f_not(lia::f_and(p)));
    }
    if (prune) {
      for (std::size_t i = res.disjuncts.size(); i-- > 0;) {
        std::vector<Formula> others;
        for (std::size_t j = 0; j < res.disjuncts.size(); ++j)
          if (j != i) others.push_back(lia::f_and(res.disjuncts[j]));
        if (!sat(lia::f_and({lia::f_and(res.disjuncts[i]), universe, lia::f_not(lia::f_or(others))}), limits, log))
          res.disjuncts.erase(res.disjuncts.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  } catch (const lia::BudgetExceeded& e) {
    res.complete = false;
    res.warning = std::string("simplification incomplete: ") + e.what();
  }
  return res;
}

}  // namespace arrabs::simplify
