#include "arrabs/lia/solver.hpp"

#include "omega.hpp"

#include <algorithm>
#include <unordered_set>

namespace arrabs::lia {

namespace {

using detail::Constraint;

class Search {
 public:
  explicit Search(Budget& budget) : budget_(budget) {}

  struct State {
    std::vector<Constraint> lits;
    std::unordered_set<Formula> asserted;
    std::map<Var, bool> bools;
    std::vector<Formula> ors;
  };

  std::optional<State> find(State s) {
    budget_.tick();
    if (!propagate(s)) return std::nullopt;
    auto theory = detail::solve_conjunction(s.lits, budget_);
    if (!theory) return std::nullopt;
    if (s.ors.empty()) {
      values_ = std::move(*theory);
      return s;
    }
    std::size_t pick = 0;
    for (std::size_t i = 1; i < s.ors.size(); ++i)
      if (s.ors[i].children().size() < s.ors[pick].children().size()) pick = i;
    Formula branch = s.ors[pick];
    s.ors.erase(s.ors.begin() + static_cast<std::ptrdiff_t>(pick));

    std::vector<Formula> refuted;
    for (const auto& child : branch.children()) {
      State next = s;
      bool ok = true;
      for (const auto& r : refuted) ok = ok && add(f_not(r), next);
      ok = ok && add(child, next);
      if (ok)
        if (auto found = find(std::move(next))) return found;
      if (child.is_literal()) refuted.push_back(child);
    }
    return std::nullopt;
  }

  bool add(const Formula& f, State& s) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::True:
        return true;
      case K::False:
        return false;
      case K::And:
        for (const auto& k : f.children())
          if (!add(k, s)) return false;
        return true;
      case K::Or:
        s.ors.push_back(f);
        return true;
      case K::Bool:
        return assign(f.bool_var(), true, s);
      case K::Atom:
        if (!s.asserted.insert(f).second) return true;
        if (s.asserted.contains(f_not(f))) return false;
        s.lits.push_back(constraint_of(f.atom(), false));
        return true;
      case K::Not: {
        const Formula& b = f.body();
        if (b.kind() == K::Bool) return assign(b.bool_var(), false, s);
        if (b.kind() == K::Atom) {
          if (!s.asserted.insert(f).second) return true;
          if (s.asserted.contains(b)) return false;
          s.lits.push_back(constraint_of(b.atom(), true));
          return true;
        }
        break;
      }
      default:
        break;
    }
    throw std::logic_error("search: formula not in negation normal form");
  }

  const std::map<Var, Int>& values() const { return values_; }

 private:
  static Constraint constraint_of(const Atom& a, bool negated) {
    if (a.kind() == Atom::Kind::Ge) {
      if (negated) return {Constraint::Kind::Ge, a.negated_ge().expr(), 0};
      return {Constraint::Kind::Ge, a.expr(), 0};
    }
    return {negated ? Constraint::Kind::NotDiv : Constraint::Kind::Div, a.expr(),
            a.modulus()};
  }

  static bool assign(Var v, bool value, State& s) {
    auto [it, fresh] = s.bools.emplace(v, value);
    return fresh || it->second == value;
  }

  // Literal status under the syntactic assignment: 1 true, 0 false, -1 open.
  static int status(const Formula& f, const State& s) {
    using K = Formula::Kind;
    if (f.kind() == K::Bool) {
      auto it = s.bools.find(f.bool_var());
      return it == s.bools.end() ? -1 : it->second;
    }
    if (f.kind() == K::Not && f.body().kind() == K::Bool) {
      auto it = s.bools.find(f.body().bool_var());
      return it == s.bools.end() ? -1 : !it->second;
    }
    if (f.is_literal()) {
      if (s.asserted.contains(f)) return 1;
      if (s.asserted.contains(f_not(f))) return 0;
    }
    return -1;
  }

  // Unit propagation on the pending disjunctions.
  bool propagate(State& s) {
    for (bool changed = true; changed;) {
      changed = false;
      std::vector<Formula> ors;
      ors.swap(s.ors);
      std::vector<Formula> units;
      for (const auto& o : ors) {
        std::vector<Formula> open;
        bool satisfied = false;
        for (const auto& c : o.children()) {
          int st = status(c, s);
          if (st == 1) {
            satisfied = true;
            break;
          }
          if (st == -1) open.push_back(c);
        }
        if (satisfied) {
          changed = true;
          continue;
        }
        if (open.empty()) return false;
        if (open.size() == 1) {
          units.push_back(open.front());
          changed = true;
          continue;
        }
        if (open.size() < o.children().size()) changed = true;
        s.ors.push_back(open.size() < o.children().size() ? f_or(open) : o);
      }
      for (const auto& u : units)
        if (!add(u, s)) return false;
    }
    return true;
  }

  Budget& budget_;
  std::map<Var, Int> values_;
};

// Replaces existentials in positive positions by fresh free variables and
// eliminates the remaining quantifiers.
Formula skolemize(const Formula& f, const Limits& limits) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Exists: {
      std::map<Var, LinExpr> sub;
      std::map<Var, Var> bools;
      FreeVars fv = free_vars(f.body());
      for (auto v : f.bound()) {
        Var nv = Var::fresh(v.name());
        if (fv.bools.contains(v))
          bools.emplace(v, nv);
        else
          sub.emplace(v, LinExpr::of(nv));
      }
      return skolemize(rename(substitute(f.body(), sub), bools), limits);
    }
    case K::Forall:
      return nnf(eliminate_quantifiers(f, limits));
    case K::And:
    case K::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(skolemize(k, limits));
      return f.kind() == K::And ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    default:
      return f;
  }
}

}  // namespace

std::optional<Model> is_sat(const Formula& f, const Limits& limits) {
  Formula g = nnf(f);
  if (!g.is_quantifier_free()) g = skolemize(g, limits);
  Budget budget(limits);
  Search search(budget);
  Search::State s;
  if (!search.add(g, s)) return std::nullopt;
  auto found = search.find(std::move(s));
  if (!found) return std::nullopt;

  FreeVars fv = free_vars(f);
  FreeVars gv = free_vars(g);
  Model full;
  for (auto v : gv.ints) {
    auto it = search.values().find(v);
    full.ints.emplace(v, it == search.values().end() ? Int(0) : it->second);
  }
  for (auto v : gv.bools) {
    auto it = found->bools.find(v);
    full.bools.emplace(v, it != found->bools.end() && it->second);
  }
  if (!evaluate(g, full)) throw std::logic_error("is_sat: model check failed");
  Model m;
  for (auto v : fv.ints) m.ints.emplace(v, full.ints.count(v) ? full.ints.at(v) : Int(0));
  for (auto v : fv.bools) m.bools.emplace(v, full.bools.count(v) && full.bools.at(v));
  return m;
}

bool entails(const Formula& gamma, const Formula& psi, const Limits& limits) {
  return !is_sat(f_and(gamma, f_not(psi)), limits);
}

bool equivalent(const Formula& a, const Formula& b, const Limits& limits) {
  return entails(a, b, limits) && entails(b, a, limits);
}

}  // namespace arrabs::lia
