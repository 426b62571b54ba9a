#include "arrabs/lift/lift.hpp"

#include "arrabs/lang/convert.hpp"
#include "arrabs/lang/printer.hpp"
#include "arrabs/lia/solver.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace arrabs::lift {

using lang::Expr;
using lang::ExprPtr;
using lia::LinExpr;
using K = Expr::Kind;

namespace {

Formula universe_formula(const lang::Program& source, const transform::IndexConfig& cfg) {
  return lang::to_formula(transform::universe(source, cfg), {&source, {}});
}

struct TargetRead {
  std::string array;
  bool old = false;
  std::vector<ExprPtr> index;
  std::string value;
};

ExprPtr replace_reads(const ExprPtr& e, std::vector<TargetRead>& reads) {
  if (e->kind == K::Read) {
    std::string key;
    for (const auto& i : e->args) key += lang::to_string(i) + ",";
    for (const auto& r : reads) {
      std::string rk;
      for (const auto& i : r.index) rk += lang::to_string(i) + ",";
      if (r.array == e->name && r.old == e->old && rk == key) return lang::var(r.value);
    }
    reads.push_back({e->name, e->old, e->args, "r$t" + std::to_string(reads.size())});
    return lang::var(reads.back().value);
  }
  if (e->args.empty()) return e;
  auto copy = std::make_shared<Expr>(*e);
  for (auto& a : copy->args) a = replace_reads(a, reads);
  return copy;
}

Formula quantified(const std::vector<Var>& all_idx, const std::vector<Var>& all_ex, const std::map<Var, LinExpr>& sub,
                   const Formula& body, const lia::Limits& limits) {
  std::vector<Var> idx, ex;
  for (Var v : all_idx)
    if (!sub.count(v)) idx.push_back(v);
  for (Var v : all_ex)
    if (!sub.count(v)) ex.push_back(v);
  Formula f = lia::substitute(body, sub);
  if (!ex.empty()) f = lia::f_exists(ex, f);
  if (!idx.empty()) f = lia::f_forall(idx, f);
  if (idx.empty() && ex.empty()) return f;
  return lia::eliminate_quantifiers(f, limits);
}

std::vector<Var> existentials(const QuantifiedInvariant& inv) {
  std::vector<Var> out;
  for (const auto& c : inv.cells) out.push_back(c.value);
  for (Var v : inv.observers) out.push_back(v);
  return out;
}

}  // namespace

QuantifiedInvariant quantify(const Formula& phi, const lang::Program& source, const transform::IndexConfig& cfg) {
  QuantifiedInvariant inv;
  inv.universe = universe_formula(source, cfg);
  inv.matrix = phi;
  for (const auto& ac : cfg.arrays)
    for (const auto& c : ac.cells) {
      LiftedCell lc;
      lc.array = ac.array;
      lc.initial = c.initial;
      lc.value = Var::named(c.value);
      for (const auto& x : c.index) {
        Var v = Var::named(x);
        lc.index.push_back(v);
        if (std::find(inv.indices.begin(), inv.indices.end(), v) == inv.indices.end()) inv.indices.push_back(v);
      }
      inv.cells.push_back(std::move(lc));
    }
  return inv;
}

QuantifiedInvariant quantify(const Formula& phi, const transform::ScalarProgram& sp) {
  QuantifiedInvariant inv = quantify(phi, sp.source, sp.config);
  for (const auto& o : sp.observer_vars) inv.observers.push_back(Var::named(o));
  return inv;
}

Formula to_formula(const QuantifiedInvariant& inv) {
  Formula body = lia::f_implies(inv.universe, inv.matrix);
  if (inv.indices.empty()) return body;
  return lia::f_forall(inv.indices, body);
}

std::string to_string(const QuantifiedInvariant& inv) {
  std::vector<std::pair<std::string, ExprPtr>> sub;
  for (const auto& c : inv.cells) {
    std::vector<ExprPtr> idx;
    for (Var v : c.index) idx.push_back(lang::var(v.name()));
    sub.emplace_back(c.value.name(), lang::read(c.array, idx, c.initial));
  }
  auto render = [&](const Formula& f) { return lang::to_string(lang::rename_vars(lang::from_formula(f), sub)); };
  std::string body = inv.universe.is_true() ? render(inv.matrix)
                                            : "(" + render(inv.universe) + ") ==> (" + render(inv.matrix) + ")";
  if (inv.indices.empty()) return body;
  std::string out = "forall ";
  for (std::size_t i = 0; i < inv.indices.size(); ++i) out += (i ? ", " : "") + inv.indices[i].name();
  return out + ": " + body;
}

Formula scalar_consequence(const QuantifiedInvariant& inv, const lia::Limits& limits) {
  return quantified(inv.indices, existentials(inv), {}, lia::f_implies(inv.universe, inv.matrix), limits);
}

Formula target_query(const QuantifiedInvariant& inv, const lang::Target& target, const lang::Program& source,
                     const Formula& context, const lia::Limits& limits) {
  std::vector<std::pair<std::string, ExprPtr>> skolem;
  for (const auto& b : target.bound) skolem.emplace_back(b, lang::var(b + "$t"));
  ExprPtr body = lang::rename_vars(target.body, skolem);
  std::vector<TargetRead> reads;
  body = replace_reads(body, reads);
  lang::FormulaContext ctx{&source, {}};
  Formula psi = lang::to_formula(body, ctx);

  std::vector<std::vector<const LiftedCell*>> candidates(reads.size());
  std::vector<std::vector<LinExpr>> read_index(reads.size());
  for (std::size_t m = 0; m < reads.size(); ++m) {
    for (const auto& i : reads[m].index) read_index[m].push_back(lang::to_linexpr(i, ctx));
    for (const auto& c : inv.cells) {
      if (c.array != reads[m].array || c.initial != reads[m].old) continue;
      if (c.index.size() != reads[m].index.size())
        throw TargetError("target read of " + reads[m].array + " has " + std::to_string(reads[m].index.size()) +
                          " indices, cells have " + std::to_string(c.index.size()));
      candidates[m].push_back(&c);
    }
  }

  Formula body_formula = lia::f_implies(inv.universe, inv.matrix);
  std::vector<Var> ex = existentials(inv);
  std::vector<Formula> instances;
  std::set<std::string> seen;
  std::vector<const LiftedCell*> chosen(reads.size(), nullptr);
  std::function<void(std::size_t)> visit = [&](std::size_t m) {
    if (m == reads.size()) {
      std::map<Var, LinExpr> sub;
      for (std::size_t r = 0; r < reads.size(); ++r) {
        const LiftedCell* c = chosen[r];
        if (!c) continue;
        for (std::size_t d = 0; d < c->index.size(); ++d) {
          auto it = sub.find(c->index[d]);
          if (it != sub.end() && it->second != read_index[r][d]) return;
          sub[c->index[d]] = read_index[r][d];
        }
        sub[c->value] = LinExpr::of(Var::named(reads[r].value));
      }
      Formula inst = quantified(inv.indices, ex, sub, body_formula, limits);
      if (seen.insert(lia::to_string(inst)).second) instances.push_back(inst);
      return;
    }
    chosen[m] = nullptr;
    visit(m + 1);
    for (const LiftedCell* c : candidates[m]) {
      if (std::find(chosen.begin(), chosen.begin() + m, c) != chosen.begin() + m) continue;
      chosen[m] = c;
      visit(m + 1);
    }
    chosen[m] = nullptr;
  };
  visit(0);
  instances.push_back(context);
  instances.push_back(lia::f_not(psi));
  return lia::f_and(instances);
}

bool check_target(const QuantifiedInvariant& inv, const lang::Target& target, const lang::Program& source,
                  const Formula& context, const lia::Limits& limits) {
  return !lia::is_sat(target_query(inv, target, source, context, limits), limits).has_value();
}

Formula reduce_dual(const Formula& phi, const Formula& universe, const DualCells& cells, DualSide side,
                    const lia::Limits& limits, std::vector<std::string>* warnings) {
  Formula ordered = lia::f_and(universe, lia::f_lt(LinExpr::of(cells.left_index), LinExpr::of(cells.right_index)));
  Formula guarded = lia::f_implies(ordered, phi);
  try {
    std::vector<Formula> parts{phi};
    parts.push_back(lia::eliminate_quantifiers(
        lia::f_forall({cells.left_index}, lia::f_exists({cells.left_value}, guarded)), limits));
    if (side == DualSide::Both)
      parts.push_back(lia::eliminate_quantifiers(
          lia::f_forall({cells.right_index}, lia::f_exists({cells.right_value}, guarded)), limits));
    return lia::f_and(parts);
  } catch (const lia::BudgetExceeded& e) {
    if (warnings) warnings->push_back(std::string("reduction skipped: ") + e.what());
    return phi;
  }
}

Formula reduce_dual(const Formula& phi, const lang::Program& source, const transform::IndexConfig& cfg,
                    DualSide side, const lia::Limits& limits, std::vector<std::string>* warnings) {
  for (const auto& ac : cfg.arrays) {
    std::vector<const transform::Cell*> cur;
    for (const auto& c : ac.cells)
      if (!c.initial) cur.push_back(&c);
    if (!ac.ordered || cur.size() != 2) continue;
    DualCells dc{Var::named(cur[0]->index[0]), Var::named(cur[0]->value), Var::named(cur[1]->index[0]),
                 Var::named(cur[1]->value)};
    return reduce_dual(phi, universe_formula(source, cfg), dc, side, limits, warnings);
  }
  throw std::invalid_argument("reduce_dual needs an ordered array with exactly two current cells");
}

}  // namespace arrabs::lift
