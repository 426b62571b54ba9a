#include "arrabs/backend/abstract.hpp"

#include "arrabs/backend/symbolic.hpp"
#include "arrabs/lang/convert.hpp"
#include "arrabs/lang/printer.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace arrabs::backend {

using lang::ExprPtr;
using lang::Program;
using lang::Stmt;
using lia::Formula;
using lia::LinExpr;
using lia::Var;
using K = lang::Expr::Kind;

namespace {

Elem bottom_elem(std::size_t n) { return {Octagon::bottom(n), AffineEqs::bottom(n)}; }

Linear negate(const Linear& e) {
  Linear r = e;
  for (auto& t : r.terms) t.second = -t.second;
  r.constant = -r.constant;
  return r;
}

LinExpr to_linexpr(const Linear& e, const std::vector<std::string>& names) {
  LinExpr r(e.constant);
  for (const auto& [v, c] : e.terms) r.add_term(Var::named(names[v]), c);
  return r;
}

}  // namespace

Domain::Domain(const Program& p, const AnalysisConfig& cfg) : p_(p) {
  auto add = [&](const lang::VarDecl& d) {
    if (d.type.is_bool() && cfg.partition) {
      bool_index_[d.name] = bools_.size();
      bools_.push_back(d.name);
      return;
    }
    dim_index_[d.name] = dims_.size();
    dims_.push_back(d.name);
    dim_bool_.push_back(d.type.is_bool());
  };
  for (const auto& d : p.params) add(d);
  for (const auto& d : p.locals) add(d);
  if (bools_.size() > cfg.partition_cap)
    throw PartitionCapExceeded(std::to_string(bools_.size()) + " booleans exceed the partition cap of " +
                               std::to_string(cfg.partition_cap));
  preds_of_dim_.resize(dims_.size());
  SymbolicEnv env = identity_env(p);
  env.bool_value = [](const std::string& n) -> Formula {
    throw lang::NotArithmetic("partition predicate mentions boolean " + n);
  };
  std::set<std::string> seen;
  for (const auto& pe : cfg.partition_predicates) {
    std::string text = lang::to_string(pe);
    if (!seen.insert(text).second) continue;
    if (bools_.size() + preds_.size() >= cfg.partition_cap) {
      dropped_.push_back(text);
      continue;
    }
    Formula f = sym_bool(pe, env);
    std::size_t j = preds_.size();
    preds_.push_back(f);
    pred_text_.push_back(text);
    for (Var v : lia::free_vars(f).ints) {
      auto it = dim_index_.find(v.name());
      if (it == dim_index_.end()) throw std::invalid_argument("partition predicate mentions unknown variable " + v.name());
      preds_of_dim_[it->second].push_back(j);
    }
  }
}

Linear Domain::linear(const LinExpr& e) const {
  Linear r;
  r.constant = e.constant();
  for (const auto& [v, c] : e.terms()) {
    auto it = dim_index_.find(v.name());
    if (it == dim_index_.end()) throw std::logic_error("unknown dimension " + v.name());
    r.terms.emplace_back(it->second, c);
  }
  return r;
}

Elem Domain::top_elem() const { return {Octagon::top(dims_.size()), AffineEqs::top(dims_.size())}; }

void Domain::reduce(Elem& e) const {
  const std::size_t n = dims_.size();
  if (e.is_bottom()) {
    e = bottom_elem(n);
    return;
  }
  for (const auto& eq : e.aff.equalities()) {
    e.oct.add_constraint(eq);
    e.oct.add_constraint(negate(eq));
    if (e.oct.is_bottom()) {
      e = bottom_elem(n);
      return;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto lo = e.oct.lower(i), hi = e.oct.upper(i);
    if (lo && hi && *lo == *hi) e.aff.add_equality({{{i, Int(1)}}, -*lo});
    for (std::size_t j = i + 1; j < n; ++j) {
      Octagon::Bound d1 = e.oct.at(2 * i, 2 * j), d2 = e.oct.at(2 * j, 2 * i);
      if (d1 < Octagon::kInf && d2 < Octagon::kInf && d1 == -d2)
        e.aff.add_equality({{{i, Int(1)}, {j, Int(-1)}}, -Int(d1)});
      Octagon::Bound s1 = e.oct.at(2 * i, 2 * j + 1), s2 = e.oct.at(2 * i + 1, 2 * j);
      if (s1 < Octagon::kInf && s2 < Octagon::kInf && s1 == -s2)
        e.aff.add_equality({{{i, Int(1)}, {j, Int(1)}}, -Int(s1)});
    }
  }
  if (e.is_bottom()) e = bottom_elem(n);
}

namespace {

void assume_rec(Elem& e, const Formula& f, const Domain& d, const std::function<Linear(const LinExpr&)>& lin) {
  if (e.is_bottom()) return;
  switch (f.kind()) {
    case Formula::Kind::True:
      return;
    case Formula::Kind::False:
      e.oct = Octagon::bottom(e.oct.dims());
      e.aff = AffineEqs::bottom(e.aff.dims());
      return;
    case Formula::Kind::Atom:
      if (f.atom().kind() == lia::Atom::Kind::Ge) e.oct.add_constraint(lin(f.atom().expr()));
      return;
    case Formula::Kind::And: {
      std::vector<LinExpr> ges;
      for (const auto& c : f.children())
        if (c.kind() == Formula::Kind::Atom && c.atom().kind() == lia::Atom::Kind::Ge) ges.push_back(c.atom().expr());
      for (std::size_t a = 0; a < ges.size(); ++a)
        for (std::size_t b = a + 1; b < ges.size(); ++b)
          if (ges[a] == -ges[b]) e.aff.add_equality(lin(ges[a]));
      for (const auto& c : f.children()) assume_rec(e, c, d, lin);
      return;
    }
    case Formula::Kind::Or: {
      std::optional<Elem> acc;
      for (const auto& c : f.children()) {
        Elem x = e;
        assume_rec(x, c, d, lin);
        d.reduce(x);
        if (x.is_bottom()) continue;
        if (!acc) {
          acc = x;
        } else {
          acc->oct = join(acc->oct, x.oct);
          acc->aff = join(acc->aff, x.aff);
        }
      }
      if (!acc) {
        e.oct = Octagon::bottom(e.oct.dims());
        e.aff = AffineEqs::bottom(e.aff.dims());
      } else {
        e = *acc;
      }
      return;
    }
    default:
      return;
  }
}

}  // namespace

Elem Domain::assume(const Elem& e, const Formula& numeric) const {
  Elem r = e;
  if (r.is_bottom()) return r;
  assume_rec(r, lia::nnf(numeric), *this, [this](const LinExpr& x) { return linear(x); });
  reduce(r);
  return r;
}

Elem Domain::transfer(const Elem& e, const Stmt& s) const {
  SymbolicEnv env = identity_env(p_);
  env.bool_value = [](const std::string& n) { return lia::f_eq(LinExpr::of(Var::named(n)), LinExpr(1)); };
  if (e.is_bottom()) return e;
  switch (s.kind) {
    case Stmt::Kind::Assign: {
      std::size_t v = dim_index_.at(s.target);
      if (dim_bool_[v]) {
        Formula c = sym_bool(s.value, env);
        Elem t = assume(e, c), f = assume(e, lia::f_not(c));
        Linear one{{}, Int(1)}, zero{{}, Int(0)};
        t.oct.assign(v, one);
        t.aff.assign(v, one);
        f.oct.assign(v, zero);
        f.aff.assign(v, zero);
        reduce(t);
        reduce(f);
        if (t.is_bottom()) return f;
        if (f.is_bottom()) return t;
        Elem r{backend::join(t.oct, f.oct), backend::join(t.aff, f.aff)};
        reduce(r);
        return r;
      }
      Linear rhs = linear(sym_int(s.value, env));
      Elem r = e;
      r.oct.assign(v, rhs);
      r.aff.assign(v, rhs);
      reduce(r);
      return r;
    }
    case Stmt::Kind::Havoc: {
      std::size_t v = dim_index_.at(s.target);
      Elem r = e;
      r.oct.forget(v);
      r.aff.forget(v);
      const lang::VarDecl* d = p_.scalar(s.target);
      Int hi = -1;
      if (dim_bool_[v]) hi = 1;
      if (d->type.sort == lang::Type::Sort::Enum)
        if (const lang::EnumDecl* en = p_.enumeration(d->type.enum_name)) hi = Int(en->values.size()) - 1;
      if (hi >= 0) {
        r.oct.add_constraint({{{v, Int(1)}}, Int(0)});
        r.oct.add_constraint({{{v, Int(-1)}}, hi});
      }
      reduce(r);
      return r;
    }
    case Stmt::Kind::Assume:
    case Stmt::Kind::Assert:
    case Stmt::Kind::BoundsCheck:
      return assume(e, sym_bool(s.cond, env));
    default:
      throw std::invalid_argument("transfer: not an atomic statement");
  }
}

Formula Domain::condition(const Key& k, const ExprPtr& c) const {
  SymbolicEnv env = identity_env(p_);
  env.bool_value = [this, &k](const std::string& n) -> Formula {
    auto it = bool_index_.find(n);
    if (it != bool_index_.end()) return lia::f_bool(k[it->second]);
    return lia::f_eq(LinExpr::of(Var::named(n)), LinExpr(1));
  };
  return sym_bool(c, env);
}

void Domain::insert(AbstractState& s, Key k, Elem e) const {
  if (e.is_bottom()) return;
  auto it = s.parts.find(k);
  if (it == s.parts.end()) {
    s.parts.emplace(std::move(k), std::move(e));
    return;
  }
  Elem j{backend::join(it->second.oct, e.oct), backend::join(it->second.aff, e.aff)};
  reduce(j);
  it->second = std::move(j);
}

AbstractState Domain::resplit(const AbstractState& s, std::size_t v) const {
  if (preds_of_dim_[v].empty()) return s;
  AbstractState out;
  for (const auto& [k, e] : s.parts) {
    std::vector<std::pair<Key, Elem>> cur{{k, e}};
    for (std::size_t j : preds_of_dim_[v]) {
      std::vector<std::pair<Key, Elem>> next;
      for (auto& [kk, ee] : cur) {
        Elem t = assume(ee, preds_[j]);
        Elem f = assume(ee, lia::f_not(preds_[j]));
        std::size_t bit = bools_.size() + j;
        if (!t.is_bottom()) {
          Key kt = kk;
          kt[bit] = true;
          next.emplace_back(std::move(kt), std::move(t));
        }
        if (!f.is_bottom()) {
          Key kf = kk;
          kf[bit] = false;
          next.emplace_back(std::move(kf), std::move(f));
        }
      }
      cur = std::move(next);
    }
    for (auto& [kk, ee] : cur) insert(out, std::move(kk), std::move(ee));
  }
  return out;
}

AbstractState Domain::split_all(const AbstractState& s) const {
  AbstractState out;
  for (const auto& [k, e] : s.parts) {
    std::vector<std::pair<Key, Elem>> cur{{k, e}};
    for (std::size_t j = 0; j < preds_.size(); ++j) {
      std::vector<std::pair<Key, Elem>> next;
      for (auto& [kk, ee] : cur)
        for (bool b : {true, false}) {
          Elem x = assume(ee, b ? preds_[j] : lia::f_not(preds_[j]));
          if (x.is_bottom()) continue;
          Key kx = kk;
          kx[bools_.size() + j] = b;
          next.emplace_back(std::move(kx), std::move(x));
        }
      cur = std::move(next);
    }
    for (auto& [kk, ee] : cur) insert(out, std::move(kk), std::move(ee));
  }
  return out;
}

AbstractState Domain::initial() const {
  Elem e = top_elem();
  for (const auto& d : p_.params) {
    auto it = dim_index_.find(d.name);
    if (it == dim_index_.end()) continue;
    if (d.type.sort == lang::Type::Sort::Enum || d.type.is_bool()) e = transfer(e, Stmt::havoc(d.name));
  }
  for (const auto& d : p_.locals) {
    auto it = dim_index_.find(d.name);
    if (it == dim_index_.end()) continue;
    Linear zero{{}, Int(0)};
    e.oct.assign(it->second, zero);
    e.aff.assign(it->second, zero);
  }
  reduce(e);
  std::vector<Key> keys{Key(bools_.size() + preds_.size(), false)};
  for (const auto& d : p_.params) {
    auto it = bool_index_.find(d.name);
    if (it == bool_index_.end()) continue;
    std::vector<Key> more;
    for (auto k : keys) {
      k[it->second] = true;
      more.push_back(k);
    }
    keys.insert(keys.end(), more.begin(), more.end());
  }
  AbstractState s;
  for (auto& k : keys) insert(s, k, e);
  return split_all(s);
}

AbstractState Domain::assume(const AbstractState& s, const ExprPtr& cond) const {
  AbstractState out;
  for (const auto& [k, e] : s.parts) insert(out, k, assume(e, condition(k, cond)));
  return out;
}

bool Domain::may_violate(const AbstractState& s, const ExprPtr& cond) const {
  for (const auto& [k, e] : s.parts)
    if (!assume(e, lia::f_not(condition(k, cond))).is_bottom()) return true;
  return false;
}

AbstractState Domain::transfer(const AbstractState& s, const Stmt& st) const {
  using SK = Stmt::Kind;
  if (st.kind == SK::Assume || st.kind == SK::Assert || st.kind == SK::BoundsCheck) return assume(s, st.cond);
  if (st.kind != SK::Assign && st.kind != SK::Havoc) throw std::invalid_argument("transfer: not an atomic statement");
  auto b = bool_index_.find(st.target);
  AbstractState out;
  if (b != bool_index_.end()) {
    for (const auto& [k, e] : s.parts) {
      Key kt = k, kf = k;
      kt[b->second] = true;
      kf[b->second] = false;
      if (st.kind == SK::Havoc) {
        insert(out, kt, e);
        insert(out, kf, e);
        continue;
      }
      Formula c = condition(k, st.value);
      insert(out, kt, assume(e, c));
      insert(out, kf, assume(e, lia::f_not(c)));
    }
    return out;
  }
  std::size_t v = dim_index_.at(st.target);
  for (const auto& [k, e] : s.parts) insert(out, k, transfer(e, st));
  return resplit(out, v);
}

AbstractState Domain::join(const AbstractState& a, const AbstractState& b) const {
  AbstractState out = a;
  for (const auto& [k, e] : b.parts) insert(out, k, e);
  return out;
}

AbstractState Domain::widen(const AbstractState& a, const AbstractState& b) const {
  AbstractState out;
  for (const auto& [k, e] : b.parts) {
    auto it = a.parts.find(k);
    if (it == a.parts.end()) {
      out.parts.emplace(k, e);
    } else {
      out.parts.emplace(k, Elem{backend::widen(it->second.oct, e.oct), backend::join(it->second.aff, e.aff)});
    }
  }
  for (const auto& [k, e] : a.parts)
    if (!out.parts.count(k)) out.parts.emplace(k, e);
  return out;
}

bool Domain::leq(const AbstractState& a, const AbstractState& b) const {
  for (const auto& [k, e] : a.parts) {
    auto it = b.parts.find(k);
    if (it == b.parts.end()) return false;
    if (!backend::leq(e.oct, it->second.oct) || !backend::leq(e.aff, it->second.aff)) return false;
  }
  return true;
}

AbstractState Domain::close(const AbstractState& s) const {
  AbstractState out;
  for (const auto& [k, e] : s.parts) {
    Elem c = e;
    c.oct.close();
    reduce(c);
    insert(out, k, std::move(c));
  }
  return out;
}

Formula Domain::to_formula(const Key& k, const Elem& e) const {
  if (e.is_bottom()) return lia::f_false();
  std::vector<Formula> cs;
  for (std::size_t i = 0; i < bools_.size(); ++i) {
    Formula v = lia::f_var(Var::named(bools_[i]));
    cs.push_back(k[i] ? v : lia::f_not(v));
  }
  std::vector<Formula> num;
  for (const auto& c : e.oct.constraints()) {
    LinExpr l = LinExpr::of(Var::named(dims_[c.i]), Int(c.a));
    if (c.b != 0) l += LinExpr::of(Var::named(dims_[c.j]), Int(c.b));
    num.push_back(lia::f_le(l, LinExpr(c.bound)));
  }
  for (const auto& eq : e.aff.equalities()) num.push_back(lia::f_eq(to_linexpr(eq, dims_), LinExpr(0)));
  Formula body = lia::f_and(num);
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (!dim_bool_[i]) continue;
    Var v = Var::named(dims_[i]);
    body = lia::f_or(lia::f_and(lia::f_var(v), lia::substitute(body, v, LinExpr(1))),
                     lia::f_and(lia::f_not(lia::f_var(v)), lia::substitute(body, v, LinExpr(0))));
  }
  cs.push_back(body);
  return lia::f_and(cs);
}

Formula Domain::to_formula(const AbstractState& s) const {
  std::vector<Formula> ds;
  for (const auto& [k, e] : s.parts) ds.push_back(to_formula(k, e));
  return lia::f_or(ds);
}

std::string Domain::to_string(const AbstractState& s) const {
  if (s.is_bottom()) return "  false\n";
  std::ostringstream os;
  for (const auto& [k, e] : s.parts) {
    os << "  [";
    for (std::size_t i = 0; i < bools_.size(); ++i) os << (i ? ", " : "") << bools_[i] << "=" << (k[i] ? "true" : "false");
    for (std::size_t j = 0; j < preds_.size(); ++j)
      os << (bools_.size() + j ? ", " : "") << (k[bools_.size() + j] ? "" : "!") << "(" << pred_text_[j] << ")";
    os << "]";
    std::vector<std::string> cs;
    for (const auto& c : e.oct.constraints()) cs.push_back(backend::to_string(c, dims_));
    for (const auto& eq : e.aff.equalities()) cs.push_back(lia::to_string(to_linexpr(eq, dims_)) + " == 0");
    if (cs.empty()) cs.push_back("true");
    for (std::size_t i = 0; i < cs.size(); ++i) os << (i ? " && " : " ") << cs[i];
    os << "\n";
  }
  return os.str();
}

AbstractState join_widen(const Domain& d, const AbstractState& a, const AbstractState& b, int iteration,
                         const AnalysisConfig& cfg) {
  AbstractState j = d.join(a, b);
  if (iteration < cfg.widening_delay) return j;
  return d.widen(a, j);
}

namespace {

class Analyzer {
 public:
  Analyzer(const Program& p, const AnalysisConfig& cfg) : d_(p, cfg), cfg_(cfg) {}

  AbstractResult run(const Program& p) {
    AbstractResult r;
    r.exit = exec(p.body, d_.initial());
    r.invariant = d_.to_formula(r.exit);
    r.failures = failures_;
    r.locations = locations_;
    for (const auto& t : d_.dropped_predicates()) r.warnings.push_back("partition predicate dropped: " + t);
    std::ostringstream os;
    for (const auto& [loc, st] : r.locations) os << loc << ":\n" << d_.to_string(st);
    os << "exit:\n" << d_.to_string(r.exit);
    r.report = os.str();
    return r;
  }

 private:
  AbstractState exec(const Stmt& s, AbstractState in) {
    using SK = Stmt::Kind;
    if (in.is_bottom() && s.kind != SK::While) return in;
    switch (s.kind) {
      case SK::Seq:
        for (const auto& c : s.children) in = exec(c, std::move(in));
        return in;
      case SK::Assign:
      case SK::Havoc:
      case SK::Assume:
        return d_.transfer(in, s);
      case SK::Assert:
      case SK::BoundsCheck:
        if (collecting_ && d_.may_violate(in, s.cond)) {
          bool dup = std::any_of(failures_.begin(), failures_.end(), [&](const PossibleFailure& f) {
            return f.kind == s.kind && f.pos.line == s.pos.line && f.pos.col == s.pos.col;
          });
          if (!dup) failures_.push_back({s.kind, s.pos});
        }
        return d_.assume(in, s.cond);
      case SK::If: {
        AbstractState t = exec(s.children[0], d_.assume(in, s.cond));
        AbstractState e = exec(s.children[1], d_.assume(in, lang::unary(K::Not, s.cond)));
        return d_.join(t, e);
      }
      case SK::While:
        return loop(s, std::move(in));
      case SK::Write:
        throw std::invalid_argument("analyze_abstract: program contains an array write");
    }
    return in;
  }

  AbstractState loop(const Stmt& s, AbstractState entry) {
    const Stmt& body = s.children[0];
    bool saved = collecting_;
    collecting_ = false;
    AbstractState head = entry;
    for (int it = 0;; ++it) {
      AbstractState next = d_.join(entry, exec(body, d_.assume(d_.close(head), s.cond)));
      if (d_.leq(next, head)) break;
      head = join_widen(d_, head, next, it, cfg_);
      if (it > 100'000) throw std::runtime_error("analyze_abstract: no fixpoint");
    }
    head = d_.close(head);
    for (int k = 0; k < cfg_.narrowing_passes; ++k)
      head = d_.join(entry, exec(body, d_.assume(head, s.cond)));
    collecting_ = saved;
    if (collecting_) {
      exec(body, d_.assume(head, s.cond));
      std::string name = "loop@" + std::to_string(s.pos.line) + ":" + std::to_string(s.pos.col);
      auto it = std::find_if(locations_.begin(), locations_.end(), [&](const auto& l) { return l.first == name; });
      if (it != locations_.end()) {
        it->second = head;
      } else {
        locations_.emplace_back(name, head);
      }
    }
    return d_.assume(head, lang::unary(K::Not, s.cond));
  }

  Domain d_;
  const AnalysisConfig& cfg_;
  bool collecting_ = true;
  std::vector<PossibleFailure> failures_;
  std::vector<std::pair<std::string, AbstractState>> locations_;
};

void guards(const ExprPtr& e, const std::set<std::string>& idx, std::vector<ExprPtr>& out) {
  if (e->kind == K::And) {
    for (const auto& a : e->args) guards(a, idx, out);
    return;
  }
  if (e->kind != K::Eq) return;
  for (int side = 0; side < 2; ++side) {
    const ExprPtr& x = e->args[side];
    const ExprPtr& other = e->args[1 - side];
    if (x->kind != K::Var || !idx.count(x->name)) continue;
    std::vector<std::string> names;
    lang::collect_names(other, names);
    if (std::any_of(names.begin(), names.end(), [&](const std::string& n) { return idx.count(n) > 0; })) continue;
    out.push_back(lang::binary(K::Lt, other, x));
    out.push_back(lang::binary(K::Le, other, x));
  }
}

void collect_guards(const Stmt& s, const std::set<std::string>& idx, std::vector<ExprPtr>& out) {
  if (s.kind == Stmt::Kind::If) guards(s.cond, idx, out);
  for (const auto& c : s.children) collect_guards(c, idx, out);
}

}  // namespace

AbstractResult analyze_abstract(const Program& p, const AnalysisConfig& cfg) { return Analyzer(p, cfg).run(p); }

std::vector<ExprPtr> guard_predicates(const Program& p, const std::vector<std::string>& index_vars) {
  std::set<std::string> idx(index_vars.begin(), index_vars.end());
  std::vector<ExprPtr> all;
  collect_guards(p.body, idx, all);
  std::vector<ExprPtr> out;
  std::set<std::string> seen;
  for (const auto& e : all)
    if (seen.insert(lang::to_string(e)).second) out.push_back(e);
  return out;
}

}  // namespace arrabs::backend
