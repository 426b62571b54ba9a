#include "arrabs/backend/exact.hpp"

#include "arrabs/backend/symbolic.hpp"
#include "arrabs/lia/solver.hpp"

#include <map>
#include <set>

namespace arrabs::backend {

using lang::Program;
using lang::Stmt;
using lia::Formula;
using lia::LinExpr;
using lia::Var;

namespace {

struct SymState {
  std::map<std::string, LinExpr> ints;
  std::map<std::string, Formula> bools;
  std::vector<Formula> path;
  std::vector<Var> havocs;
};

class Executor {
 public:
  Executor(const Program& p, const ExactOptions& opts) : p_(p), opts_(opts) {}

  ExactResult run() {
    SymState init;
    for (const auto& d : p_.params) {
      if (d.type.is_bool()) {
        init.bools[d.name] = lia::f_var(Var::named(d.name));
      } else {
        init.ints[d.name] = LinExpr::of(Var::named(d.name));
        if (d.type.sort == lang::Type::Sort::Enum) init.path.push_back(domain(d, init.ints[d.name]));
      }
    }
    for (const auto& d : p_.locals) {
      if (d.type.is_bool()) {
        init.bools[d.name] = lia::f_false();
      } else {
        init.ints[d.name] = LinExpr(0);
      }
    }
    std::vector<SymState> finals = exec(p_.body, {std::move(init)});
    ExactResult r;
    std::set<Formula, FormulaLess> seen;
    std::vector<Formula> exits;
    for (const auto& s : finals) {
      Formula rel = relation(s);
      if (rel.is_false() || !seen.insert(rel).second) continue;
      r.paths.push_back({rel});
      exits.push_back(rel);
    }
    r.exit = lia::f_or(exits);
    std::vector<Formula> fails;
    for (const auto& f : failures_) fails.push_back(f.state);
    r.failure = lia::f_or(fails);
    r.failures = std::move(failures_);
    return r;
  }

 private:
  struct FormulaLess {
    bool operator()(const Formula& a, const Formula& b) const {
      return lia::to_string(a) < lia::to_string(b);
    }
  };

  Formula domain(const lang::VarDecl& d, const LinExpr& v) const {
    const lang::EnumDecl* e = p_.enumeration(d.type.enum_name);
    lia::Int k = e ? lia::Int(e->values.size()) : lia::Int(1);
    return lia::f_and(lia::f_le(LinExpr(0), v), lia::f_lt(v, LinExpr(k)));
  }

  SymbolicEnv env(const SymState& s) const {
    SymbolicEnv e;
    e.program = &p_;
    e.int_value = [&s](const std::string& n) { return s.ints.at(n); };
    e.bool_value = [&s](const std::string& n) { return s.bools.at(n); };
    return e;
  }

  bool feasible(const std::vector<Formula>& path, const Formula& extra) {
    if (extra.is_false()) return false;
    std::vector<Formula> all = path;
    all.push_back(extra);
    return lia::is_sat(lia::f_and(all), opts_.limits).has_value();
  }

  Formula relation(const SymState& s) const {
    std::vector<Formula> cs = s.path;
    for (const auto& d : p_.locals) {
      Var v = Var::named(d.name);
      if (d.type.is_bool()) {
        cs.push_back(lia::f_iff(lia::f_var(v), s.bools.at(d.name)));
      } else {
        cs.push_back(lia::f_eq(LinExpr::of(v), s.ints.at(d.name)));
      }
    }
    Formula body = lia::f_and(cs);
    if (s.havocs.empty()) return body;
    return lia::eliminate_quantifiers(lia::f_exists(s.havocs, body), opts_.limits);
  }

  void count(std::size_t n) {
    if (n > opts_.path_cap) throw PathCapExceeded("path cap of " + std::to_string(opts_.path_cap) + " exceeded");
  }

  std::vector<SymState> exec(const Stmt& s, std::vector<SymState> in) {
    using SK = Stmt::Kind;
    std::vector<SymState> out;
    switch (s.kind) {
      case SK::Seq:
        for (const auto& c : s.children) {
          if (in.empty()) break;
          in = exec(c, std::move(in));
        }
        return in;
      case SK::Assign:
        for (auto& st : in) {
          const lang::VarDecl* d = p_.scalar(s.target);
          if (d->type.is_bool()) {
            Formula v = sym_bool(s.value, env(st));
            st.bools[s.target] = v;
          } else {
            LinExpr v = sym_int(s.value, env(st));
            st.ints[s.target] = v;
          }
        }
        return in;
      case SK::Havoc:
        for (auto& st : in) {
          const lang::VarDecl* d = p_.scalar(s.target);
          Var h = Var::fresh(s.target + "$h");
          st.havocs.push_back(h);
          if (d->type.is_bool()) {
            st.bools[s.target] = lia::f_var(h);
            continue;
          }
          LinExpr v = LinExpr::of(h);
          st.ints[s.target] = v;
          if (d->type.sort == lang::Type::Sort::Enum) {
            st.path.push_back(domain(*d, v));
          } else if (opts_.havoc_range) {
            st.path.push_back(lia::f_le(LinExpr(opts_.havoc_range->first), v));
            st.path.push_back(lia::f_le(v, LinExpr(opts_.havoc_range->second)));
          }
        }
        return in;
      case SK::Assume:
        for (auto& st : in) {
          Formula c = sym_bool(s.cond, env(st));
          if (c.is_true()) {
            out.push_back(std::move(st));
          } else if (feasible(st.path, c)) {
            st.path.push_back(c);
            out.push_back(std::move(st));
          }
        }
        return out;
      case SK::Assert:
      case SK::BoundsCheck:
        for (auto& st : in) {
          Formula c = sym_bool(s.cond, env(st));
          if (c.is_true()) {
            out.push_back(std::move(st));
            continue;
          }
          Formula nc = lia::f_not(c);
          if (feasible(st.path, nc)) {
            SymState bad = st;
            bad.path.push_back(nc);
            failures_.push_back({s.kind, s.pos, relation(bad)});
          }
          if (feasible(st.path, c)) {
            st.path.push_back(c);
            out.push_back(std::move(st));
          }
        }
        return out;
      case SK::If: {
        std::vector<SymState> then_in, else_in;
        for (auto& st : in) {
          Formula c = sym_bool(s.cond, env(st));
          Formula nc = lia::f_not(c);
          bool t = !c.is_false() && (nc.is_false() || feasible(st.path, c));
          bool e = !nc.is_false() && (c.is_false() || feasible(st.path, nc));
          if (t && e) {
            SymState copy = st;
            copy.path.push_back(nc);
            else_in.push_back(std::move(copy));
            st.path.push_back(c);
            then_in.push_back(std::move(st));
          } else if (t) {
            then_in.push_back(std::move(st));
          } else if (e) {
            else_in.push_back(std::move(st));
          }
        }
        count(then_in.size() + else_in.size());
        out = exec(s.children[0], std::move(then_in));
        for (auto& st : exec(s.children[1], std::move(else_in))) out.push_back(std::move(st));
        count(out.size());
        return out;
      }
      case SK::While:
        throw std::invalid_argument("analyze_loopfree_exact: program contains a loop");
      case SK::Write:
        throw std::invalid_argument("analyze_loopfree_exact: program contains an array write");
    }
    return out;
  }

  const Program& p_;
  const ExactOptions& opts_;
  std::vector<Failure> failures_;
};

Stmt unroll_stmt(const Stmt& s, int k, UnrollMode mode) {
  using SK = Stmt::Kind;
  switch (s.kind) {
    case SK::Seq:
    case SK::If: {
      Stmt r = s;
      for (auto& c : r.children) c = unroll_stmt(c, k, mode);
      return r;
    }
    case SK::While: {
      Stmt body = unroll_stmt(s.children[0], k, mode);
      std::vector<Stmt> out;
      for (int i = 0; i < k; ++i) out.push_back(Stmt::if_(s.cond, body, Stmt::seq(), s.pos));
      lang::ExprPtr exit = lang::unary(lang::Expr::Kind::Not, s.cond);
      out.push_back(mode == UnrollMode::Assume ? Stmt::assume(exit, s.pos) : Stmt::assert_(exit, s.pos));
      Stmt r = Stmt::seq(std::move(out));
      r.pos = s.pos;
      return r;
    }
    default:
      return s;
  }
}

}  // namespace

ExactResult analyze_loopfree_exact(const Program& p, const ExactOptions& opts) {
  return Executor(p, opts).run();
}

Program unroll(const Program& p, int k, UnrollMode mode) {
  Program r = p;
  r.body = unroll_stmt(p.body, k, mode);
  return r;
}

}  // namespace arrabs::backend
