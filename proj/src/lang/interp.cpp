#include "arrabs/lang/interp.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace arrabs::lang {

namespace {

using K = Expr::Kind;

Value checked(__int128 v) {
  if (v > std::numeric_limits<Value>::max() || v < std::numeric_limits<Value>::min())
    throw EnumerationBudgetExceeded("integer overflow during enumeration");
  return static_cast<Value>(v);
}

Value to_value(const Int& v) {
  if (v > std::numeric_limits<Value>::max() || v < std::numeric_limits<Value>::min())
    throw EnumerationBudgetExceeded("literal out of enumeration range");
  return v.convert_to<Value>();
}

Value floor_mod(Value a, Value m) {
  Value r = a % m;
  return r < 0 ? r + m : r;
}

struct ArrayLayout {
  std::size_t offset = 0;
  std::vector<Value> dims;
  std::size_t size = 1;
};

/// Flat state: scalar slots, then array cells, then the status.
using Flat = std::vector<Value>;

struct VecHash {
  std::size_t operator()(const Flat& v) const {
    std::size_t h = v.size();
    for (Value x : v) h = h * 1000003u ^ static_cast<std::size_t>(x) * 0x9e3779b97f4a7c15ull;
    return h;
  }
};

struct CExpr {
  K kind = K::IntLit;
  Value value = 0;
  int slot = -1;   // scalar slot or array id
  std::vector<CExpr> args;
};

struct CStmt {
  Stmt::Kind kind = Stmt::Kind::Seq;
  int slot = -1;   // assigned scalar or written array
  std::vector<CExpr> index;
  CExpr value;
  CExpr cond;
  std::vector<CStmt> children;
  std::vector<Value> havoc_range;
};

class Machine {
 public:
  Machine(const Program& p, const Bounds& b) : p_(p), b_(b) {
    for (const auto* list : {&p.params, &p.locals})
      for (const auto& d : *list) {
        slot_[d.name] = static_cast<int>(scalars_.size());
        scalars_.push_back(&d);
      }
    for (std::size_t i = 0; i < p.arrays.size(); ++i) array_id_[p.arrays[i].name] = static_cast<int>(i);
    body_ = compile(p.body);
  }

  std::vector<Value> range_of(const Type& t, const std::vector<Value>& ints) const {
    if (t.is_bool()) return {0, 1};
    if (t.sort == Type::Sort::Enum) {
      std::vector<Value> r;
      const EnumDecl* e = p_.enumeration(t.enum_name);
      for (std::size_t i = 0; i < e->values.size(); ++i) r.push_back(static_cast<Value>(i));
      return r;
    }
    return ints;
  }

  std::vector<ArrayLayout> layout(const Flat& s) const {
    std::vector<ArrayLayout> out;
    std::size_t off = scalars_.size();
    for (const auto& a : p_.arrays) {
      ArrayLayout l;
      l.offset = off;
      for (const auto& d : a.dims) {
        Value n = d->kind == K::IntLit ? to_value(d->value) : s[slot_.at(d->name)];
        n = std::max<Value>(n, 0);
        l.dims.push_back(n);
        l.size *= static_cast<std::size_t>(n);
      }
      off += l.size;
      out.push_back(std::move(l));
    }
    return out;
  }

  std::vector<ConcreteState> initial_states() const {
    std::vector<Flat> partial = {Flat(scalars_.size(), 0)};
    for (std::size_t i = 0; i < p_.params.size(); ++i) {
      const VarDecl& d = p_.params[i];
      auto it = b_.params.find(d.name);
      std::vector<Value> vals = it != b_.params.end() ? it->second : range_of(d.type, b_.param_values);
      std::vector<Flat> next;
      for (const auto& s : partial)
        for (Value v : vals) {
          Flat t = s;
          t[i] = v;
          next.push_back(std::move(t));
        }
      partial = std::move(next);
    }
    std::vector<ConcreteState> out;
    for (const auto& s : partial) {
      auto lay = layout(s);
      std::vector<Flat> states = {s};
      for (std::size_t a = 0; a < lay.size(); ++a) {
        std::vector<Value> vals = range_of(p_.arrays[a].elem, b_.values);
        for (std::size_t c = 0; c < lay[a].size; ++c) {
          std::vector<Flat> next;
          if (states.size() * vals.size() > b_.state_cap)
            throw EnumerationBudgetExceeded("too many initial states");
          for (const auto& st : states)
            for (Value v : vals) {
              Flat t = st;
              t.push_back(v);
              next.push_back(std::move(t));
            }
          states = std::move(next);
        }
      }
      for (auto& st : states) {
        st.push_back(0);
        out.push_back(to_state(st, lay));
      }
      if (out.size() > b_.state_cap) throw EnumerationBudgetExceeded("too many initial states");
    }
    return out;
  }

  std::set<ConcreteState> run(const ConcreteState& init) {
    Flat s = from_state(init);
    layout_ = layout(s);
    visited_ = 0;
    std::vector<Flat> out;
    exec(body_, {s}, out);
    std::set<ConcreteState> res;
    for (const auto& f : out) res.insert(to_state(f, layout_));
    return res;
  }

 private:
  ConcreteState to_state(const Flat& s, const std::vector<ArrayLayout>& lay) const {
    ConcreteState c;
    for (std::size_t i = 0; i < scalars_.size(); ++i) c.scalars[scalars_[i]->name] = s[i];
    for (std::size_t a = 0; a < lay.size(); ++a)
      c.arrays[p_.arrays[a].name] =
          std::vector<Value>(s.begin() + lay[a].offset, s.begin() + lay[a].offset + lay[a].size);
    c.status = static_cast<Status>(s.back());
    return c;
  }

  Flat from_state(const ConcreteState& c) const {
    Flat s;
    for (const auto* d : scalars_) {
      auto it = c.scalars.find(d->name);
      s.push_back(it == c.scalars.end() ? 0 : it->second);
    }
    auto lay = layout(s);
    for (std::size_t a = 0; a < lay.size(); ++a) {
      auto it = c.arrays.find(p_.arrays[a].name);
      for (std::size_t i = 0; i < lay[a].size; ++i)
        s.push_back(it != c.arrays.end() && i < it->second.size() ? it->second[i] : 0);
    }
    s.push_back(static_cast<Value>(c.status));
    return s;
  }

  CExpr compile(const ExprPtr& e) const {
    CExpr c;
    c.kind = e->kind;
    switch (e->kind) {
      case K::IntLit:
      case K::BoolLit:
        c.value = to_value(e->value);
        return c;
      case K::Var: {
        auto it = slot_.find(e->name);
        if (it != slot_.end()) {
          c.slot = it->second;
          return c;
        }
        c.kind = K::IntLit;
        c.value = to_value(p_.enum_constant(e->name).value_or(0));
        return c;
      }
      case K::Read:
        c.slot = array_id_.at(e->name);
        break;
      case K::Divides:
        c.value = to_value(e->args[0]->value);
        c.args.push_back(compile(e->args[1]));
        return c;
      case K::Forall:
      case K::Exists:
        throw std::invalid_argument("quantifier in program statement");
      default:
        break;
    }
    for (const auto& a : e->args) c.args.push_back(compile(a));
    return c;
  }

  CStmt compile(const Stmt& s) const {
    using SK = Stmt::Kind;
    CStmt c;
    c.kind = s.kind;
    switch (s.kind) {
      case SK::Seq:
        for (const auto& x : s.children) c.children.push_back(compile(x));
        break;
      case SK::Assign:
        c.slot = slot_.at(s.target);
        c.value = compile(s.value);
        break;
      case SK::Havoc:
        c.slot = slot_.at(s.target);
        c.havoc_range = range_of(scalars_[c.slot]->type, b_.values);
        break;
      case SK::Write:
        c.slot = array_id_.at(s.target);
        for (const auto& i : s.index) c.index.push_back(compile(i));
        c.value = compile(s.value);
        break;
      case SK::If:
      case SK::While:
        c.cond = compile(s.cond);
        for (const auto& x : s.children) c.children.push_back(compile(x));
        break;
      case SK::Assume:
      case SK::Assert:
      case SK::BoundsCheck:
        c.cond = compile(s.cond);
        break;
    }
    return c;
  }

  /// Flat offset of an array cell, or nullopt when out of bounds.
  std::optional<std::size_t> cell(int array, const std::vector<CExpr>& idx, const Flat& s,
                                  bool& oob) const {
    const ArrayLayout& l = layout_[array];
    std::size_t off = 0;
    for (std::size_t d = 0; d < idx.size(); ++d) {
      Value i = eval(idx[d], s, oob);
      if (i < 0 || i >= l.dims[d]) {
        oob = true;
        return std::nullopt;
      }
      off = off * static_cast<std::size_t>(l.dims[d]) + static_cast<std::size_t>(i);
    }
    return l.offset + off;
  }

  Value eval(const CExpr& e, const Flat& s, bool& oob) const {
    switch (e.kind) {
      case K::IntLit:
      case K::BoolLit:
        return e.value;
      case K::Var:
        return s[e.slot];
      case K::Read: {
        auto c = cell(e.slot, e.args, s, oob);
        return c ? s[*c] : 0;
      }
      case K::Neg:
        return checked(-static_cast<__int128>(eval(e.args[0], s, oob)));
      case K::Not:
        return !eval(e.args[0], s, oob);
      case K::Divides:
        return floor_mod(eval(e.args[0], s, oob), e.value) == 0;
      default:
        break;
    }
    __int128 a = eval(e.args[0], s, oob);
    __int128 b = eval(e.args[1], s, oob);
    switch (e.kind) {
      case K::Add: return checked(a + b);
      case K::Sub: return checked(a - b);
      case K::Mul: return checked(a * b);
      case K::Eq: return a == b;
      case K::Ne: return a != b;
      case K::Lt: return a < b;
      case K::Le: return a <= b;
      case K::Gt: return a > b;
      case K::Ge: return a >= b;
      case K::And: return a && b;
      case K::Or: return a || b;
      case K::Implies: return !a || b;
      default: return 0;
    }
  }

  static void fail(Flat s, Status st, std::vector<Flat>& out) {
    s.back() = static_cast<Value>(st);
    out.push_back(std::move(s));
  }

  void count(std::size_t n) {
    visited_ += n;
    if (visited_ > b_.state_cap) throw EnumerationBudgetExceeded("state budget exceeded");
  }

  static void dedupe(std::vector<Flat>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  void exec(const CStmt& st, std::vector<Flat> in, std::vector<Flat>& out) {
    using SK = Stmt::Kind;
    const Value running = static_cast<Value>(Status::Running);
    if (st.kind == SK::Seq) {
      for (const auto& c : st.children) {
        std::vector<Flat> live, next;
        for (auto& s : in) {
          if (s.back() != running) out.push_back(std::move(s));
          else live.push_back(std::move(s));
        }
        if (live.empty()) return;
        exec(c, std::move(live), next);
        in = std::move(next);
      }
      for (auto& s : in) out.push_back(std::move(s));
      return;
    }
    if (st.kind == SK::While) {
      std::unordered_set<Flat, VecHash> seen;
      std::vector<Flat> frontier;
      for (auto& s : in)
        if (seen.insert(s).second) frontier.push_back(std::move(s));
      while (!frontier.empty()) {
        count(frontier.size());
        std::vector<Flat> body_in;
        for (auto& s : frontier) {
          if (s.back() != running) {
            out.push_back(std::move(s));
            continue;
          }
          bool oob = false;
          Value c = eval(st.cond, s, oob);
          if (oob) fail(std::move(s), Status::OutOfBounds, out);
          else if (c) body_in.push_back(std::move(s));
          else out.push_back(std::move(s));
        }
        frontier.clear();
        if (body_in.empty()) break;
        std::vector<Flat> body_out;
        exec(st.children[0], std::move(body_in), body_out);
        for (auto& s : body_out)
          if (seen.insert(s).second) frontier.push_back(std::move(s));
      }
      return;
    }
    if (st.kind == SK::If) {
      std::vector<Flat> t, e;
      for (auto& s : in) {
        bool oob = false;
        Value c = eval(st.cond, s, oob);
        if (oob) fail(std::move(s), Status::OutOfBounds, out);
        else (c ? t : e).push_back(std::move(s));
      }
      if (!t.empty()) exec(st.children[0], std::move(t), out);
      if (!e.empty()) exec(st.children[1], std::move(e), out);
      return;
    }
    count(in.size());
    if (st.kind == SK::Havoc) {
      std::vector<Flat> res;
      for (const auto& s : in)
        for (Value v : st.havoc_range) {
          Flat t = s;
          t[st.slot] = v;
          res.push_back(std::move(t));
        }
      dedupe(res);
      for (auto& s : res) out.push_back(std::move(s));
      return;
    }
    for (auto& s : in) {
      bool oob = false;
      switch (st.kind) {
        case SK::Assign: {
          Value v = eval(st.value, s, oob);
          if (oob) break;
          s[st.slot] = v;
          out.push_back(std::move(s));
          continue;
        }
        case SK::Write: {
          auto c = cell(st.slot, st.index, s, oob);
          Value v = eval(st.value, s, oob);
          if (oob) break;
          s[*c] = v;
          out.push_back(std::move(s));
          continue;
        }
        case SK::Assume: {
          Value c = eval(st.cond, s, oob);
          if (oob) break;
          if (c) out.push_back(std::move(s));
          continue;
        }
        case SK::Assert:
        case SK::BoundsCheck: {
          Value c = eval(st.cond, s, oob);
          if (oob) break;
          if (!c)
            fail(std::move(s), st.kind == SK::Assert ? Status::AssertFailed : Status::OutOfBounds, out);
          else
            out.push_back(std::move(s));
          continue;
        }
        default:
          continue;
      }
      fail(std::move(s), Status::OutOfBounds, out);
    }
  }

  const Program& p_;
  const Bounds& b_;
  std::vector<const VarDecl*> scalars_;
  std::map<std::string, int> slot_;
  std::map<std::string, int> array_id_;
  CStmt body_;
  std::vector<ArrayLayout> layout_;
  std::size_t visited_ = 0;
};

/// Target evaluation. Reads out of bounds make the enclosing comparison
/// false.
class TargetEval {
 public:
  TargetEval(const Program& p, const Execution& e) : p_(p), e_(e) {
    for (const auto& a : p.arrays) {
      std::vector<Value> dims;
      for (const auto& d : a.dims) {
        Value n = d->kind == K::IntLit ? to_value(d->value) : e.initial.scalars.at(d->name);
        dims.push_back(std::max<Value>(n, 0));
        hi_ = std::max(hi_, n);
      }
      dims_[a.name] = std::move(dims);
    }
  }

  bool holds(const Target& t) {
    return forall(t.bound, 0, t.body);
  }

 private:
  bool forall(const std::vector<std::string>& vs, std::size_t i, const ExprPtr& body) {
    if (i == vs.size()) return truth(body);
    for (Value v = -1; v <= hi_; ++v) {
      env_[vs[i]] = v;
      if (!forall(vs, i + 1, body)) return false;
    }
    env_.erase(vs[i]);
    return true;
  }

  bool exists(const std::vector<std::string>& vs, std::size_t i, const ExprPtr& body) {
    if (i == vs.size()) return truth(body);
    for (Value v = -1; v <= hi_; ++v) {
      env_[vs[i]] = v;
      if (exists(vs, i + 1, body)) return true;
    }
    env_.erase(vs[i]);
    return false;
  }

  std::optional<Value> num(const ExprPtr& e) {
    switch (e->kind) {
      case K::IntLit:
      case K::BoolLit:
        return to_value(e->value);
      case K::Var: {
        if (auto it = env_.find(e->name); it != env_.end()) return it->second;
        if (auto it = e_.final.scalars.find(e->name); it != e_.final.scalars.end()) return it->second;
        return to_value(p_.enum_constant(e->name).value_or(0));
      }
      case K::Read: {
        const auto& dims = dims_.at(e->name);
        std::size_t off = 0;
        for (std::size_t d = 0; d < dims.size(); ++d) {
          auto i = num(e->args[d]);
          if (!i || *i < 0 || *i >= dims[d]) return std::nullopt;
          off = off * static_cast<std::size_t>(dims[d]) + static_cast<std::size_t>(*i);
        }
        const auto& st = e->old ? e_.initial : e_.final;
        return st.arrays.at(e->name)[off];
      }
      case K::Neg: {
        auto a = num(e->args[0]);
        if (!a) return a;
        return checked(-static_cast<__int128>(*a));
      }
      case K::Add:
      case K::Sub:
      case K::Mul: {
        auto a = num(e->args[0]);
        auto b = num(e->args[1]);
        if (!a || !b) return std::nullopt;
        __int128 x = *a, y = *b;
        return checked(e->kind == K::Add ? x + y : e->kind == K::Sub ? x - y : x * y);
      }
      default:
        return truth(e) ? 1 : 0;
    }
  }

  bool truth(const ExprPtr& e) {
    switch (e->kind) {
      case K::BoolLit:
        return e->value != 0;
      case K::Var:
        return num(e).value_or(0) != 0;
      case K::Not:
        return !truth(e->args[0]);
      case K::And:
        return truth(e->args[0]) && truth(e->args[1]);
      case K::Or:
        return truth(e->args[0]) || truth(e->args[1]);
      case K::Implies:
        return !truth(e->args[0]) || truth(e->args[1]);
      case K::Forall:
        return forall(e->bound, 0, e->args[0]);
      case K::Exists:
        return exists(e->bound, 0, e->args[0]);
      case K::Divides: {
        auto a = num(e->args[1]);
        return a && floor_mod(*a, to_value(e->args[0]->value)) == 0;
      }
      default:
        break;
    }
    auto a = num(e->args[0]);
    auto b = num(e->args[1]);
    if (!a || !b) return false;
    switch (e->kind) {
      case K::Eq: return *a == *b;
      case K::Ne: return *a != *b;
      case K::Lt: return *a < *b;
      case K::Le: return *a <= *b;
      case K::Gt: return *a > *b;
      case K::Ge: return *a >= *b;
      default: return false;
    }
  }

  const Program& p_;
  const Execution& e_;
  std::map<std::string, std::vector<Value>> dims_;
  std::map<std::string, Value> env_;
  Value hi_ = 0;
};

}  // namespace

std::vector<ConcreteState> initial_states(const Program& p, const Bounds& b) {
  return Machine(p, b).initial_states();
}

std::set<Execution> execute(const Program& p, const std::vector<ConcreteState>& init,
                            const Bounds& b) {
  Machine m(p, b);
  std::set<Execution> out;
  for (const auto& s : init)
    for (auto& f : m.run(s)) out.insert(Execution{s, f});
  return out;
}

std::set<Execution> enumerate_relation(const Program& p, const Bounds& b) {
  return execute(p, initial_states(p, b), b);
}

std::set<ConcreteState> enumerate_executions(const Program& p, const Bounds& b) {
  std::set<ConcreteState> out;
  for (const auto& e : enumerate_relation(p, b)) out.insert(e.final);
  return out;
}

bool satisfies_target(const Program& p, const Execution& e) {
  if (!p.target) return true;
  if (e.final.status != Status::Running) return false;
  return TargetEval(p, e).holds(*p.target);
}

ConcreteState project(const ConcreteState& s, const std::set<std::string>& names) {
  ConcreteState r;
  r.status = s.status;
  for (const auto& [k, v] : s.scalars)
    if (names.count(k)) r.scalars[k] = v;
  for (const auto& [k, v] : s.arrays)
    if (names.count(k)) r.arrays[k] = v;
  return r;
}

std::string to_string(const ConcreteState& s) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [k, v] : s.scalars) {
    os << (first ? "" : ", ") << k << "=" << v;
    first = false;
  }
  for (const auto& [k, v] : s.arrays) {
    os << (first ? "" : ", ") << k << "=[";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "]";
    first = false;
  }
  if (s.status == Status::AssertFailed) os << (first ? "" : ", ") << "assert-failed";
  if (s.status == Status::OutOfBounds) os << (first ? "" : ", ") << "out-of-bounds";
  os << "}";
  return os.str();
}

}  // namespace arrabs::lang
