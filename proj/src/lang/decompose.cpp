#include "arrabs/lang/decompose.hpp"

#include <algorithm>

namespace arrabs::lang {

namespace {

bool plain_index(const ExprPtr& e) { return e->kind == Expr::Kind::Var; }

bool simple_value(const ExprPtr& e) {
  return e->kind == Expr::Kind::Var || e->kind == Expr::Kind::IntLit;
}

bool elementary_read(const Stmt& s) {
  if (s.kind != Stmt::Kind::Assign || s.value->kind != Expr::Kind::Read || s.value->old)
    return false;
  for (const auto& i : s.value->args) {
    if (!plain_index(i) || contains_read(i) || i->name == s.target) return false;
  }
  return true;
}

class Decomposer {
 public:
  explicit Decomposer(Program& p) : p_(p) {}

  Stmt run(const Stmt& s) {
    using K = Stmt::Kind;
    switch (s.kind) {
      case K::Seq: {
        std::vector<Stmt> out;
        for (const auto& c : s.children) {
          Stmt r = run(c);
          if (r.kind == K::Seq && c.kind != K::Seq)
            for (auto& x : r.children) out.push_back(std::move(x));
          else
            out.push_back(std::move(r));
        }
        Stmt q = Stmt::seq(std::move(out));
        q.pos = s.pos;
        return q;
      }
      case K::Assign: {
        if (!contains_read(s.value) || elementary_read(s)) return s;
        std::vector<Stmt> pre;
        if (s.value->kind == Expr::Kind::Read && !s.value->old) {
          std::vector<ExprPtr> idx = plain_indices(s.value->args, pre, s.target);
          pre.push_back(Stmt::assign(s.target, read(s.value->name, idx, false, s.value->pos), s.pos));
          return group(std::move(pre));
        }
        ExprPtr v = hoist(s.value, pre);
        pre.push_back(Stmt::assign(s.target, v, s.pos));
        return group(std::move(pre));
      }
      case K::Write: {
        bool ok = std::all_of(s.index.begin(), s.index.end(),
                              [](const ExprPtr& i) { return plain_index(i); }) &&
                  simple_value(s.value);
        if (ok) return s;
        std::vector<Stmt> pre;
        std::vector<ExprPtr> idx = plain_indices(s.index, pre, "");
        ExprPtr v = hoist(s.value, pre);
        if (!simple_value(v)) v = temp(v, pre);
        pre.push_back(Stmt::write(s.target, idx, v, s.pos));
        return group(std::move(pre));
      }
      case K::If: {
        std::vector<Stmt> pre;
        ExprPtr c = hoist(s.cond, pre);
        pre.push_back(Stmt::if_(c, run(s.children[0]), run(s.children[1]), s.pos));
        return group(std::move(pre));
      }
      case K::While: {
        std::vector<Stmt> pre;
        ExprPtr c = hoist(s.cond, pre);
        Stmt body = run(s.children[0]);
        for (const auto& x : pre) body.children.push_back(x);
        pre.push_back(Stmt::while_(c, std::move(body), s.pos));
        return group(std::move(pre));
      }
      case K::Assume:
      case K::Assert:
      case K::BoundsCheck: {
        if (!contains_read(s.cond)) return s;
        std::vector<Stmt> pre;
        Stmt r = s;
        r.cond = hoist(s.cond, pre);
        pre.push_back(std::move(r));
        return group(std::move(pre));
      }
      case K::Havoc:
        return s;
    }
    return s;
  }

 private:
  static Stmt group(std::vector<Stmt> ss) {
    if (ss.size() == 1) return std::move(ss.front());
    return Stmt::seq(std::move(ss));
  }

  std::string new_temp() {
    std::string n = p_.fresh_name("tmp");
    p_.locals.push_back({n, Type::integer(), {}});
    return n;
  }

  ExprPtr temp(const ExprPtr& v, std::vector<Stmt>& pre) {
    std::string t = new_temp();
    pre.push_back(Stmt::assign(t, v, v->pos));
    return var(t, v->pos);
  }

  // Index expressions turned into variables distinct from `avoid`.
  std::vector<ExprPtr> plain_indices(const std::vector<ExprPtr>& idx, std::vector<Stmt>& pre,
                                     const std::string& avoid) {
    std::vector<ExprPtr> out;
    for (const auto& i : idx) {
      ExprPtr h = hoist(i, pre);
      if (h->kind != Expr::Kind::Var || h->name == avoid) h = temp(h, pre);
      out.push_back(h);
    }
    return out;
  }

  // Replaces every read in e (innermost first) by a fresh temporary.
  ExprPtr hoist(const ExprPtr& e, std::vector<Stmt>& pre) {
    if (!contains_read(e)) return e;
    if (e->kind == Expr::Kind::Read) {
      std::vector<ExprPtr> idx = plain_indices(e->args, pre, "");
      std::string t = new_temp();
      pre.push_back(Stmt::assign(t, read(e->name, idx, false, e->pos), e->pos));
      return var(t, e->pos);
    }
    Expr copy = *e;
    for (auto& a : copy.args) a = hoist(a, pre);
    return std::make_shared<const Expr>(std::move(copy));
  }

  Program& p_;
};

void number(Stmt& s, int& next) {
  if (s.kind == Stmt::Kind::Write || (s.kind == Stmt::Kind::Assign && s.value &&
                                      s.value->kind == Expr::Kind::Read))
    s.site = next++;
  for (auto& c : s.children) number(c, next);
}

bool elementary_everywhere(const Stmt& s) {
  if (!is_elementary(s)) return false;
  return std::all_of(s.children.begin(), s.children.end(), elementary_everywhere);
}

}  // namespace

bool is_elementary(const Stmt& s) {
  using K = Stmt::Kind;
  switch (s.kind) {
    case K::Assign:
      return !contains_read(s.value) || elementary_read(s);
    case K::Write:
      return std::all_of(s.index.begin(), s.index.end(),
                         [](const ExprPtr& i) { return plain_index(i); }) &&
             simple_value(s.value);
    case K::If:
    case K::While:
    case K::Assume:
    case K::Assert:
    case K::BoundsCheck:
      return !contains_read(s.cond);
    default:
      return true;
  }
}

bool all_accesses_elementary(const Program& p) { return elementary_everywhere(p.body); }

Program decompose_accesses(const Program& p) {
  if (all_accesses_elementary(p)) return p;
  Program out = p;
  Decomposer d(out);
  out.body = d.run(p.body);
  number_access_sites(out);
  return out;
}

void number_access_sites(Program& p) {
  int next = 0;
  number(p.body, next);
}

}  // namespace arrabs::lang
