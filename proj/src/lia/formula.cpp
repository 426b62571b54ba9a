#include "arrabs/lia/formula.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace arrabs::lia {

// ---------------------------------------------------------------- Atom

std::variant<bool, Atom> Atom::ge(const LinExpr& e) {
  if (e.is_constant()) return e.constant() >= 0;
  Int g = e.content();
  if (g == 1) return Atom(Kind::Ge, e, 0);
  LinExpr r;
  for (const auto& [v, c] : e.terms()) r.add_term(v, c / g);
  r.set_constant(floor_div(e.constant(), g));
  return Atom(Kind::Ge, std::move(r), 0);
}

std::variant<bool, Atom> Atom::divides(const Int& m, const LinExpr& e) {
  if (m == 0) throw std::invalid_argument("divisibility by zero");
  Int mod = abs(m);
  LinExpr r;
  for (const auto& [v, c] : e.terms()) r.add_term(v, mod_floor(c, mod));
  r.set_constant(mod_floor(e.constant(), mod));
  Int g = gcd(mod, gcd(r.content(), r.constant()));
  if (g > 1) {
    mod /= g;
    r = r.exact_div(g);
  }
  if (mod == 1) return true;
  if (r.is_constant()) return r.constant() == 0;
  return Atom(Kind::Div, std::move(r), std::move(mod));
}

Atom Atom::negated_ge() const {
  LinExpr n = -expr_;
  n.set_constant(n.constant() - 1);
  return Atom(Kind::Ge, std::move(n), 0);
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  if (a.modulus_ != b.modulus_)
    return a.modulus_ < b.modulus_ ? std::strong_ordering::less
                                   : std::strong_ordering::greater;
  return a.expr_ <=> b.expr_;
}

// --------------------------------------------------------------- Model

Int Model::int_value(Var v) const {
  auto it = ints.find(v);
  if (it == ints.end())
    throw UnassignedVariable("unassigned integer variable " + v.name());
  return it->second;
}

bool Model::bool_value(Var v) const {
  auto it = bools.find(v);
  if (it == bools.end())
    throw UnassignedVariable("unassigned boolean variable " + v.name());
  return it->second;
}

// ------------------------------------------------------------- Formula

namespace {

std::size_t combine(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

std::size_t atom_hash(const Atom& a) {
  return combine(combine(static_cast<std::size_t>(a.kind()),
                         static_cast<std::size_t>(
                             Int(a.modulus() % 1000000007).convert_to<long long>())),
                 a.expr().hash());
}

const Formula& true_singleton();

}  // namespace

Formula make_node(Formula::Node&& n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 7919u;
  if (n.atom) h = combine(h, atom_hash(*n.atom));
  if (n.var.valid()) h = combine(h, n.var.id());
  for (const auto& k : n.kids) h = combine(h, k.hash());
  for (auto v : n.bound) h = combine(h, v.id() + 17);
  n.hash = h;
  return Formula(std::make_shared<const Formula::Node>(std::move(n)));
}

namespace {
const Formula& true_singleton() {
  static const Formula t = [] {
    Formula::Node n;
    n.kind = Formula::Kind::True;
    return make_node(std::move(n));
  }();
  return t;
}
const Formula& false_singleton() {
  static const Formula f = [] {
    Formula::Node n;
    n.kind = Formula::Kind::False;
    return make_node(std::move(n));
  }();
  return f;
}
}  // namespace

Formula::Formula() : n_(true_singleton().n_) {}

Formula::Kind Formula::kind() const { return n_->kind; }
const Atom& Formula::atom() const { return *n_->atom; }
Var Formula::bool_var() const { return n_->var; }
const std::vector<Formula>& Formula::children() const { return n_->kids; }
const std::vector<Var>& Formula::bound() const { return n_->bound; }
std::size_t Formula::hash() const { return n_->hash; }

bool Formula::is_literal() const {
  switch (kind()) {
    case Kind::Atom:
    case Kind::Bool:
      return true;
    case Kind::Not:
      return body().kind() == Kind::Atom || body().kind() == Kind::Bool;
    default:
      return false;
  }
}

bool Formula::is_quantifier_free() const {
  if (kind() == Kind::Exists || kind() == Kind::Forall) return false;
  return std::all_of(children().begin(), children().end(),
                     [](const Formula& c) { return c.is_quantifier_free(); });
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.n_ == b.n_) return true;
  if (a.n_->hash != b.n_->hash || a.n_->kind != b.n_->kind) return false;
  if (a.n_->atom != b.n_->atom || a.n_->var != b.n_->var ||
      a.n_->bound != b.n_->bound || a.n_->kids.size() != b.n_->kids.size())
    return false;
  for (std::size_t i = 0; i < a.n_->kids.size(); ++i)
    if (!(a.n_->kids[i] == b.n_->kids[i])) return false;
  return true;
}

Formula f_true() { return true_singleton(); }
Formula f_false() { return false_singleton(); }
Formula f_bool(bool b) { return b ? f_true() : f_false(); }

Formula f_atom(const Atom& a) {
  Formula::Node n;
  n.kind = Formula::Kind::Atom;
  n.atom = a;
  return make_node(std::move(n));
}

namespace {
Formula from_normalized(const std::variant<bool, Atom>& v) {
  if (auto* b = std::get_if<bool>(&v)) return f_bool(*b);
  return f_atom(std::get<Atom>(v));
}
}  // namespace

Formula f_var(Var b) {
  Formula::Node n;
  n.kind = Formula::Kind::Bool;
  n.var = b;
  return make_node(std::move(n));
}

Formula f_ge(const LinExpr& e) { return from_normalized(Atom::ge(e)); }
Formula f_le(const LinExpr& a, const LinExpr& b) { return f_ge(b - a); }
Formula f_geq(const LinExpr& a, const LinExpr& b) { return f_ge(a - b); }
Formula f_lt(const LinExpr& a, const LinExpr& b) { return f_ge(b - a - 1); }
Formula f_gt(const LinExpr& a, const LinExpr& b) { return f_ge(a - b - 1); }
Formula f_eq(const LinExpr& a, const LinExpr& b) {
  return f_and(f_ge(a - b), f_ge(b - a));
}
Formula f_ne(const LinExpr& a, const LinExpr& b) {
  return f_or(f_gt(a, b), f_lt(a, b));
}
Formula f_divides(const Int& m, const LinExpr& e) {
  return from_normalized(Atom::divides(m, e));
}

Formula f_not(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return f_false();
    case Formula::Kind::False:
      return f_true();
    case Formula::Kind::Atom:
      if (f.atom().kind() == Atom::Kind::Ge)
        return f_atom(f.atom().negated_ge());
      break;
    case Formula::Kind::Not:
      return f.body();
    default:
      break;
  }
  Formula::Node n;
  n.kind = Formula::Kind::Not;
  n.kids = {f};
  return make_node(std::move(n));
}

namespace {

// Syntactic complement used to detect p && !p and p || !p.
std::optional<Formula> complement_literal(const Formula& f) {
  if (f.kind() == Formula::Kind::Atom || f.kind() == Formula::Kind::Bool ||
      f.kind() == Formula::Kind::Not)
    if (f.is_literal()) return f_not(f);
  return std::nullopt;
}

Formula make_junction(Formula::Kind kind, std::vector<Formula> fs) {
  const bool is_and = kind == Formula::Kind::And;
  const Formula::Kind absorbing =
      is_and ? Formula::Kind::False : Formula::Kind::True;
  const Formula::Kind neutral =
      is_and ? Formula::Kind::True : Formula::Kind::False;
  std::vector<Formula> out;
  std::unordered_set<Formula> seen;
  std::function<bool(const Formula&)> add = [&](const Formula& f) -> bool {
    if (f.kind() == absorbing) return false;
    if (f.kind() == neutral) return true;
    if (f.kind() == kind) {
      for (const auto& k : f.children())
        if (!add(k)) return false;
      return true;
    }
    if (seen.insert(f).second) out.push_back(f);
    return true;
  };
  for (const auto& f : fs)
    if (!add(f)) return is_and ? f_false() : f_true();
  for (const auto& f : out) {
    if (auto c = complement_literal(f); c && seen.contains(*c))
      return is_and ? f_false() : f_true();
  }
  if (out.empty()) return is_and ? f_true() : f_false();
  if (out.size() == 1) return out.front();
  Formula::Node n;
  n.kind = kind;
  n.kids = std::move(out);
  return make_node(std::move(n));
}

}  // namespace

Formula f_and(std::vector<Formula> fs) {
  return make_junction(Formula::Kind::And, std::move(fs));
}
Formula f_or(std::vector<Formula> fs) {
  return make_junction(Formula::Kind::Or, std::move(fs));
}
Formula f_and(const Formula& a, const Formula& b) { return f_and({a, b}); }
Formula f_or(const Formula& a, const Formula& b) { return f_or({a, b}); }
Formula f_implies(const Formula& a, const Formula& b) {
  return f_or(f_not(a), b);
}
Formula f_iff(const Formula& a, const Formula& b) {
  return f_and(f_implies(a, b), f_implies(b, a));
}

namespace {

Formula make_quantifier(Formula::Kind kind, std::vector<Var> vars,
                        const Formula& body) {
  FreeVars fv = free_vars(body);
  std::vector<Var> kept;
  for (auto v : vars)
    if ((fv.ints.contains(v) || fv.bools.contains(v)) &&
        std::find(kept.begin(), kept.end(), v) == kept.end())
      kept.push_back(v);
  if (kept.empty()) return body;
  Formula inner = body;
  if (body.kind() == kind) {
    for (auto v : body.bound())
      if (std::find(kept.begin(), kept.end(), v) == kept.end())
        kept.push_back(v);
    inner = body.body();
  }
  Formula::Node n;
  n.kind = kind;
  n.bound = std::move(kept);
  n.kids = {inner};
  return make_node(std::move(n));
}

}  // namespace

Formula f_exists(std::vector<Var> vars, const Formula& body) {
  return make_quantifier(Formula::Kind::Exists, std::move(vars), body);
}
Formula f_forall(std::vector<Var> vars, const Formula& body) {
  return make_quantifier(Formula::Kind::Forall, std::move(vars), body);
}

// ----------------------------------------------------------------- NNF

namespace {

Formula nnf_impl(const Formula& f, bool negate) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
    case K::Atom:
    case K::Bool:
      return negate ? f_not(f) : f;
    case K::Not:
      return nnf_impl(f.body(), !negate);
    case K::And:
    case K::Or: {
      std::vector<Formula> kids;
      kids.reserve(f.children().size());
      for (const auto& k : f.children()) kids.push_back(nnf_impl(k, negate));
      bool as_and = (f.kind() == K::And) != negate;
      return as_and ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    case K::Exists:
    case K::Forall: {
      Formula b = nnf_impl(f.body(), negate);
      bool as_exists = (f.kind() == K::Exists) != negate;
      return as_exists ? f_exists(f.bound(), b) : f_forall(f.bound(), b);
    }
  }
  return f;
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_impl(f, false); }

// ----------------------------------------------------------- free vars

namespace {

void collect_free(const Formula& f, std::vector<Var>& bound, FreeVars& out) {
  auto is_bound = [&](Var v) {
    return std::find(bound.begin(), bound.end(), v) != bound.end();
  };
  switch (f.kind()) {
    case Formula::Kind::Atom:
      for (const auto& [v, c] : f.atom().expr().terms())
        if (!is_bound(v)) out.ints.insert(v);
      return;
    case Formula::Kind::Bool:
      if (!is_bound(f.bool_var())) out.bools.insert(f.bool_var());
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      std::size_t mark = bound.size();
      bound.insert(bound.end(), f.bound().begin(), f.bound().end());
      collect_free(f.body(), bound, out);
      bound.resize(mark);
      return;
    }
    default:
      for (const auto& k : f.children()) collect_free(k, bound, out);
  }
}

}  // namespace

FreeVars free_vars(const Formula& f) {
  FreeVars out;
  std::vector<Var> bound;
  collect_free(f, bound, out);
  return out;
}

// -------------------------------------------------------- substitution

namespace {

LinExpr subst_expr(const LinExpr& e, const std::map<Var, LinExpr>& sub) {
  LinExpr r(e.constant());
  for (const auto& [v, c] : e.terms()) {
    auto it = sub.find(v);
    if (it == sub.end())
      r.add_term(v, c);
    else
      r += it->second * c;
  }
  return r;
}

Formula subst_atom(const Atom& a, const std::map<Var, LinExpr>& sub) {
  bool touched = std::any_of(a.expr().terms().begin(), a.expr().terms().end(),
                             [&](const auto& t) { return sub.contains(t.first); });
  if (!touched) return f_atom(a);
  LinExpr e = subst_expr(a.expr(), sub);
  if (a.kind() == Atom::Kind::Ge) return f_ge(e);
  return f_divides(a.modulus(), e);
}

Formula subst_impl(const Formula& f, const std::map<Var, LinExpr>& sub) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
    case K::Bool:
      return f;
    case K::Atom:
      return subst_atom(f.atom(), sub);
    case K::Not:
      return f_not(subst_impl(f.body(), sub));
    case K::And:
    case K::Or: {
      std::vector<Formula> kids;
      kids.reserve(f.children().size());
      for (const auto& k : f.children()) kids.push_back(subst_impl(k, sub));
      return f.kind() == K::And ? f_and(std::move(kids))
                                : f_or(std::move(kids));
    }
    case K::Exists:
    case K::Forall: {
      std::map<Var, LinExpr> inner = sub;
      for (auto v : f.bound()) inner.erase(v);
      if (inner.empty()) return f;
      // Rename bound variables that would capture a replacement term.
      std::vector<Var> vars = f.bound();
      Formula body = f.body();
      for (auto& v : vars) {
        bool captured = std::any_of(inner.begin(), inner.end(), [&](const auto& kv) {
          return kv.second.contains(v);
        });
        if (captured) {
          Var nv = Var::fresh(v.name());
          body = subst_impl(body, {{v, LinExpr::of(nv)}});
          v = nv;
        }
      }
      Formula b = subst_impl(body, inner);
      return f.kind() == K::Exists ? f_exists(vars, b) : f_forall(vars, b);
    }
  }
  return f;
}

}  // namespace

Formula substitute(const Formula& f, Var v, const LinExpr& e) {
  return subst_impl(f, {{v, e}});
}

Formula substitute(const Formula& f, const std::map<Var, LinExpr>& sub) {
  if (sub.empty()) return f;
  return subst_impl(f, sub);
}

Formula rename(const Formula& f, const std::map<Var, Var>& ren) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
    case K::False:
      return f;
    case K::Bool: {
      auto it = ren.find(f.bool_var());
      return it == ren.end() ? f : f_var(it->second);
    }
    case K::Atom: {
      std::map<Var, LinExpr> sub;
      for (const auto& [v, c] : f.atom().expr().terms())
        if (auto it = ren.find(v); it != ren.end())
          sub.emplace(v, LinExpr::of(it->second));
      return sub.empty() ? f : subst_atom(f.atom(), sub);
    }
    case K::Not:
      return f_not(rename(f.body(), ren));
    case K::And:
    case K::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(rename(k, ren));
      return f.kind() == K::And ? f_and(std::move(kids))
                                : f_or(std::move(kids));
    }
    case K::Exists:
    case K::Forall: {
      std::map<Var, Var> inner = ren;
      for (auto v : f.bound()) inner.erase(v);
      Formula b = rename(f.body(), inner);
      return f.kind() == K::Exists ? f_exists(f.bound(), b)
                                   : f_forall(f.bound(), b);
    }
  }
  return f;
}

// ---------------------------------------------------------- evaluation

bool evaluate(const Formula& f, const Model& m) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Bool:
      return m.bool_value(f.bool_var());
    case K::Atom: {
      Int v = f.atom().expr().evaluate([&](Var x) { return m.int_value(x); });
      if (f.atom().kind() == Atom::Kind::Ge) return v >= 0;
      return mod_floor(v, f.atom().modulus()) == 0;
    }
    case K::Not:
      return !evaluate(f.body(), m);
    case K::And:
      for (const auto& k : f.children())
        if (!evaluate(k, m)) return false;
      return true;
    case K::Or:
      for (const auto& k : f.children())
        if (evaluate(k, m)) return true;
      return false;
    case K::Exists:
    case K::Forall:
      throw std::logic_error("evaluate: quantified formula");
  }
  return false;
}

// ------------------------------------------------------------ printing

namespace {

struct Sides {
  LinExpr pos;  // positive-coefficient part
  LinExpr neg;  // negated negative part
};

Sides split_sides(const LinExpr& e) {
  Sides s;
  for (const auto& [v, c] : e.terms()) {
    if (c > 0)
      s.pos.add_term(v, c);
    else
      s.neg.add_term(v, -c);
  }
  return s;
}

// Renders e >= 0 (op ">=") or e == 0 (op "==").
std::string relation_string(const LinExpr& e, const char* op) {
  Sides s = split_sides(e);
  const Int& k = e.constant();
  std::string eq = op;
  if (!s.pos.is_constant()) {
    LinExpr rhs = s.neg;
    rhs.set_constant(-k);
    return to_string(s.pos) + " " + eq + " " + to_string(rhs);
  }
  LinExpr lhs = s.neg;
  std::string flipped = eq == ">=" ? "<=" : "==";
  return to_string(lhs) + " " + flipped + " " + to_string(LinExpr(k));
}

void print(const Formula& f, std::ostream& os);

void print_junction(const Formula& f, std::ostream& os) {
  const bool is_and = f.kind() == Formula::Kind::And;
  const auto& kids = f.children();
  std::vector<bool> used(kids.size(), false);
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (used[i]) continue;
    if (is_and && kids[i].kind() == Formula::Kind::Atom &&
        kids[i].atom().kind() == Atom::Kind::Ge) {
      LinExpr neg = -kids[i].atom().expr();
      for (std::size_t j = i + 1; j < kids.size(); ++j) {
        if (!used[j] && kids[j].kind() == Formula::Kind::Atom &&
            kids[j].atom().kind() == Atom::Kind::Ge &&
            kids[j].atom().expr() == neg) {
          used[j] = true;
          used[i] = true;
          // Orient so that the name-first variable is on the left.
          const LinExpr& e = kids[i].atom().expr();
          Var first = e.terms().front().first;
          for (const auto& t : e.terms())
            if (t.first.name() < first.name()) first = t.first;
          parts.push_back(relation_string(e.coeff(first) > 0 ? e : neg, "=="));
          break;
        }
      }
      if (used[i]) continue;
    }
    std::ostringstream s;
    print(kids[i], s);
    parts.push_back(s.str());
  }
  if (parts.size() == 1) {
    os << parts.front();
    return;
  }
  os << "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) os << (is_and ? " && " : " || ");
    os << parts[i];
  }
  os << ")";
}

void print(const Formula& f, std::ostream& os) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
      os << "true";
      return;
    case K::False:
      os << "false";
      return;
    case K::Bool:
      os << f.bool_var().name();
      return;
    case K::Atom:
      os << to_string(f.atom());
      return;
    case K::Not: {
      const Formula& b = f.body();
      os << "!";
      bool paren = b.kind() == K::Atom && b.atom().kind() == Atom::Kind::Ge;
      if (paren) os << "(";
      print(b, os);
      if (paren) os << ")";
      return;
    }
    case K::And:
    case K::Or:
      print_junction(f, os);
      return;
    case K::Exists:
    case K::Forall: {
      os << "(" << (f.kind() == K::Exists ? "exists " : "forall ");
      for (std::size_t i = 0; i < f.bound().size(); ++i)
        os << (i ? ", " : "") << f.bound()[i].name();
      os << ": ";
      print(f.body(), os);
      os << ")";
      return;
    }
  }
}

}  // namespace

std::string to_string(const Atom& a) {
  if (a.kind() == Atom::Kind::Ge) return relation_string(a.expr(), ">=");
  return "divides(" + to_string(a.modulus()) + ", " + to_string(a.expr()) +
         ")";
}

std::string to_string(const Formula& f) {
  std::ostringstream os;
  print(f, os);
  return os.str();
}

std::size_t size(const Formula& f) {
  std::size_t n = 1;
  for (const auto& k : f.children()) n += size(k);
  return n;
}

}  // namespace arrabs::lia
