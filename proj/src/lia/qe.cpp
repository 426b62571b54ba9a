#include "arrabs/lia/solver.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace arrabs::lia {

namespace {

// A literal mentioning the eliminated variable, rewritten so that the
// variable x' = delta * x occurs with coefficient +1 or -1:
//   Ge:     sign*x' + rest >= 0
//   Div:    modulus | sign*x' + rest  (possibly negated)
struct XLit {
  Atom::Kind kind;
  int sign;
  LinExpr rest;
  Int modulus;
};

class Cooper {
 public:
  Cooper(Budget& budget) : budget_(budget) {}

  Formula exists(Var x, const Formula& phi) {
    budget_.tick();
    if (!free_vars(phi).ints.contains(x)) return phi;
    if (phi.kind() == Formula::Kind::Or) {
      std::vector<Formula> parts;
      for (const auto& k : phi.children()) parts.push_back(exists(x, k));
      return f_or(std::move(parts));
    }
    if (phi.kind() == Formula::Kind::And) {
      std::vector<Formula> indep, dep;
      for (const auto& k : phi.children())
        (free_vars(k).ints.contains(x) ? dep : indep).push_back(k);
      if (!indep.empty()) {
        indep.push_back(eliminate(x, f_and(dep)));
        return f_and(std::move(indep));
      }
    }
    return eliminate(x, phi);
  }

 private:
  static bool mentions(const Formula& f, Var x) {
    return f.kind() == Formula::Kind::Atom && f.atom().expr().contains(x);
  }

  void collect(const Formula& f, Var x, std::vector<Atom>& out) {
    using K = Formula::Kind;
    if (f.kind() == K::Atom) {
      if (f.atom().expr().contains(x)) out.push_back(f.atom());
      return;
    }
    for (const auto& k : f.children()) collect(k, x, out);
  }

  XLit scale(const Atom& a, Var x) const {
    Int c = a.expr().coeff(x);
    Int k = delta_ / abs(c);
    LinExpr rest = a.expr();
    rest.add_term(x, -c);
    rest *= k;
    int sign = c > 0 ? 1 : -1;
    if (a.kind() == Atom::Kind::Ge) return {a.kind(), sign, rest, 0};
    return {a.kind(), sign, rest, a.modulus() * k};
  }

  enum class Mode { Normal, MinusInf, PlusInf };

  Formula instantiate(const Formula& f, Var x, Mode mode, const LinExpr& s) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Atom: {
        if (!f.atom().expr().contains(x)) return f;
        XLit l = scale(f.atom(), x);
        if (l.kind == Atom::Kind::Ge && mode != Mode::Normal) {
          bool lower = l.sign > 0;
          return f_bool(mode == Mode::MinusInf ? !lower : lower);
        }
        LinExpr e = s * Int(l.sign) + l.rest;
        return l.kind == Atom::Kind::Ge ? f_ge(e) : f_divides(l.modulus, e);
      }
      case K::Not:
        return f_not(instantiate(f.body(), x, mode, s));
      case K::And:
      case K::Or: {
        std::vector<Formula> kids;
        kids.reserve(f.children().size());
        for (const auto& k : f.children()) {
          Formula r = instantiate(k, x, mode, s);
          if (f.kind() == K::And && r.is_false()) return r;
          if (f.kind() == K::Or && r.is_true()) return r;
          kids.push_back(std::move(r));
        }
        budget_.tick();
        return f.kind() == K::And ? f_and(std::move(kids)) : f_or(std::move(kids));
      }
      default:
        return f;
    }
  }

  Formula eliminate(Var x, const Formula& phi) {
    std::vector<Atom> atoms;
    collect(phi, x, atoms);
    delta_ = 1;
    for (const auto& a : atoms) delta_ = lcm(delta_, a.expr().coeff(x));
    Int period = delta_;
    std::vector<LinExpr> lower, upper;
    std::set<LinExpr> seen_lower, seen_upper;
    for (const auto& a : atoms) {
      XLit l = scale(a, x);
      if (l.kind == Atom::Kind::Div) {
        period = lcm(period, l.modulus);
      } else if (l.sign > 0) {
        // x' >= -rest
        LinExpr b = -l.rest;
        if (seen_lower.insert(b).second) lower.push_back(b);
      } else {
        // x' <= rest
        if (seen_upper.insert(l.rest).second) upper.push_back(l.rest);
      }
    }
    auto with_delta = [&](const Formula& body, const LinExpr& s) {
      return delta_ == 1 ? body : f_and(body, f_divides(delta_, s));
    };

    // A top-level equality pins x' directly.
    if (phi.kind() == Formula::Kind::And || mentions(phi, x)) {
      std::vector<Formula> tops =
          phi.kind() == Formula::Kind::And ? phi.children() : std::vector<Formula>{phi};
      std::set<LinExpr> lo, hi;
      for (const auto& t : tops) {
        if (!mentions(t, x) || t.atom().kind() != Atom::Kind::Ge) continue;
        XLit l = scale(t.atom(), x);
        (l.sign > 0 ? lo : hi).insert(l.sign > 0 ? -l.rest : l.rest);
      }
      for (const auto& b : lo)
        if (hi.contains(b)) return with_delta(instantiate(phi, x, Mode::Normal, b), b);
    }

    const bool use_lower = lower.size() <= upper.size();
    const auto& bounds = use_lower ? lower : upper;
    const Mode inf = use_lower ? Mode::MinusInf : Mode::PlusInf;
    std::vector<Formula> parts;
    auto push = [&](Formula f) {
      if (f.is_true()) return true;
      if (!f.is_false()) parts.push_back(std::move(f));
      return false;
    };
    for (Int j = 0; j < period; ++j) {
      LinExpr s(use_lower ? j : -j);
      if (push(with_delta(instantiate(phi, x, inf, s), s))) return f_true();
    }
    for (const auto& b : bounds) {
      for (Int j = 0; j < period; ++j) {
        LinExpr s = b + LinExpr(use_lower ? j : -j);
        if (push(with_delta(instantiate(phi, x, Mode::Normal, s), s))) return f_true();
      }
    }
    budget_.tick(parts.size());
    return prune(f_or(std::move(parts)));
  }

  // Drops unsatisfiable disjuncts to keep repeated elimination small.
  Formula prune(const Formula& f) {
    if (f.kind() != Formula::Kind::Or) return f;
    std::vector<Formula> kept;
    Limits local = budget_.limits();
    for (const auto& k : f.children())
      if (is_sat(k, local)) kept.push_back(k);
    return f_or(std::move(kept));
  }

  Budget& budget_;
  Int delta_ = 1;
};

Formula qe(const Formula& f, Budget& budget);

std::size_t bound_count(const Formula& f, Var x) {
  if (f.kind() == Formula::Kind::Atom) return f.atom().expr().contains(x) ? 1 : 0;
  std::size_t n = 0;
  for (const auto& k : f.children()) n += bound_count(k, x);
  return n;
}

Formula exists_block(std::vector<Var> vars, Formula body, Budget& budget) {
  Cooper cooper(budget);
  body = nnf(body);
  while (!vars.empty()) {
    std::size_t best = 0;
    std::size_t best_count = bound_count(body, vars[0]);
    for (std::size_t i = 1; i < vars.size(); ++i) {
      std::size_t c = bound_count(body, vars[i]);
      if (c < best_count) {
        best = i;
        best_count = c;
      }
    }
    Var x = vars[best];
    vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(best));
    body = nnf(cooper.exists(x, body));
  }
  return body;
}

// Boolean variables bound by a quantifier are expanded by case split.
Formula expand_bools(const std::vector<Var>& vars, const Formula& body, bool exists,
                     std::vector<Var>& ints) {
  FreeVars fv = free_vars(body);
  Formula out = body;
  for (auto v : vars) {
    if (!fv.bools.contains(v)) {
      ints.push_back(v);
      continue;
    }
    std::function<Formula(const Formula&, bool)> fix = [&](const Formula& g, bool val) -> Formula {
      using K = Formula::Kind;
      switch (g.kind()) {
        case K::Bool:
          return g.bool_var() == v ? f_bool(val) : g;
        case K::Not:
          return f_not(fix(g.body(), val));
        case K::And:
        case K::Or: {
          std::vector<Formula> kids;
          for (const auto& k : g.children()) kids.push_back(fix(k, val));
          return g.kind() == K::And ? f_and(std::move(kids)) : f_or(std::move(kids));
        }
        case K::Exists:
        case K::Forall: {
          if (std::find(g.bound().begin(), g.bound().end(), v) != g.bound().end()) return g;
          Formula b = fix(g.body(), val);
          return g.kind() == K::Exists ? f_exists(g.bound(), b) : f_forall(g.bound(), b);
        }
        default:
          return g;
      }
    };
    out = exists ? f_or(fix(out, false), fix(out, true)) : f_and(fix(out, false), fix(out, true));
  }
  return out;
}

Formula qe(const Formula& f, Budget& budget) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Exists:
    case K::Forall: {
      bool ex = f.kind() == K::Exists;
      std::vector<Var> ints;
      Formula body = qe(expand_bools(f.bound(), f.body(), ex, ints), budget);
      if (ex) return exists_block(ints, body, budget);
      return nnf(f_not(exists_block(ints, f_not(body), budget)));
    }
    case K::Not:
      return f_not(qe(f.body(), budget));
    case K::And:
    case K::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(qe(k, budget));
      return f.kind() == K::And ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    default:
      return f;
  }
}

}  // namespace

Formula eliminate_quantifiers(const Formula& f, const Limits& limits) {
  if (f.is_quantifier_free()) return f;
  Budget budget(limits);
  return qe(f, budget);
}

}  // namespace arrabs::lia
