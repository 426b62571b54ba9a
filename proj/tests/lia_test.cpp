#include "arrabs/lia/formula.hpp"
#include "arrabs/lia/smtlib.hpp"
#include "arrabs/lia/solver.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <random>

using namespace arrabs::lia;

namespace {

Var V(const char* n) { return Var::named(n); }
LinExpr E(const char* n) { return LinExpr::of(V(n)); }

// Test-side formula model evaluated with machine integers, independent of the
// engine's evaluator.
struct RNode {
  enum Kind { Le, Eq, Ne, Div, Not, And, Or } kind;
  std::vector<int> coeffs;  // one per variable
  int constant = 0;         // sum(coeffs*x) + constant (op) 0
  int modulus = 2;
  std::vector<RNode> kids;

  bool eval(const std::vector<long long>& x) const {
    long long s = constant;
    for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * x[i];
    switch (kind) {
      case Le: return s <= 0;
      case Eq: return s == 0;
      case Ne: return s != 0;
      case Div: return ((s % modulus) + modulus) % modulus == 0;
      case Not: return !kids[0].eval(x);
      case And: return kids[0].eval(x) && kids[1].eval(x);
      case Or: return kids[0].eval(x) || kids[1].eval(x);
    }
    return false;
  }

  Formula build(const std::vector<Var>& vars) const {
    LinExpr e(constant);
    for (std::size_t i = 0; i < coeffs.size(); ++i) e.add_term(vars[i], coeffs[i]);
    switch (kind) {
      case Le: return f_le(e, 0);
      case Eq: return f_eq(e, 0);
      case Ne: return f_ne(e, 0);
      case Div: return f_divides(modulus, e);
      case Not: return f_not(kids[0].build(vars));
      case And: return f_and(kids[0].build(vars), kids[1].build(vars));
      case Or: return f_or(kids[0].build(vars), kids[1].build(vars));
    }
    return f_true();
  }
};

RNode random_node(std::mt19937& rng, int nvars, int depth, int cmax, int kmax) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<int> coeff(-cmax, cmax);
  std::uniform_int_distribution<int> cst(-kmax, kmax);
  int p = pick(rng);
  if (depth > 0 && p < 5) {
    RNode n{p == 0 ? RNode::Not : (p < 3 ? RNode::And : RNode::Or), {}, 0, 2, {}};
    n.kids.push_back(random_node(rng, nvars, depth - 1, cmax, kmax));
    if (n.kind != RNode::Not) n.kids.push_back(random_node(rng, nvars, depth - 1, cmax, kmax));
    return n;
  }
  RNode n;
  int k = pick(rng);
  n.kind = k < 6 ? RNode::Le : (k < 8 ? RNode::Eq : (k < 9 ? RNode::Ne : RNode::Div));
  n.modulus = 2 + (pick(rng) % 2);
  for (int i = 0; i < nvars; ++i) n.coeffs.push_back(pick(rng) < 4 ? 0 : coeff(rng));
  n.constant = cst(rng);
  return n;
}

void for_each_point(int nvars, int lo, int hi,
                    const std::function<bool(const std::vector<long long>&)>& f) {
  std::vector<long long> x(nvars, lo);
  while (true) {
    if (!f(x)) return;
    int i = 0;
    while (i < nvars && x[i] == hi) x[i++] = lo;
    if (i == nvars) return;
    ++x[i];
  }
}

}  // namespace

TEST(Atom, NormalizesByContent) {
  auto a = std::get<Atom>(Atom::ge(E("x") * 4 - E("y") * 2 + 3));
  EXPECT_EQ(to_string(a.expr()), "2*x - y + 1");
  auto again = std::get<Atom>(Atom::ge(a.expr()));
  EXPECT_EQ(a, again);
  EXPECT_EQ(std::get<bool>(Atom::ge(LinExpr(-1))), false);
  EXPECT_EQ(std::get<bool>(Atom::divides(3, LinExpr(6))), true);
  auto d = std::get<Atom>(Atom::divides(4, E("x") * 6 + 2));
  EXPECT_EQ(d.modulus(), 2);
  EXPECT_EQ(to_string(d.expr()), "x + 1");
}

TEST(Atom, StrictAndEqualityEncodings) {
  Formula lt = f_lt(E("x"), E("y"));
  ASSERT_EQ(lt.kind(), Formula::Kind::Atom);
  EXPECT_EQ(to_string(lt), "y >= x + 1");
  Formula eq = f_eq(E("x"), E("y"));
  EXPECT_EQ(eq.kind(), Formula::Kind::And);
  EXPECT_EQ(eq.children().size(), 2u);
  EXPECT_EQ(to_string(eq), "x == y");
}

TEST(Formula, ConstantFoldingAndComplement) {
  Formula a = f_ge(E("x"));
  EXPECT_TRUE(f_and(a, f_not(a)).is_false());
  EXPECT_TRUE(f_or(a, f_not(a)).is_true());
  EXPECT_EQ(f_and(a, f_true()), a);
  EXPECT_EQ(f_not(f_not(f_var(V("b")))), f_var(V("b")));
}

TEST(Formula, CaptureAvoidingSubstitution) {
  Formula f = f_exists({V("y")}, f_lt(E("x"), E("y")));
  Formula g = substitute(f, V("x"), E("y"));
  FreeVars fv = free_vars(g);
  EXPECT_TRUE(fv.ints.contains(V("y")));
  EXPECT_TRUE(equivalent(eliminate_quantifiers(g), f_true()));
}

TEST(IsSat, EmptyInterval) {
  EXPECT_FALSE(is_sat(f_and(f_geq(E("x"), 1), f_le(E("x"), 0))));
}

TEST(IsSat, DivisibilityForcesUniqueValue) {
  auto m = is_sat(f_and({f_divides(2, E("x")), f_geq(E("x"), 3), f_le(E("x"), 5)}));
  ASSERT_TRUE(m);
  EXPECT_EQ(m->int_value(V("x")), 4);
}

TEST(IsSat, NeedsSplintersForIntegerGap) {
  // 2 <= 3x - 2y <= 2... dense over rationals, empty over integers.
  LinExpr e = E("x") * 3 + E("y") * 3;
  EXPECT_FALSE(is_sat(f_and(f_geq(e, 1), f_le(e, 2))));
  LinExpr g = E("x") * 2 - E("y") * 2;
  EXPECT_FALSE(is_sat(f_eq(g, 1)));
  // 27 <= 11x + 13y <= 45, -10 <= 7x - 9y <= 4 (Pugh's example): no solution.
  LinExpr a = E("x") * 11 + E("y") * 13, b = E("x") * 7 - E("y") * 9;
  EXPECT_FALSE(is_sat(f_and({f_geq(a, 27), f_le(a, 45), f_geq(b, -10), f_le(b, 4)})));
}

TEST(IsSat, BooleanStructure) {
  Formula b = f_var(V("b"));
  Formula f = f_and({f_or(b, f_geq(E("x"), 5)), f_or(f_not(b), f_geq(E("x"), 7)),
                     f_le(E("x"), 6)});
  auto m = is_sat(f);
  ASSERT_TRUE(m);
  EXPECT_FALSE(m->bool_value(V("b")));
  EXPECT_TRUE(evaluate(f, *m));
}

TEST(IsSat, AgreesWithExhaustiveEvaluation) {
  std::mt19937 rng(1234);
  std::vector<Var> vars = {V("r0"), V("r1"), V("r2"), V("r3")};
  for (int iter = 0; iter < 300; ++iter) {
    RNode n = random_node(rng, 4, 3, 3, 6);
    Formula f = n.build(vars);
    bool brute = false;
    for_each_point(4, -6, 6, [&](const std::vector<long long>& x) {
      brute = n.eval(x);
      return !brute;
    });
    auto m = is_sat(f);
    if (brute) ASSERT_TRUE(m) << to_string(f);
    if (m) {
      std::vector<long long> x;
      for (auto v : vars)
        x.push_back(m->ints.count(v) ? m->ints.at(v).convert_to<long long>() : 0);
      EXPECT_TRUE(n.eval(x)) << to_string(f);
    }
  }
}

TEST(Entails, ReflexiveAndInterval) {
  Formula f = f_and(f_le(E("a"), E("x")), f_le(E("x"), E("b")));
  EXPECT_TRUE(entails(f, f));
  EXPECT_TRUE(entails(f, f_le(E("a"), E("b"))));
  EXPECT_FALSE(entails(f_le(E("a"), E("b")), f));
}

TEST(Qe, IntervalNonEmptiness) {
  Formula f = f_exists({V("x")}, f_and(f_le(E("a"), E("x")), f_le(E("x"), E("b"))));
  Formula q = eliminate_quantifiers(f);
  EXPECT_TRUE(q.is_quantifier_free());
  EXPECT_TRUE(equivalent(q, f_le(E("a"), E("b"))));
}

TEST(Qe, ForallExistsTautology) {
  Formula f = f_forall({V("x")}, f_exists({V("y")}, f_geq(E("y"), E("x"))));
  EXPECT_TRUE(eliminate_quantifiers(f).is_true());
}

TEST(Qe, IntroducesDivisibility) {
  Formula f = f_exists({V("x")}, f_eq(E("x") * 3, E("y")));
  Formula q = eliminate_quantifiers(f);
  EXPECT_TRUE(equivalent(q, f_divides(3, E("y"))));
}

TEST(Qe, BoundedRandomFormulas) {
  // Quantified variable restricted to [-4, 4] so brute force is exact.
  std::mt19937 rng(99);
  std::vector<Var> vars = {V("q0"), V("q1"), V("q2")};
  for (int iter = 0; iter < 120; ++iter) {
    RNode n = random_node(rng, 3, 2, 3, 4);
    Formula body = n.build(vars);
    Formula range = f_and(f_geq(LinExpr::of(vars[0]), -4), f_le(LinExpr::of(vars[0]), 4));
    bool ex = iter % 2 == 0;
    Formula f = ex ? f_exists({vars[0]}, f_and(range, body))
                   : f_forall({vars[0]}, f_implies(range, body));
    Formula q = eliminate_quantifiers(f);
    ASSERT_TRUE(q.is_quantifier_free());
    for_each_point(2, -4, 4, [&](const std::vector<long long>& yz) {
      bool truth = !ex;
      for (long long x = -4; x <= 4; ++x) {
        bool v = n.eval({x, yz[0], yz[1]});
        if (ex && v) truth = true;
        if (!ex && !v) truth = false;
      }
      Model m;
      m.ints[vars[1]] = yz[0];
      m.ints[vars[2]] = yz[1];
      EXPECT_EQ(evaluate(q, m), truth) << to_string(f) << " ~> " << to_string(q);
      return true;
    });
  }
}

TEST(Qe, UnboundedSingleQuantifier) {
  // Coefficients <= 3 and constants <= 4 keep every witness within [-60, 60]
  // when the other variables range over [-4, 4].
  std::mt19937 rng(7);
  std::vector<Var> vars = {V("u0"), V("u1"), V("u2")};
  for (int iter = 0; iter < 80; ++iter) {
    RNode n = random_node(rng, 3, 2, 3, 4);
    Formula f = f_exists({vars[0]}, n.build(vars));
    Formula q = eliminate_quantifiers(f);
    for_each_point(2, -4, 4, [&](const std::vector<long long>& yz) {
      bool truth = false;
      for (long long x = -60; x <= 60 && !truth; ++x) truth = n.eval({x, yz[0], yz[1]});
      Model m;
      m.ints[vars[1]] = yz[0];
      m.ints[vars[2]] = yz[1];
      EXPECT_EQ(evaluate(q, m), truth) << to_string(f) << " ~> " << to_string(q);
      return true;
    });
  }
}

TEST(Dnf, Distribution) {
  Formula a = f_ge(E("a")), b = f_ge(E("b")), c = f_ge(E("c"));
  Dnf d = to_dnf(f_and(f_or(a, b), c));
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0], (Conjunction{a, c}));
  EXPECT_EQ(d[1], (Conjunction{b, c}));
  EXPECT_EQ(to_dnf(a), (Dnf{{a}}));
}

TEST(Dnf, EquivalentOnRandomFormulas) {
  std::mt19937 rng(5);
  std::vector<Var> vars = {V("d0"), V("d1"), V("d2")};
  for (int iter = 0; iter < 60; ++iter) {
    Formula f = random_node(rng, 3, 3, 2, 3).build(vars);
    Formula g = from_dnf(to_dnf(f));
    EXPECT_TRUE(equivalent(f, g)) << to_string(f);
  }
}

TEST(SmtLib, Shapes) {
  std::string s = to_smtlib(f_geq(E("x"), 1));
  EXPECT_NE(s.find("(set-logic LIA)"), std::string::npos);
  EXPECT_NE(s.find("(declare-fun x () Int)"), std::string::npos);
  EXPECT_NE(s.find("(assert (>= x 1))"), std::string::npos);
  EXPECT_NE(s.find("(check-sat)"), std::string::npos);
  std::string d = to_smtlib(f_divides(2, E("x")));
  EXPECT_NE(d.find("(exists ((q Int)) (= x (* 2 q)))"), std::string::npos);
}

TEST(SmtLib, RoundTrip) {
  std::mt19937 rng(11);
  std::vector<Var> vars = {V("s0"), V("s1'"), V("s$2")};
  for (int iter = 0; iter < 60; ++iter) {
    Formula f = random_node(rng, 3, 3, 3, 4).build(vars);
    Formula g = parse_smtlib(to_smtlib(f));
    EXPECT_TRUE(equivalent(f, g)) << to_smtlib(f);
  }
  EXPECT_THROW(parse_smtlib("(assert (>= x 1))"), SmtParseError);
}
