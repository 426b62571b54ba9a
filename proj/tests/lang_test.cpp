#include "arrabs/lang/decompose.hpp"
#include "arrabs/lang/interp.hpp"
#include "arrabs/lang/parser.hpp"
#include "arrabs/lang/printer.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

namespace arrabs::lang {
namespace {

using arrabs::testing::corpus;
using arrabs::testing::kCorpusPrograms;

int count(const Stmt& s, Stmt::Kind k) {
  int n = s.kind == k ? 1 : 0;
  for (const auto& c : s.children) n += count(c, k);
  return n;
}

std::string error_of(const std::string& src) {
  try {
    parse_program(src);
  } catch (const LangError& e) {
    return e.what();
  }
  return "";
}

std::set<std::string> names_of(const Program& p) {
  std::set<std::string> out;
  for (const auto* l : {&p.params, &p.locals})
    for (const auto& d : *l) out.insert(d.name);
  for (const auto& a : p.arrays) out.insert(a.name);
  return out;
}

std::set<Execution> projected(const std::set<Execution>& rel, const std::set<std::string>& names) {
  std::set<Execution> out;
  for (const auto& e : rel) out.insert({project(e.initial, names), project(e.final, names)});
  return out;
}

Bounds small_bounds(const Program& p) {
  Bounds b;
  for (const auto& d : p.params) b.params[d.name] = {0, 1, 2, 3};
  for (const auto& a : p.arrays)
    for (const auto& d : a.dims)
      if (d->kind == Expr::Kind::Var) b.params[d->name] = {0, 1, 2, 3};
  return b;
}

TEST(Parse, InitListing) {
  Program p = parse_program(corpus("init.arr"));
  EXPECT_EQ(p.name, "init");
  EXPECT_EQ(count(p.body, Stmt::Kind::While), 1);
  EXPECT_EQ(count(p.body, Stmt::Kind::Write), 1);
  ASSERT_TRUE(p.target.has_value());
  EXPECT_EQ(p.target->bound, std::vector<std::string>{"k"});
}

TEST(Parse, EmptyBody) {
  Program p = parse_program("proc p(){}");
  EXPECT_EQ(p.body.kind, Stmt::Kind::Seq);
  EXPECT_TRUE(p.body.children.empty());
  EXPECT_FALSE(p.target.has_value());
}

TEST(Parse, ArityMismatch) {
  std::string e = error_of("proc p(n: int) { var i, j: int; array t[n]: int; t[i][j] = 0; }");
  EXPECT_NE(e.find("sort mismatch"), std::string::npos) << e;
}

TEST(Parse, Errors) {
  EXPECT_NE(error_of("proc p() { var x: int; var x: int; }").find("duplicate"), std::string::npos);
  EXPECT_NE(error_of("proc p() { x = 1; }").find("unknown identifier"), std::string::npos);
  EXPECT_NE(error_of("proc p() { var b: bool; b = 1; }").find("sort mismatch"), std::string::npos);
  EXPECT_NE(error_of("proc p(n: int) { n = 1; }").find("parameter"), std::string::npos);
  EXPECT_NE(error_of("proc p() { var x, y: int; x = x * y; }").find("nonlinear"), std::string::npos);
  std::string syntax = error_of("proc p() {\n  var x: int;\n  x = ;\n}");
  EXPECT_EQ(syntax.rfind("3:", 0), 0u) << syntax;
}

TEST(Parse, SurfaceSugar) {
  Program p = parse_program(
      "proc p() { var x: int; x = random(); x++; x -= 2; if (x > 0) { x = 0; } else if (x < 0) "
      "{ x = 1; } }");
  ASSERT_EQ(p.body.children.size(), 4u);
  EXPECT_EQ(p.body.children[0].kind, Stmt::Kind::Havoc);
  EXPECT_EQ(p.body.children[1].kind, Stmt::Kind::Assign);
  EXPECT_EQ(p.body.children[3].children[1].children[0].kind, Stmt::Kind::If);
}

TEST(Parse, RoundTripCorpus) {
  for (const char* name : kCorpusPrograms) {
    Program p = parse_program(corpus(name));
    std::string text = to_source(p);
    Program q = parse_program(text);
    EXPECT_TRUE(same(p, q)) << name << "\n" << text;
    EXPECT_EQ(to_source(q), text) << name;
  }
}

TEST(Parse, RoundTripExpressions) {
  const char* cases[] = {"a - (b - c)", "-(-x)", "-3 + x", "!(a && b) || c", "(a ==> b) ==> c",
                         "a ==> b ==> c", "2 * (x + 1) <= y", "divides(3, x - 1)",
                         "forall k: k >= 0 ==> k + 1 > 0"};
  for (const char* c : cases) {
    ExprPtr e = parse_expr(c);
    ExprPtr f = parse_expr(to_string(e));
    EXPECT_TRUE(same(e, f)) << c << " printed as " << to_string(e);
  }
}

TEST(Decompose, IndexExpression) {
  Program p = parse_program("proc p(n: int) { var i, r: int; array f[n]: int; f[i + 1] = r; }");
  Program d = decompose_accesses(p);
  Program want = parse_program(
      "proc p(n: int) { var i, r, tmp0: int; array f[n]: int; tmp0 = i + 1; f[tmp0] = r; }");
  EXPECT_TRUE(same(d, want)) << to_source(d);
  EXPECT_TRUE(all_accesses_elementary(d));
}

TEST(Decompose, NestedRead) {
  Program p = parse_program(
      "proc p(n: int) { var i, x: int; array f[n]: int; array g[n]: int; x = f[g[i]]; }");
  Program d = decompose_accesses(p);
  Program want = parse_program(
      "proc p(n: int) { var i, x, tmp0: int; array f[n]: int; array g[n]: int; tmp0 = g[i]; "
      "x = f[tmp0]; }");
  EXPECT_TRUE(same(d, want)) << to_source(d);
  Bounds b;
  b.params["n"] = {0, 1, 2, 3};
  std::set<std::string> names = names_of(p);
  EXPECT_EQ(projected(enumerate_relation(p, b), names), projected(enumerate_relation(d, b), names));
}

TEST(Decompose, ElementaryFixpoint) {
  Program p = parse_program(corpus("init.arr"));
  ASSERT_TRUE(all_accesses_elementary(p));
  EXPECT_TRUE(same(decompose_accesses(p), p));
}

TEST(Decompose, PreservesCorpusSemantics) {
  for (const char* name : kCorpusPrograms) {
    Program p = parse_program(corpus(name));
    Program d = decompose_accesses(p);
    EXPECT_TRUE(all_accesses_elementary(d)) << name;
    Bounds b = small_bounds(p);
    std::set<std::string> names = names_of(p);
    EXPECT_EQ(projected(enumerate_relation(p, b), names), projected(enumerate_relation(d, b), names))
        << name;
  }
}

TEST(Decompose, ConditionsAndLoops) {
  Program p = parse_program(
      "proc p(n: int) { var i: int; array t[n]: int; i = 0; "
      "while (i < n && t[i] + t[0] != 2) { if (t[i] > 0) { t[i] = t[i] - 1; } i++; } "
      "assert(t[0] >= 0); }");
  Program d = decompose_accesses(p);
  EXPECT_TRUE(all_accesses_elementary(d)) << to_source(d);
  Bounds b;
  b.params["n"] = {0, 1, 2, 3};
  std::set<std::string> names = names_of(p);
  EXPECT_EQ(projected(enumerate_relation(p, b), names), projected(enumerate_relation(d, b), names));
}

TEST(Enumerate, InitFinals) {
  Program p = parse_program(corpus("init.arr"));
  Bounds b;
  b.params["n"] = {3};
  auto finals = enumerate_executions(p, b);
  ASSERT_FALSE(finals.empty());
  for (const auto& s : finals) {
    EXPECT_EQ(s.status, Status::Running);
    EXPECT_EQ(s.arrays.at("t"), (std::vector<Value>{0, 0, 0}));
    EXPECT_EQ(s.scalars.at("i"), 3);
  }
}

TEST(Enumerate, Deterministic) {
  for (const char* name : kCorpusPrograms) {
    Program p = parse_program(corpus(name));
    Bounds b = small_bounds(p);
    EXPECT_EQ(enumerate_relation(p, b), enumerate_relation(p, b)) << name;
  }
}

TEST(Enumerate, DutchFlagProperties) {
  Program p = parse_program(corpus("dutch_flag.arr"));
  for (Value n = 0; n <= 5; ++n) {
    Bounds b;
    b.params["n"] = {n};
    auto rel = enumerate_relation(p, b);
    std::size_t colorings = 1;
    for (Value k = 0; k < n; ++k) colorings *= 3;
    std::set<ConcreteState> inits;
    for (const auto& e : rel) inits.insert(e.initial);
    EXPECT_EQ(inits.size(), colorings);
    for (const auto& e : rel) {
      const auto& t = e.final.arrays.at("t");
      Value pp = e.final.scalars.at("p"), q = e.final.scalars.at("q");
      ASSERT_EQ(e.final.status, Status::Running);
      EXPECT_TRUE(-1 <= pp && pp < q && q <= n);
      EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
      for (Value k = 0; k < n; ++k) {
        Value want = k <= pp ? 0 : k >= q ? 2 : 1;
        EXPECT_EQ(t[k], want);
      }
      EXPECT_TRUE(satisfies_target(p, e));
    }
  }
}

TEST(Enumerate, ZeroTestZeroNeverFails) {
  Program p = parse_program(corpus("zero_test_zero.arr"));
  Bounds b;
  b.params["N"] = {3};
  for (const auto& s : enumerate_executions(p, b)) {
    EXPECT_NE(s.status, Status::AssertFailed);
    EXPECT_EQ(s.scalars.at("i"), 3);
  }
}

TEST(Enumerate, OutOfBoundsIsAnErrorState) {
  Program p = parse_program("proc p(n: int) { var i: int; array t[n]: int; i = n; t[i] = 1; i = 7; }");
  Bounds b;
  b.params["n"] = {2};
  auto finals = enumerate_executions(p, b);
  ASSERT_FALSE(finals.empty());
  for (const auto& s : finals) {
    EXPECT_EQ(s.status, Status::OutOfBounds);
    EXPECT_EQ(s.scalars.at("i"), 2);
  }
}

TEST(Enumerate, AssumeAndHavoc) {
  Program p = parse_program("proc p() { var x: int; havoc x; assume(x != 1); }");
  Bounds b;
  b.values = {0, 1, 2};
  auto finals = enumerate_executions(p, b);
  ASSERT_EQ(finals.size(), 2u);
  EXPECT_EQ(finals.begin()->scalars.at("x"), 0);
  EXPECT_EQ(finals.rbegin()->scalars.at("x"), 2);
}

TEST(Enumerate, BudgetGuard) {
  Program p = parse_program("proc p() { var x: int; while (true) { x++; } }");
  Bounds b;
  b.state_cap = 1000;
  EXPECT_THROW(enumerate_executions(p, b), EnumerationBudgetExceeded);
}

TEST(Enumerate, Targets) {
  Program p = parse_program(corpus("reversal.arr"));
  Bounds b;
  b.params["n"] = {0, 1, 2, 3, 4};
  for (const auto& e : enumerate_relation(p, b)) EXPECT_TRUE(satisfies_target(p, e));
  Program s = parse_program(corpus("sentinel.arr"));
  Bounds sb;
  sb.params["N"] = {1, 2, 3};
  sb.params["p"] = {0, 1, 2};
  sb.params["s"] = {0, 1};
  bool any = false;
  for (const auto& e : enumerate_relation(s, sb)) {
    EXPECT_NE(e.final.status, Status::OutOfBounds);
    EXPECT_TRUE(satisfies_target(s, e));
    any = true;
  }
  EXPECT_TRUE(any);
}

}  // namespace
}  // namespace arrabs::lang
