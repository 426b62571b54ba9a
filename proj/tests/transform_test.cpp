#include "arrabs/lang/interp.hpp"
#include "arrabs/lang/parser.hpp"
#include "arrabs/lang/printer.hpp"
#include "arrabs/transform/transform.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

namespace arrabs::transform {
namespace {

using arrabs::testing::corpus;
using lang::parse_expr;
using lang::parse_program;

std::string text(const std::vector<Stmt>& ss) {
  std::string out;
  for (const auto& s : ss) out += lang::to_string(s);
  return out;
}

bool mentions_arrays(const Stmt& s) {
  if (s.kind == Stmt::Kind::Write) return true;
  for (const auto& e : {s.value, s.cond})
    if (e && lang::contains_read(e)) return true;
  for (const auto& c : s.children)
    if (mentions_arrays(c)) return true;
  return false;
}

const char* kReadProgram =
    "proc p(n: int) { var i, r: int; array f[n]: int; r = f[i]; f[i] = r; }";

ArrayCells cells(std::vector<std::pair<std::string, std::string>> cs) {
  ArrayCells a;
  a.array = "f";
  for (auto& [x, v] : cs) a.cells.push_back(Cell{{x}, v, false});
  return a;
}

TEST(Transform, ReadSingleCell) {
  Program p = parse_program(kReadProgram);
  ArrayCells c = cells({{"x", "b"}});
  EXPECT_EQ(text(transform_read(p.body.children[0], &c)),
            "havoc r;\nif (i == x) {\n  assume(r == b);\n}\n");
}

TEST(Transform, ReadDroppedArray) {
  Program p = parse_program(kReadProgram);
  EXPECT_EQ(text(transform_read(p.body.children[0], nullptr)), "havoc r;\n");
  EXPECT_TRUE(transform_write(p.body.children[1], nullptr).empty());
}

TEST(Transform, WriteCells) {
  Program p = parse_program(kReadProgram);
  ArrayCells one = cells({{"x", "b"}});
  EXPECT_EQ(text(transform_write(p.body.children[1], &one)), "if (i == x) {\n  b = r;\n}\n");
  ArrayCells two = cells({{"y", "b"}, {"z", "c"}});
  EXPECT_EQ(text(transform_write(p.body.children[1], &two)),
            "if (i == y) {\n  b = r;\n}\nif (i == z) {\n  c = r;\n}\n");
}

TEST(Transform, DualCellsReadAndWriteSemantics) {
  IndexConfig cfg;
  cfg.arrays.push_back(cells({{"y", "b"}, {"z", "c"}}));
  cfg.focus = parse_expr("y == i && z == i");
  lang::Bounds bounds;
  bounds.params["n"] = {2};
  Program reader = parse_program("proc p(n: int, i: int) { var r: int; array f[n]: int; r = f[i]; }");
  bool any = false;
  for (const auto& s : lang::enumerate_executions(transform_program(reader, cfg).program, bounds)) {
    if (s.status != lang::Status::Running) continue;
    any = true;
    EXPECT_EQ(s.scalars.at("r"), s.scalars.at("b"));
    EXPECT_EQ(s.scalars.at("r"), s.scalars.at("c"));
  }
  EXPECT_TRUE(any);
  Program writer = parse_program(
      "proc p(n: int, i: int) { var s: int; array f[n]: int; havoc s; f[i] = s; }");
  any = false;
  for (const auto& s : lang::enumerate_executions(transform_program(writer, cfg).program, bounds)) {
    if (s.status != lang::Status::Running) continue;
    any = true;
    EXPECT_EQ(s.scalars.at("b"), s.scalars.at("s"));
    EXPECT_EQ(s.scalars.at("c"), s.scalars.at("s"));
  }
  EXPECT_TRUE(any);
}

TEST(Transform, InitProgramShape) {
  Program p = parse_program(corpus("init.arr"));
  IndexConfig cfg;
  cfg.arrays.push_back(default_cells(p, "t", 1));
  ScalarProgram sp = transform_program(p, cfg);
  EXPECT_TRUE(sp.program.arrays.empty());
  EXPECT_FALSE(sp.program.target.has_value());
  EXPECT_FALSE(mentions_arrays(sp.program.body));
  EXPECT_EQ(sp.index_vars, std::vector<std::string>{"t$0$x0"});
  EXPECT_EQ(sp.cell_vars, std::vector<std::string>{"t$0$v"});
  std::string src = lang::to_source(sp.program);
  EXPECT_NE(src.find("assume(0 <= t$0$x0 && t$0$x0 < n);"), std::string::npos) << src;
  EXPECT_NE(src.find("if (i == t$0$x0) {\n      t$0$v = 0;"), std::string::npos) << src;
  Program again = parse_program(src);
  EXPECT_TRUE(lang::same(again, sp.program));
  ASSERT_EQ(sp.accesses.size(), 1u);
  EXPECT_TRUE(sp.accesses.at(0).write);
}

TEST(Transform, ConfigErrors) {
  Program p = parse_program(corpus("matrix_init.arr"));
  IndexConfig bad;
  bad.arrays.push_back(ArrayCells{"nope", {}, false});
  EXPECT_THROW(transform_program(p, bad), TransformError);
  IndexConfig ordered;
  ordered.arrays.push_back(default_cells(p, "a", 2, true));
  EXPECT_THROW(transform_program(p, ordered), TransformError);
  IndexConfig stale;
  stale.arrays.push_back(ArrayCells{"a", {Cell{{"i", "x"}, "b", false}}, false});
  EXPECT_THROW(transform_program(p, stale), TransformError);
  IndexConfig arity;
  arity.arrays.push_back(ArrayCells{"a", {Cell{{"x"}, "b", false}}, false});
  EXPECT_THROW(transform_program(p, arity), TransformError);
}

TEST(Transform, OrderedPrologue) {
  Program p = parse_program(corpus("dutch_flag.arr"));
  IndexConfig cfg;
  cfg.arrays.push_back(default_cells(p, "t", 2, true));
  std::string u = lang::to_string(universe(p, cfg));
  EXPECT_NE(u.find("t$0$x0 < t$1$x0"), std::string::npos) << u;
}

TEST(Transform, MatrixCellsAreTuples) {
  Program p = parse_program(corpus("matrix_init.arr"));
  IndexConfig cfg;
  cfg.arrays.push_back(default_cells(p, "a", 1));
  ScalarProgram sp = transform_program(p, cfg);
  std::string src = lang::to_source(sp.program);
  EXPECT_NE(src.find("if (i == a$0$x0 && j == a$0$x1)"), std::string::npos) << src;
  EXPECT_NE(src.find("a$0$x1 < n"), std::string::npos);
}

TEST(Transform, TrueFocusIsIdentity) {
  Program p = parse_program(corpus("init.arr"));
  IndexConfig cfg;
  cfg.arrays.push_back(default_cells(p, "t", 1));
  IndexConfig focused = cfg;
  focused.focus = parse_expr("true");
  lang::Bounds b;
  b.params["n"] = {0, 1, 2, 3};
  EXPECT_EQ(lang::enumerate_relation(transform_program(p, cfg).program, b),
            lang::enumerate_relation(transform_program(p, focused).program, b));
}

TEST(Transform, FocusKeepsStatesSatisfyingIt) {
  Program p = parse_program(corpus("copy.arr"));
  IndexConfig cfg;
  cfg.arrays.push_back(ArrayCells{"a", {Cell{{"x"}, "va", false}}, false});
  cfg.arrays.push_back(ArrayCells{"b", {Cell{{"y"}, "vb", false}}, false});
  IndexConfig focused = cfg;
  focused.focus = parse_expr("x == y");
  lang::Bounds b;
  b.params["n"] = {0, 1, 2, 3};
  auto all = lang::enumerate_executions(transform_program(p, cfg).program, b);
  auto foc = lang::enumerate_executions(transform_program(p, focused).program, b);
  std::set<lang::ConcreteState> expected;
  for (const auto& s : all)
    if (s.scalars.at("x") == s.scalars.at("y")) expected.insert(s);
  EXPECT_EQ(foc, expected);
}

TEST(Transform, DroppingCommutesWithProjection) {
  Program p = parse_program(corpus("copy.arr"));
  IndexConfig both;
  both.arrays.push_back(ArrayCells{"a", {Cell{{"x"}, "va", false}}, false});
  both.arrays.push_back(ArrayCells{"b", {Cell{{"y"}, "vb", false}}, false});
  IndexConfig only_a;
  only_a.arrays.push_back(both.arrays[0]);
  lang::Bounds b;
  b.params["n"] = {0, 1, 2, 3};
  std::set<std::string> keep = {"n", "i", "tmp0", "x", "va"};
  std::set<lang::ConcreteState> projected, dropped;
  for (const auto& s : lang::enumerate_executions(transform_program(p, both).program, b))
    projected.insert(lang::project(s, keep));
  for (const auto& s : lang::enumerate_executions(transform_program(p, only_a).program, b))
    dropped.insert(lang::project(s, keep));
  EXPECT_EQ(projected, dropped);
}

TEST(Transform, InitialCellsAreConsistent) {
  Program p = parse_program(corpus("reversal.arr"));
  IndexConfig cfg;
  ArrayCells t{"t", {Cell{{"x"}, "a", true}, Cell{{"y"}, "b", false}, Cell{{"z"}, "c", false}}, false};
  cfg.arrays.push_back(t);
  cfg.focus = parse_expr("y + z == n - 1 && y <= z && x == y");
  ScalarProgram sp = transform_program(p, cfg);
  lang::Bounds b;
  b.params["n"] = {1, 2, 3, 4};
  bool any = false;
  for (const auto& e : lang::enumerate_relation(sp.program, b)) {
    ASSERT_EQ(e.final.status, lang::Status::Running);
    EXPECT_EQ(e.final.scalars.at("a"), e.final.scalars.at("c"));
    any = true;
  }
  EXPECT_TRUE(any);
}

TEST(Observers, LatchOnMatchingAccess) {
  Program p = parse_program(corpus("init.arr"));
  IndexConfig cfg;
  cfg.arrays.push_back(ArrayCells{"t", {Cell{{"x"}, "b", false}}, false});
  ScalarProgram sp = transform_program(p, cfg);
  Observer touched{"t", parse_expr("acc$0 == x"), -1, "touched"};
  ScalarProgram inst = instrument_observers(sp, {touched});
  EXPECT_EQ(inst.observer_vars, std::vector<std::string>{"touched$s0"});
  lang::Bounds b;
  b.params["n"] = {0, 1, 2, 3};
  for (const auto& s : lang::enumerate_executions(inst.program, b)) {
    bool expect = s.scalars.at("n") > 0 && s.scalars.at("x") == s.scalars.at("n") - 1;
    EXPECT_EQ(s.scalars.at("touched$s0") != 0, expect);
  }
  std::set<lang::ConcreteState> plain, observed;
  for (const auto& s : lang::enumerate_executions(sp.program, b)) plain.insert(s);
  for (const auto& s : lang::enumerate_executions(inst.program, b)) {
    auto copy = s;
    copy.scalars.erase("touched$s0");
    observed.insert(copy);
  }
  EXPECT_EQ(plain, observed);
}

TEST(Observers, StickyFlagRecordsAnyMatchingWrite) {
  Program p = parse_program(corpus("reversal.arr"));
  IndexConfig cfg;
  cfg.arrays.push_back(ArrayCells{"t", {Cell{{"x"}, "b", false}}, false});
  Observer written{"t", parse_expr("acc$0 == x"), -1, "w"};
  written.sticky = true;
  written.on = Observer::Accesses::Writes;
  ScalarProgram sp = transform_program(p, [&] {
    IndexConfig c = cfg;
    c.observers.push_back(written);
    return c;
  }());
  ASSERT_EQ(sp.observer_vars.size(), 2u);
  lang::Bounds b;
  b.params["n"] = {0, 1, 2, 3};
  for (const auto& s : lang::enumerate_executions(sp.program, b)) {
    if (s.status != lang::Status::Running) continue;
    lang::Value n = s.scalars.at("n"), x = s.scalars.at("x");
    bool any = s.scalars.at(sp.observer_vars[0]) != 0 || s.scalars.at(sp.observer_vars[1]) != 0;
    // every position except the middle of an odd-length array is swapped
    EXPECT_EQ(any, 0 <= x && x < n && !(n % 2 == 1 && x == n / 2));
  }
}

TEST(Observers, DutchFlagPredicates) {
  Program p = parse_program(corpus("dutch_flag.arr"));
  IndexConfig cfg;
  cfg.arrays.push_back(ArrayCells{"t", {Cell{{"x"}, "dx", false}, Cell{{"y"}, "dy", false}}, true});
  ScalarProgram sp = transform_program(p, cfg);
  std::vector<Observer> obs;
  for (const char* pred : {"x <= acc$0", "x >= acc$0", "y <= acc$0", "y >= acc$0"})
    obs.push_back(Observer{"t", parse_expr(pred), -1, ""});
  ScalarProgram inst = instrument_observers(sp, obs);
  EXPECT_EQ(inst.observer_vars.size(), 4 * sp.accesses.size());
  std::string src = lang::to_source(inst.program);
  EXPECT_NE(src.find("obs$0$s0 = x <= i;"), std::string::npos) << src;
}

TEST(Observers, UndeclaredVariable) {
  Program p = parse_program(corpus("init.arr"));
  ScalarProgram sp = transform_program(p, IndexConfig{});
  EXPECT_THROW(instrument_observers(sp, {Observer{"t", parse_expr("acc$0 == zz"), -1, ""}}),
               TransformError);
}

TEST(Export, SentinelCLike) {
  Program p = parse_program(corpus("sentinel.arr"));
  IndexConfig cfg;
  cfg.arrays.push_back(ArrayCells{"t", {Cell{{"x"}, "tx", false}}, false});
  cfg.bounds_checks = false;
  std::string c = lang::to_c_like(transform_program(p, cfg).program);
  EXPECT_NE(c.find("void sentinel(int N, int p, int s, int x)"), std::string::npos) << c;
  EXPECT_NE(c.find("tx = random();"), std::string::npos) << c;
  EXPECT_NE(c.find("c = random();"), std::string::npos) << c;
  EXPECT_NE(c.find("assume(c == tx);"), std::string::npos) << c;
  EXPECT_EQ(c.find('['), std::string::npos) << c;
}

}  // namespace
}  // namespace arrabs::transform
