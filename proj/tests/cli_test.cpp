#include "arrabs/backend/abstract.hpp"
#include "arrabs/cli/config.hpp"
#include "arrabs/cli/pipeline.hpp"
#include "arrabs/lang/parser.hpp"
#include "arrabs/lang/printer.hpp"
#include "arrabs/lia/smtlib.hpp"
#include "arrabs/lia/solver.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sys/wait.h>

namespace arrabs::cli {
namespace {

using arrabs::testing::corpus;
using arrabs::testing::corpus_path;

Config config(const std::string& name) { return parse_config(corpus(name)); }

RunReport run(const std::string& program, const std::string& cfg, RunOptions opts = {}) {
  return run_pipeline(corpus(program), config(cfg), opts);
}

struct Process {
  int status = -1;
  std::string out;
};

Process abs_cli(const std::string& args) {
  std::string cmd = std::string(ABS_BINARY) + " " + args + " 2>&1";
  Process p;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return p;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) p.out.append(buf, n);
  int raw = pclose(pipe);
  p.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return p;
}

std::filesystem::path scratch(const std::string& name) {
  std::filesystem::path dir = std::filesystem::temp_directory_path() / ("arrabs_cli_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

TEST(Config, ParsesSectionsAndKeys) {
  Config c = parse_config(
      "# comment\n"
      "[array t]\n"
      "cells = 2   # trailing\n"
      "cell = x -> b\n"
      "initial = x -> a\n"
      "ordered = true\n"
      "observe = hit: @ == x\n"
      "mark.writes = seen: @ <= x\n"
      "\n"
      "[analysis]\n"
      "focus = x == p\n"
      "focus = x < p\n"
      "strategy = exact-unroll:4\n"
      "widening_delay = 3\n"
      "partition_cap = 5\n"
      "max_unroll = 2\n"
      "reduce = dual-both\n"
      "bounds_checks = false\n"
      "guard_partitions = false\n");
  ASSERT_EQ(c.arrays.size(), 1u);
  const ArraySection& a = c.arrays[0];
  EXPECT_EQ(a.array, "t");
  EXPECT_EQ(a.default_cells, 2u);
  ASSERT_EQ(a.cells.size(), 2u);
  EXPECT_EQ(a.cells[0].index, std::vector<std::string>{"x"});
  EXPECT_EQ(a.cells[0].value, "b");
  EXPECT_FALSE(a.cells[0].initial);
  EXPECT_TRUE(a.cells[1].initial);
  EXPECT_TRUE(a.ordered);
  ASSERT_EQ(a.observers.size(), 2u);
  EXPECT_FALSE(a.observers[0].sticky);
  EXPECT_EQ(a.observers[0].on, transform::Observer::Accesses::All);
  EXPECT_TRUE(a.observers[1].sticky);
  EXPECT_EQ(a.observers[1].on, transform::Observer::Accesses::Writes);
  EXPECT_EQ(c.focus, (std::vector<std::string>{"x == p", "x < p"}));
  EXPECT_EQ(c.strategy.kind, Strategy::Kind::ExactUnroll);
  EXPECT_EQ(c.strategy.unroll, 4);
  EXPECT_EQ(c.widening_delay, 3);
  EXPECT_EQ(c.partition_cap, 5u);
  EXPECT_EQ(c.max_unroll, 2);
  EXPECT_EQ(c.reduce, Reduce::DualBoth);
  EXPECT_FALSE(c.bounds_checks);
  EXPECT_FALSE(c.guard_partitions);
}

TEST(Config, ErrorsCarryLineNumbers) {
  auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_EQ(message("cells = 1\n").rfind("line 1:", 0), 0u);
  EXPECT_EQ(message("[array t]\n\ncells = two\n").rfind("line 3:", 0), 0u);
  EXPECT_EQ(message("[array t]\ncell = x b\n").rfind("line 2:", 0), 0u);
  EXPECT_EQ(message("[analysis]\nstrategy = fast\n").rfind("line 2:", 0), 0u);
  EXPECT_EQ(message("[array t]\n[array t]\n").rfind("line 2:", 0), 0u);
  EXPECT_EQ(message("[arrays t]\n").rfind("line 1:", 0), 0u);
  EXPECT_EQ(message("[array t]\nordered = yes\n").rfind("line 2:", 0), 0u);
  EXPECT_EQ(message("[array t]\nobserve.loops = f: true\n").rfind("line 2:", 0), 0u);
}

TEST(Config, StrategyRoundTrip) {
  for (const char* s : {"auto", "abstract", "exact-unroll:0", "exact-unroll:6"})
    EXPECT_EQ(Strategy::parse(s).to_string(), s);
  for (const char* s : {"exact-unroll:", "exact-unroll:-1", "exact", "Auto"})
    EXPECT_THROW(Strategy::parse(s), ConfigError) << s;
}

TEST(Config, IndexConfigResolvesCellsAndObservers) {
  lang::Program p = lang::parse_program(corpus("matrix_init.arr"));
  Config c = parse_config("[array a]\ncell = x, y -> v0\nobserve = diag: @0 == @1\n[analysis]\nfocus = x == y\n");
  transform::IndexConfig ic = index_config(c, p);
  ASSERT_EQ(ic.arrays.size(), 1u);
  ASSERT_EQ(ic.arrays[0].cells.size(), 1u);
  EXPECT_EQ(ic.arrays[0].cells[0].index, (std::vector<std::string>{"x", "y"}));
  ASSERT_EQ(ic.observers.size(), 1u);
  EXPECT_EQ(lang::to_string(ic.observers[0].predicate),
            transform::access_index_name(0) + " == " + transform::access_index_name(1));
  ASSERT_TRUE(ic.focus);
  EXPECT_FALSE(index_config(c, p, 1).focus);

  EXPECT_THROW(index_config(parse_config("[array b]\ncells = 1\n"), p), ConfigError);
  EXPECT_THROW(index_config(parse_config("[array a]\ncell = x -> v\n"), p), ConfigError);
  EXPECT_THROW(index_config(parse_config("[analysis]\nfocus = x ==\n"), p), ConfigError);

  transform::IndexConfig defaults = index_config(Config{}, p);
  ASSERT_EQ(defaults.arrays.size(), 1u);
  EXPECT_EQ(defaults.arrays[0].cells.size(), 1u);
}

TEST(Run, InitIsProven) {
  RunReport r = run("init.arr", "init.cfg");
  EXPECT_EQ(r.verdict, Verdict::Proven) << r.text;
  EXPECT_EQ(r.exit_code(), 0);
  EXPECT_NE(r.text.find("target PROVEN"), std::string::npos);
  ASSERT_EQ(r.quantified.size(), 1u);
  EXPECT_NE(lift::to_string(r.quantified[0]).find("t[x] == 0"), std::string::npos) << r.text;
}

TEST(Run, CorpusVerdicts) {
  struct Case {
    const char* program;
    const char* config;
    Verdict verdict;
  };
  const Case cases[] = {
      {"matrix_init.arr", "matrix_init.cfg", Verdict::Proven},
      {"slice_init.arr", "slice_init.cfg", Verdict::Proven},
      {"copy.arr", "copy.cfg", Verdict::Proven},
      {"copy.arr", "copy_bounded.cfg", Verdict::Proven},
      {"sentinel.arr", "sentinel.cfg", Verdict::Proven},
      {"sentinel.arr", "sentinel_bounded.cfg", Verdict::Proven},
      {"reversal.arr", "reversal.cfg", Verdict::Proven},
      {"reversal.arr", "reversal_bounded.cfg", Verdict::Proven},
      {"zero_test_zero.arr", "zero_test_zero.cfg", Verdict::NotProven},
      {"zero_test_zero.arr", "k2.cfg", Verdict::NotProven},
  };
  for (const auto& c : cases) {
    RunReport r = run(c.program, c.config);
    EXPECT_EQ(r.verdict, c.verdict) << c.program << " " << c.config << "\n" << r.text;
    EXPECT_EQ(r.exit_code(), c.verdict == Verdict::NotProven ? 1 : 0);
  }
}

TEST(Run, BoundedRunsReportTheirAssumptions) {
  RunReport r = run("copy.arr", "copy_bounded.cfg");
  EXPECT_EQ(r.strategy, "exact-unroll:3");
  EXPECT_EQ(r.assumptions, std::vector<std::string>{"n <= 3"});
  EXPECT_NE(r.text.find("assuming n <= 3"), std::string::npos);
}

TEST(Run, AutoFallsBackToExactUnrolling) {
  std::string program =
      "proc tri(n: int) { var i, j: int; assume(n == 2); while (i < n) { i = i + 1; j = j + i; } }\n"
      "ensures j == 3;";
  RunOptions abstract_only;
  abstract_only.strategy = Strategy::parse("abstract");
  RunReport abstract = run_pipeline(program, Config{}, abstract_only);
  EXPECT_EQ(abstract.verdict, Verdict::NotProven) << abstract.text;
  RunReport automatic = run_pipeline(program, Config{});
  EXPECT_EQ(automatic.verdict, Verdict::Proven) << automatic.text;
  EXPECT_EQ(automatic.strategy, "exact-unroll:2");
  EXPECT_NE(automatic.text.find("strategy auto (result from exact-unroll:2)"), std::string::npos);
  Config shallow;
  shallow.max_unroll = 1;
  EXPECT_EQ(run_pipeline(program, shallow).verdict, Verdict::NotProven);
}

TEST(Run, ExactStrategyNeedsEnoughUnrolling) {
  RunOptions o;
  o.strategy = Strategy::parse("exact-unroll:2");
  RunReport r = run("copy.arr", "copy_bounded.cfg", o);
  EXPECT_EQ(r.verdict, Verdict::NotProven);
  EXPECT_FALSE(r.failures.empty()) << r.text;
}

TEST(Run, WrongTargetIsNotProven) {
  std::string program = corpus("init.arr");
  program.replace(program.find("t[k] == 0"), 9, "t[k] == 1");
  RunReport r = run_pipeline(program, config("init.cfg"));
  EXPECT_EQ(r.verdict, Verdict::NotProven);
  std::string shifted = corpus("reversal.arr");
  shifted.replace(shifted.find("n - 1 - k"), 9, "n - 2 - k");
  EXPECT_EQ(run_pipeline(shifted, config("reversal.cfg")).verdict, Verdict::NotProven);
  EXPECT_EQ(run_pipeline(shifted, config("reversal_bounded.cfg")).verdict, Verdict::NotProven);
}

TEST(Run, VacuousFocusWarns) {
  Config c = config("init.cfg");
  c.focus = {"x < 0"};
  RunReport r = run_pipeline(corpus("init.arr"), c);
  EXPECT_NE(r.text.find("vacuous focus"), std::string::npos) << r.text;
  EXPECT_EQ(r.verdict, Verdict::NotProven);
  EXPECT_EQ(r.exit_code(), 1);
}

TEST(Run, NoTargetExitsZero) {
  RunReport r = run_pipeline("proc f(n: int) { var i: int; while (i < n) { i = i + 1; } }", Config{});
  EXPECT_EQ(r.verdict, Verdict::NoTarget);
  EXPECT_EQ(r.exit_code(), 0);
  EXPECT_NE(r.text.find("no target"), std::string::npos);
}

TEST(Run, OutputIsDeterministic) {
  RunOptions o;
  o.emit_transformed = true;
  o.emit_invariant = true;
  o.simplify = true;
  for (const char* p : {"slice_init", "sentinel"}) {
    std::string a = run(std::string(p) + ".arr", std::string(p) + ".cfg", o).text;
    std::string b = run(std::string(p) + ".arr", std::string(p) + ".cfg", o).text;
    EXPECT_EQ(a, b);
    EXPECT_NE(a.find("-- transformed program"), std::string::npos);
    EXPECT_NE(a.find("-- simplified invariant"), std::string::npos);
  }
}

TEST(Run, SimplifiedInvariantsAreSmall) {
  RunOptions o;
  o.simplify = true;
  EXPECT_NE(run("matrix_init.arr", "matrix_init.cfg", o).text.find("(1 disjuncts)"), std::string::npos);
  EXPECT_NE(run("init.arr", "init.cfg", o).text.find("(1 disjuncts)"), std::string::npos);
}

TEST(Run, SmtlibQueriesReplayTheVerdict) {
  std::filesystem::path dir = scratch("run");
  RunOptions o;
  o.smtlib_dir = dir.string();
  RunReport r = run("sentinel.arr", "sentinel.cfg", o);
  ASSERT_EQ(r.verdict, Verdict::Proven);
  lia::Formula target = lia::parse_smtlib(arrabs::testing::read_file((dir / "target.smt2").string()));
  EXPECT_FALSE(lia::is_sat(target).has_value());
  lia::Formula inv = lia::parse_smtlib(arrabs::testing::read_file((dir / "invariant.smt2").string()));
  EXPECT_TRUE(lia::equivalent(inv, r.invariants[0]));
  std::filesystem::remove_all(dir);
}

TEST(Run, MalformedInputThrows) {
  EXPECT_THROW(run_pipeline("proc f( {", Config{}), lang::LangError);
  EXPECT_THROW(run_pipeline(corpus("init.arr"), parse_config("[array u]\ncells = 1\n")), ConfigError);
}

TEST(Export, MiniLangRoundTripsAndReanalyzes) {
  for (const char* name : {"init", "sentinel", "copy", "slice_init"}) {
    std::string text = export_program(corpus(std::string(name) + ".arr"), config(std::string(name) + ".cfg"),
                                      ExportFormat::MiniLang);
    lang::Program p = lang::parse_program(text);
    EXPECT_EQ(lang::to_source(p), text);
    backend::AbstractResult a = backend::analyze_abstract(p);
    backend::AbstractResult b = backend::analyze_abstract(lang::parse_program(lang::to_source(p)));
    EXPECT_TRUE(lia::equivalent(a.invariant, b.invariant)) << name;
  }
}

TEST(Export, CLikeSentinelListing) {
  std::string c = export_program(corpus("sentinel.arr"), config("sentinel.cfg"), ExportFormat::CLike);
  for (const char* piece : {"void sentinel(int N, int p, int s, int x)", "b = random();", "if (p == x) {",
                            "b = s;", "c = random();", "if (i == x) {", "assume(c == b);", "while (c != s) {"})
    EXPECT_NE(c.find(piece), std::string::npos) << piece << "\n" << c;
  EXPECT_EQ(c.find("t["), std::string::npos);
}

TEST(Export, SmtlibAgreesWithExactVerdict) {
  std::string good = export_program(corpus("copy.arr"), config("copy_bounded.cfg"), ExportFormat::SmtLib, 3);
  EXPECT_FALSE(lia::is_sat(lia::parse_smtlib(good)).has_value());
  std::string shallow = export_program(corpus("copy.arr"), config("copy_bounded.cfg"), ExportFormat::SmtLib, 2);
  EXPECT_TRUE(lia::is_sat(lia::parse_smtlib(shallow)).has_value());
  std::string program = corpus("copy.arr");
  program.replace(program.find("a[k] == b[k]"), 12, "a[k] == b[k] + 1");
  std::string bad = export_program(program, config("copy_bounded.cfg"), ExportFormat::SmtLib, 3);
  EXPECT_TRUE(lia::is_sat(lia::parse_smtlib(bad)).has_value());
  EXPECT_THROW(export_program(corpus("copy.arr"), config("copy.cfg"), ExportFormat::SmtLib), ConfigError);
  EXPECT_THROW(parse_export_format("dot"), ConfigError);
}

TEST(Simplify, FixtureWithUniverse) {
  SimplifyReport r = simplify_formula(corpus("matrix_init_post.formula"), "0 <= x && x < m && 0 <= y && y < n");
  EXPECT_TRUE(r.complete);
  EXPECT_NE(r.text.find("-- 1 disjuncts"), std::string::npos) << r.text;
  EXPECT_NE(r.text.find("a_new == v"), std::string::npos) << r.text;
}

TEST(Simplify, QueriesAreWrittenForReplay) {
  std::filesystem::path dir = scratch("simplify");
  SimplifyReport r = simplify_formula("x >= 0 && (b || x >= 3)", "", dir.string());
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    ++files;
    EXPECT_NO_THROW(lia::parse_smtlib(arrabs::testing::read_file(e.path().string())));
  }
  EXPECT_GT(files, 2u);
  EXPECT_NE(r.text.find("disjuncts"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Binary, ExitCodes) {
  std::string init = corpus_path("init.arr"), zero = corpus_path("zero_test_zero.arr");
  Process ok = abs_cli("run " + init + " --config " + corpus_path("init.cfg"));
  EXPECT_EQ(ok.status, 0) << ok.out;
  EXPECT_NE(ok.out.find("target PROVEN"), std::string::npos);
  Process no = abs_cli("run " + zero + " --config " + corpus_path("k2.cfg"));
  EXPECT_EQ(no.status, 1) << no.out;
  EXPECT_NE(no.out.find("target NOT PROVEN"), std::string::npos);
  EXPECT_EQ(abs_cli("run /nonexistent.arr").status, 2);
  EXPECT_EQ(abs_cli("run " + init + " --strategy sideways").status, 2);
  EXPECT_EQ(abs_cli("frobnicate").status, 2);
  EXPECT_EQ(abs_cli("export " + corpus_path("copy.arr") + " --format smtlib").status, 2);
  Process strategy = abs_cli("run " + corpus_path("copy.arr") + " --config " + corpus_path("copy.cfg") +
                             " --strategy exact-unroll:3");
  EXPECT_EQ(strategy.status, 1) << strategy.out;
}

TEST(Binary, ReportFileMatchesStdout) {
  std::filesystem::path dir = scratch("report");
  std::filesystem::create_directories(dir);
  std::string file = (dir / "report.txt").string();
  Process p = abs_cli("run " + corpus_path("slice_init.arr") + " --config " + corpus_path("slice_init.cfg") +
                      " --simplify --report " + file);
  EXPECT_EQ(p.status, 0);
  EXPECT_EQ(arrabs::testing::read_file(file), p.out);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace arrabs::cli
