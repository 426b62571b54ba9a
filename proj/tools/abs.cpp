#include "arrabs/cli/pipeline.hpp"
#include "arrabs/lang/parser.hpp"
#include "arrabs/oracle/oracle.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using namespace arrabs;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

cli::Config load_config(const std::string& path) { return path.empty() ? cli::Config{} : cli::parse_config(read_file(path)); }

int run_oracle(std::uint64_t seed, std::size_t samples) {
  oracle::FiniteDomain small{{0, 1}, {0, 1}, {0, 1}};
  oracle::FiniteDomain three{{0, 1, 2}, {0, 1, 2}, {0, 1, 2}};
  std::vector<oracle::Report> reports;
  reports.push_back(oracle::check_galois(small, oracle::Connection::Single));
  reports.push_back(oracle::check_galois(small, oracle::Connection::DualOrdered));
  reports.push_back(oracle::check_galois(three, oracle::Connection::Single, samples, seed));
  reports.push_back(oracle::check_galois(three, oracle::Connection::DualOrdered, samples, seed + 1));
  for (const char* s : {"r = t[i];", "t[i] = r;"})
    reports.push_back(oracle::check_statement_soundness(s, three, 1, false, samples, seed + 2));
  bool ok = true;
  for (const auto& r : reports) {
    std::cout << r.to_string();
    ok = ok && r.ok();
  }
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  oracle::CompletenessOptions co;
  co.bounds.values = {0, 1, 2};
  co.bounds.param_values = {0, 1, 2};
  std::size_t equal = 0, programs = 20;
  for (std::size_t k = 0; k < programs; ++k) {
    std::string text = oracle::random_loopfree_program(rng);
    oracle::CompletenessResult res = oracle::check_completeness(lang::parse_program(text), co);
    if (res.equal()) {
      ++equal;
    } else {
      ok = false;
      std::cout << "completeness mismatch on\n" << text << "\nwitness " << res.witness << "\n";
    }
  }
  std::cout << "completeness | round trip | " << programs << " programs | " << (equal == programs ? "PASS" : "FAIL")
            << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Array abstraction by index cells: transform, analyze, lift"};
  app.require_subcommand(1);

  std::string program, config, strategy, smtlib_dir, report_file, format, universe;
  long budget_ms = 0;
  int unroll = -1;
  std::uint64_t seed = 1;
  std::size_t samples = 10000;
  cli::RunOptions opts;

  CLI::App* run = app.add_subcommand("run", "analyze a program and check its target");
  run->add_option("program", program, "program file")->required();
  run->add_option("--config", config, "configuration file");
  run->add_flag("--emit-transformed", opts.emit_transformed, "print the transformed scalar program");
  run->add_flag("--emit-invariant", opts.emit_invariant, "print the scalar invariant and analysis report");
  run->add_flag("--simplify", opts.simplify, "print the invariant as a simplified DNF");
  run->add_option("--strategy", strategy, "auto, abstract or exact-unroll:K");
  run->add_option("--smtlib-dir", smtlib_dir, "write the invariant and target queries as SMT-LIB");
  run->add_option("--budget-ms", budget_ms, "time budget for each solver query");
  run->add_option("--report", report_file, "also write the report to this file");

  CLI::App* exp = app.add_subcommand("export", "print the transformed program");
  exp->add_option("program", program, "program file")->required();
  exp->add_option("--config", config, "configuration file");
  exp->add_option("--format", format, "minilang, c-like or smtlib")->default_val("minilang");
  exp->add_option("--unroll", unroll, "unroll loops K times with unwinding checks");

  CLI::App* simp = app.add_subcommand("simplify", "simplify a formula into a small DNF");
  simp->add_option("formula", program, "file with a condition in mini-language syntax")->required();
  simp->add_option("--universe", universe, "file with the universe condition");
  simp->add_option("--smtlib-dir", smtlib_dir, "write every satisfiability query as SMT-LIB");
  simp->add_option("--budget-ms", budget_ms, "time budget for each solver query");

  CLI::App* orc = app.add_subcommand("oracle", "run the randomized finite-domain law checks");
  orc->add_option("--seed", seed, "random seed");
  orc->add_option("--samples", samples, "random samples per law");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      if (!strategy.empty()) opts.strategy = cli::Strategy::parse(strategy);
      if (!smtlib_dir.empty()) opts.smtlib_dir = smtlib_dir;
      if (budget_ms > 0) opts.budget_ms = budget_ms;
      cli::RunReport rep = cli::run_pipeline(read_file(program), load_config(config), opts);
      std::cout << rep.text;
      if (!report_file.empty()) {
        std::ofstream out(report_file);
        if (!out) throw std::runtime_error("cannot write " + report_file);
        out << rep.text;
      }
      return rep.exit_code();
    }
    if (exp->parsed()) {
      std::optional<int> k;
      if (unroll >= 0) k = unroll;
      std::cout << cli::export_program(read_file(program), load_config(config), cli::parse_export_format(format), k);
      return 0;
    }
    if (simp->parsed()) {
      std::optional<std::string> dir;
      if (!smtlib_dir.empty()) dir = smtlib_dir;
      std::optional<long> budget;
      if (budget_ms > 0) budget = budget_ms;
      cli::SimplifyReport rep =
          cli::simplify_formula(read_file(program), universe.empty() ? "" : read_file(universe), dir, budget);
      std::cout << rep.text;
      return 0;
    }
    return run_oracle(seed, samples);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
