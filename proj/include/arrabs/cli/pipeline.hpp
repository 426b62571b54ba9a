#pragma once

#include "arrabs/cli/config.hpp"
#include "arrabs/lia/budget.hpp"
#include "arrabs/lia/formula.hpp"
#include "arrabs/lift/lift.hpp"

#include <optional>
#include <string>
#include <vector>

namespace arrabs::cli {

enum class Verdict { Proven, NotProven, NoTarget };

struct RunOptions {
  bool emit_transformed = false;
  bool emit_invariant = false;
  bool simplify = false;
  std::optional<Strategy> strategy;  // overrides the config
  std::optional<std::string> smtlib_dir;
  std::optional<long> budget_ms;
};

struct RunReport {
  Verdict verdict = Verdict::NoTarget;
  std::string strategy;  // the strategy that produced the reported invariants
  /// One entry per focus, in configuration order.
  std::vector<lia::Formula> invariants;
  std::vector<lift::QuantifiedInvariant> quantified;
  std::vector<lia::Formula> contexts;  // scalar facts used for the target check
  std::vector<std::string> failures;
  std::vector<std::string> assumptions;  // focus conjuncts over parameters only
  std::vector<std::string> warnings;
  std::string text;

  /// 0 when proven or without target, 1 otherwise.
  int exit_code() const { return verdict == Verdict::NotProven ? 1 : 0; }
};

/// Transform, analyze, lift, reduce, simplify and check the target, once per
/// focus; the target must follow from all focused invariants. Throws
/// on malformed input (lang::LangError, ConfigError, TransformError).
RunReport run_pipeline(const std::string& program_text, const Config& cfg, const RunOptions& opts = {});

enum class ExportFormat { MiniLang, CLike, SmtLib };

ExportFormat parse_export_format(const std::string& name);

/// The transformed scalar program in the requested dialect. SMT-LIB output
/// is the verification condition of the unrolled program (unroll >= 0, or
/// the program must be loop-free): sat iff a check may fail or the target
/// may be violated.
std::string export_program(const std::string& program_text, const Config& cfg, ExportFormat format,
                           std::optional<int> unroll = std::nullopt);

struct SimplifyReport {
  std::string text;
  bool complete = true;
};

/// DNF of a formula modulo an optional universe, one disjunct per line.
/// Every satisfiability query is written to smtlib_dir when given.
SimplifyReport simplify_formula(const std::string& formula_text, const std::string& universe_text = "",
                                const std::optional<std::string>& smtlib_dir = std::nullopt,
                                std::optional<long> budget_ms = std::nullopt);

}  // namespace arrabs::cli
