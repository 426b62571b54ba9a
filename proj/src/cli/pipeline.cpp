#include "arrabs/cli/pipeline.hpp"

#include "arrabs/backend/abstract.hpp"
#include "arrabs/backend/exact.hpp"
#include "arrabs/lang/convert.hpp"
#include "arrabs/lang/parser.hpp"
#include "arrabs/lang/printer.hpp"
#include "arrabs/lia/smtlib.hpp"
#include "arrabs/lia/solver.hpp"
#include "arrabs/simplify/simplify.hpp"
#include "arrabs/transform/transform.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace arrabs::cli {

namespace {

using lia::Formula;

lia::Limits limits_for(std::optional<long> budget_ms) {
  if (!budget_ms) return {};
  return lia::Limits::with_timeout(std::chrono::milliseconds(*budget_ms));
}

void flatten_and(const lang::ExprPtr& e, std::vector<lang::ExprPtr>& out) {
  if (e->kind == lang::Expr::Kind::And) {
    for (const auto& a : e->args) flatten_and(a, out);
    return;
  }
  out.push_back(e);
}

std::string failure_text(lang::Stmt::Kind kind, const lang::Pos& pos) {
  std::string what = kind == lang::Stmt::Kind::BoundsCheck ? "bounds check" : "assert";
  return what + " at " + std::to_string(pos.line) + ":" + std::to_string(pos.col);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

/// One focus: its transformation and the scalar facts it assumes.
struct Prepared {
  lang::Program program;
  std::string focus;
  transform::ScalarProgram sp;
  Formula context;
  std::vector<std::string> assumptions;
  std::vector<std::string> warnings;
};

/// Exit invariant of the program with every array dropped.
Formula scalar_invariant(const lang::Program& p) {
  return backend::analyze_abstract(transform::transform_program(p, {}).program).invariant;
}

Prepared prepare(const lang::Program& program, const Config& cfg, std::size_t focus, const Formula& scalar,
                 const lia::Limits& limits) {
  Prepared out;
  out.program = program;
  if (focus < cfg.focus.size()) out.focus = cfg.focus[focus];
  transform::IndexConfig icfg = index_config(cfg, program, focus);
  out.sp = transform::transform_program(program, icfg);

  lang::FormulaContext ctx{&out.sp.program, {}};
  std::vector<Formula> context{scalar};
  if (icfg.focus) {
    std::vector<lang::ExprPtr> conjuncts;
    flatten_and(icfg.focus, conjuncts);
    for (const auto& c : conjuncts) {
      std::vector<std::string> names;
      lang::collect_names(c, names);
      bool scalar_only = std::none_of(names.begin(), names.end(), [&](const std::string& n) {
        return std::find(out.sp.index_vars.begin(), out.sp.index_vars.end(), n) != out.sp.index_vars.end();
      });
      if (!scalar_only) continue;
      out.assumptions.push_back(lang::to_string(c));
      context.push_back(lang::to_formula(c, ctx));
    }
  }
  out.context = lia::f_and(context);
  Formula universe = lang::to_formula(transform::universe(program, icfg), ctx);
  try {
    if (!lia::is_sat(universe, limits))
      out.warnings.push_back("vacuous focus: no array position satisfies the focus, the invariant is a tautology");
  } catch (const lia::BudgetExceeded&) {
    out.warnings.push_back("focus satisfiability unknown within budget");
  }
  return out;
}

std::vector<Prepared> prepare_all(const std::string& program_text, const Config& cfg, const lia::Limits& limits) {
  lang::Program program = lang::parse_program(program_text);
  Formula scalar = scalar_invariant(program);
  std::vector<Prepared> out;
  for (std::size_t f = 0; f < std::max<std::size_t>(1, cfg.focus.size()); ++f)
    out.push_back(prepare(program, cfg, f, scalar, limits));
  return out;
}

/// The result of one strategy on one focus.
struct Attempt {
  std::string strategy;
  Formula invariant;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
  std::string report;
  std::optional<lift::QuantifiedInvariant> quantified;
  bool analyzed = false;
};

void conclude(Attempt& a, const Prepared& pr, const Config& cfg, const lia::Limits& limits) {
  if (cfg.reduce != Reduce::None) {
    lift::DualSide side = cfg.reduce == Reduce::DualBoth ? lift::DualSide::Both : lift::DualSide::Left;
    try {
      a.invariant = lift::reduce_dual(a.invariant, pr.sp.source, pr.sp.config, side, limits, &a.warnings);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  a.quantified = lift::quantify(a.invariant, pr.sp);
}

Attempt run_abstract(const Prepared& pr, const Config& cfg, const lia::Limits& limits) {
  Attempt a;
  a.strategy = "abstract";
  backend::AnalysisConfig ac;
  ac.widening_delay = cfg.widening_delay;
  ac.partition_cap = cfg.partition_cap;
  if (cfg.guard_partitions) ac.partition_predicates = backend::guard_predicates(pr.sp.program, pr.sp.index_vars);
  backend::AbstractResult r;
  try {
    r = backend::analyze_abstract(pr.sp.program, ac);
  } catch (const backend::PartitionCapExceeded& e) {
    a.warnings.push_back(std::string("guard partitions dropped: ") + e.what());
    ac.partition_predicates.clear();
    try {
      r = backend::analyze_abstract(pr.sp.program, ac);
    } catch (const backend::PartitionCapExceeded& again) {
      a.warnings.push_back(std::string("boolean partitioning disabled: ") + again.what());
      ac.partition = false;
      r = backend::analyze_abstract(pr.sp.program, ac);
    }
  }
  a.analyzed = true;
  a.invariant = r.invariant;
  for (const auto& f : r.failures) a.failures.push_back(failure_text(f.kind, f.pos));
  for (const auto& w : r.warnings) a.warnings.push_back(w);
  a.report = r.report;
  conclude(a, pr, cfg, limits);
  return a;
}

Attempt run_exact(const Prepared& pr, const Config& cfg, int k, const lia::Limits& limits) {
  Attempt a;
  a.strategy = "exact-unroll:" + std::to_string(k);
  backend::ExactOptions eo;
  eo.limits = limits;
  try {
    backend::ExactResult r =
        backend::analyze_loopfree_exact(backend::unroll(pr.sp.program, k, backend::UnrollMode::Assert), eo);
    a.analyzed = true;
    a.invariant = r.exit;
    for (const auto& f : r.failures) {
      std::string t = failure_text(f.kind, f.pos);
      if (std::find(a.failures.begin(), a.failures.end(), t) == a.failures.end()) a.failures.push_back(t);
    }
    a.report = std::to_string(r.paths.size()) + " paths";
    conclude(a, pr, cfg, limits);
  } catch (const backend::PathCapExceeded& e) {
    a.warnings.push_back(a.strategy + ": " + e.what());
    a.analyzed = false;
  } catch (const lia::BudgetExceeded& e) {
    a.warnings.push_back(a.strategy + ": out of budget (" + e.what() + ")");
    a.analyzed = false;
  }
  return a;
}

/// Attempts of one strategy on every focus.
struct Round {
  std::string strategy;
  std::vector<Attempt> attempts;
  bool proven = false;

  bool analyzed() const {
    return std::all_of(attempts.begin(), attempts.end(), [](const Attempt& a) { return a.analyzed; });
  }
  bool safe() const {
    return std::all_of(attempts.begin(), attempts.end(), [](const Attempt& a) { return a.failures.empty(); });
  }
};

/// The target follows from all focused invariants together.
void check(Round& r, const std::vector<Prepared>& prs, const lia::Limits& limits) {
  const auto& target = prs.front().program.target;
  if (!target || !r.analyzed() || !r.safe()) return;
  try {
    std::vector<Formula> query;
    for (std::size_t f = 0; f < prs.size(); ++f)
      query.push_back(lift::target_query(*r.attempts[f].quantified, *target, prs[f].sp.source, prs[f].context, limits));
    r.proven = !lia::is_sat(lia::f_and(query), limits).has_value();
  } catch (const lia::BudgetExceeded& e) {
    r.attempts.front().warnings.push_back(r.strategy + ": target check out of budget (" + e.what() + ")");
  }
}

Round run_round(const std::vector<Prepared>& prs, const Config& cfg, const Strategy& s, const lia::Limits& limits) {
  Round r;
  r.strategy = s.to_string();
  for (const auto& pr : prs) {
    r.attempts.push_back(s.kind == Strategy::Kind::ExactUnroll ? run_exact(pr, cfg, s.unroll, limits)
                                                               : run_abstract(pr, cfg, limits));
    if (!r.attempts.back().analyzed) break;
  }
  check(r, prs, limits);
  return r;
}

std::string dnf_text(const simplify::SimplifyResult& s) {
  std::ostringstream out;
  if (s.disjuncts.empty()) out << "  false\n";
  for (const auto& d : s.disjuncts) out << "  " << lia::to_string(lia::f_and(d)) << "\n";
  return out.str();
}

void boolean_names(const lang::ExprPtr& e, bool boolean_position, std::set<std::string>& out) {
  using K = lang::Expr::Kind;
  if (e->kind == K::Var && boolean_position) out.insert(e->name);
  bool inner = e->kind == K::And || e->kind == K::Or || e->kind == K::Implies || e->kind == K::Not ||
               e->kind == K::Forall || e->kind == K::Exists;
  for (const auto& a : e->args) boolean_names(a, inner, out);
}

Formula parse_standalone(const std::string& text) {
  lang::ExprPtr e = lang::parse_expr(text);
  lang::FormulaContext ctx;
  boolean_names(e, true, ctx.bools);
  return lang::to_formula(e, ctx);
}

}  // namespace

RunReport run_pipeline(const std::string& program_text, const Config& cfg, const RunOptions& opts) {
  lia::Limits limits = limits_for(opts.budget_ms);
  std::vector<Prepared> prs = prepare_all(program_text, cfg, limits);
  const lang::Program& program = prs.front().program;
  Strategy strategy = opts.strategy ? *opts.strategy : cfg.strategy;

  std::vector<std::string> warnings;
  for (const auto& pr : prs)
    for (const auto& w : pr.warnings) warnings.push_back(w);
  Round chosen;
  if (strategy.kind == Strategy::Kind::ExactUnroll) {
    chosen = run_round(prs, cfg, strategy, limits);
  } else {
    chosen = run_round(prs, cfg, Strategy{Strategy::Kind::Abstract, 0}, limits);
    bool retry = strategy.kind == Strategy::Kind::Auto && program.target && !chosen.proven;
    for (int k = 1; retry && k <= cfg.max_unroll; ++k) {
      Round e = run_round(prs, cfg, Strategy{Strategy::Kind::ExactUnroll, k}, limits);
      if (!e.analyzed()) {
        for (const auto& a : e.attempts)
          for (const auto& w : a.warnings) warnings.push_back(w);
        break;
      }
      if (e.proven) {
        chosen = std::move(e);
        break;
      }
    }
  }
  for (const auto& a : chosen.attempts)
    for (const auto& w : a.warnings) warnings.push_back(w);

  RunReport rep;
  rep.strategy = chosen.strategy;
  if (program.target) rep.verdict = chosen.proven ? Verdict::Proven : Verdict::NotProven;
  for (std::size_t f = 0; f < chosen.attempts.size(); ++f) {
    const Attempt& a = chosen.attempts[f];
    rep.invariants.push_back(a.invariant);
    if (a.quantified) rep.quantified.push_back(*a.quantified);
    rep.contexts.push_back(prs[f].context);
    for (const auto& x : a.failures)
      if (std::find(rep.failures.begin(), rep.failures.end(), x) == rep.failures.end()) rep.failures.push_back(x);
  }
  for (const auto& pr : prs)
    for (const auto& x : pr.assumptions)
      if (std::find(rep.assumptions.begin(), rep.assumptions.end(), x) == rep.assumptions.end())
        rep.assumptions.push_back(x);

  std::ostringstream out;
  out << "program " << program.name << "\n";
  out << "strategy " << strategy.to_string();
  if (strategy.to_string() != chosen.strategy) out << " (result from " << chosen.strategy << ")";
  out << "\n";
  for (const auto& x : rep.assumptions) out << "assuming " << x << "\n";
  for (std::size_t f = 0; f < chosen.attempts.size(); ++f) {
    const Attempt& a = chosen.attempts[f];
    if (!prs[f].focus.empty()) out << "== focus " << prs[f].focus << "\n";
    if (opts.emit_transformed) out << "-- transformed program\n" << lang::to_source(prs[f].sp.program);
    if (!a.analyzed) {
      out << "-- no invariant\n";
      continue;
    }
    if (opts.emit_invariant) {
      out << "-- scalar invariant\n" << lia::to_string(a.invariant) << "\n";
      if (!a.report.empty()) out << "-- analysis report\n" << a.report << "\n";
    }
    if (a.quantified) out << "-- quantified invariant\n" << lift::to_string(*a.quantified) << "\n";
    if (opts.simplify) {
      Formula universe = a.quantified ? a.quantified->universe : lia::f_true();
      simplify::SimplifyResult s = simplify::dnf_simplify(a.invariant, universe, limits);
      if (!s.complete) warnings.push_back(s.warning);
      out << "-- simplified invariant (" << s.disjuncts.size() << " disjuncts)\n" << dnf_text(s);
    }
  }
  if (rep.failures.empty()) {
    out << "possible failures: none\n";
  } else {
    out << "possible failures:\n";
    for (const auto& x : rep.failures) out << "  " << x << "\n";
  }
  if (opts.smtlib_dir && chosen.analyzed()) {
    std::filesystem::path dir(*opts.smtlib_dir);
    std::filesystem::create_directories(dir);
    for (std::size_t f = 0; f < chosen.attempts.size(); ++f) {
      const Attempt& a = chosen.attempts[f];
      std::string suffix = chosen.attempts.size() > 1 ? std::to_string(f + 1) : "";
      write_file(dir / ("invariant" + suffix + ".smt2"), lia::to_smtlib(a.invariant));
      if (!program.target) continue;
      try {
        write_file(dir / ("target" + suffix + ".smt2"),
                   lia::to_smtlib(lift::target_query(*a.quantified, *program.target, prs[f].sp.source,
                                                     prs[f].context, limits)));
      } catch (const lia::BudgetExceeded& e) {
        warnings.push_back(std::string("target query not written: ") + e.what());
      }
    }
  }
  for (const auto& w : warnings) out << "warning: " << w << "\n";
  rep.warnings = warnings;
  if (program.target) {
    const lang::Target& t = *program.target;
    out << "target ";
    if (!t.bound.empty()) {
      out << "forall ";
      for (std::size_t k = 0; k < t.bound.size(); ++k) out << (k ? ", " : "") << t.bound[k];
      out << ": ";
    }
    out << lang::to_string(t.body) << "\n";
    out << (chosen.proven ? "target PROVEN" : "target NOT PROVEN") << "\n";
  } else {
    out << "no target\n";
  }
  rep.text = out.str();
  return rep;
}

ExportFormat parse_export_format(const std::string& name) {
  if (name == "minilang") return ExportFormat::MiniLang;
  if (name == "c-like") return ExportFormat::CLike;
  if (name == "smtlib") return ExportFormat::SmtLib;
  throw ConfigError("unknown export format '" + name + "' (minilang, c-like, smtlib)");
}

std::string export_program(const std::string& program_text, const Config& cfg, ExportFormat format,
                           std::optional<int> unroll) {
  if (cfg.focus.size() > 1) throw ConfigError("export takes at most one focus");
  if (format == ExportFormat::MiniLang || format == ExportFormat::CLike) {
    lang::Program p = lang::parse_program(program_text);
    transform::ScalarProgram sp = transform::transform_program(p, index_config(cfg, p));
    lang::Program q = unroll ? backend::unroll(sp.program, *unroll, backend::UnrollMode::Assert) : sp.program;
    return format == ExportFormat::MiniLang ? lang::to_source(q) : lang::to_c_like(q);
  }
  Prepared pr = std::move(prepare_all(program_text, cfg, {}).front());
  if (!unroll && lang::contains_loop(pr.sp.program.body))
    throw ConfigError("smtlib export of a program with loops needs an unroll bound");
  lang::Program q = unroll ? backend::unroll(pr.sp.program, *unroll, backend::UnrollMode::Assert) : pr.sp.program;
  backend::ExactResult r = backend::analyze_loopfree_exact(q);
  Formula vc = r.failure;
  if (pr.program.target) {
    lift::QuantifiedInvariant inv = lift::quantify(r.exit, pr.sp);
    vc = lia::f_or(vc, lift::target_query(inv, *pr.program.target, pr.sp.source, pr.context));
  }
  return lia::to_smtlib(vc);
}

SimplifyReport simplify_formula(const std::string& formula_text, const std::string& universe_text,
                                const std::optional<std::string>& smtlib_dir, std::optional<long> budget_ms) {
  Formula f = parse_standalone(formula_text);
  Formula u = universe_text.empty() ? lia::f_true() : parse_standalone(universe_text);
  std::size_t count = 0;
  simplify::QueryLog log;
  if (smtlib_dir) {
    std::filesystem::create_directories(*smtlib_dir);
    log = [&](const Formula& q) {
      std::ostringstream name;
      name << "query" << ++count << ".smt2";
      write_file(std::filesystem::path(*smtlib_dir) / name.str(), lia::to_smtlib(q));
    };
  }
  simplify::SimplifyResult s = simplify::dnf_simplify(f, u, limits_for(budget_ms), true, log);
  SimplifyReport rep;
  rep.complete = s.complete;
  std::ostringstream out;
  out << "-- " << s.disjuncts.size() << " disjuncts\n" << dnf_text(s);
  if (!s.complete) out << "warning: " << s.warning << "\n";
  rep.text = out.str();
  return rep;
}

}  // namespace arrabs::cli
