#include "arrabs/cli/config.hpp"
#include "arrabs/cli/pipeline.hpp"
#include "arrabs/lang/convert.hpp"
#include "arrabs/lang/interp.hpp"
#include "arrabs/lang/parser.hpp"
#include "arrabs/lia/formula.hpp"
#include "arrabs/lia/solver.hpp"
#include "arrabs/lift/lift.hpp"
#include "arrabs/oracle/oracle.hpp"
#include "arrabs/simplify/simplify.hpp"
#include "arrabs/transform/transform.hpp"
#include "test_util.hpp"

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace arrabs;
using arrabs::testing::corpus;
using lia::Formula;
using lia::LinExpr;
using lia::Var;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    detail += (detail.empty() ? "" : "; ") + what;
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fs", s);
  return buf;
}

cli::RunReport run(const std::string& program, const std::string& config_text, const cli::RunOptions& opts = {}) {
  return cli::run_pipeline(program, cli::parse_config(config_text), opts);
}

cli::RunOptions with_strategy(const std::string& s) {
  cli::RunOptions o;
  o.strategy = cli::Strategy::parse(s);
  return o;
}

bool proven(const cli::RunReport& r) { return r.verdict == cli::Verdict::Proven; }

const char* verdict_name(const cli::RunReport& r) {
  switch (r.verdict) {
    case cli::Verdict::Proven: return "proven";
    case cli::Verdict::NotProven: return "not proven";
    case cli::Verdict::NoTarget: return "no target";
  }
  return "?";
}

Formula disjunction(const lia::Dnf& d) {
  std::vector<Formula> ds;
  for (const auto& c : d) ds.push_back(lia::f_and(c));
  return lia::f_or(ds);
}

// Equivalence modulo U in both directions, and no literal of any disjunct can
// be deleted without admitting a point of U outside F.
bool simplified_correctly(const Formula& f, const Formula& u, const simplify::SimplifyResult& r, std::string* why) {
  if (!r.complete) {
    *why = "incomplete: " + r.warning;
    return false;
  }
  Formula g = disjunction(r.disjuncts);
  if (!lia::entails(lia::f_and(f, u), g) || !lia::entails(lia::f_and(g, u), f)) {
    *why = "not equivalent modulo U";
    return false;
  }
  Formula outside = lia::f_and(u, lia::f_not(f));
  for (const auto& c : r.disjuncts)
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::vector<Formula> rest = c;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      if (!lia::is_sat(lia::f_and(lia::f_and(rest), outside))) {
        *why = "redundant literal " + lia::to_string(c[i]);
        return false;
      }
    }
  return true;
}

struct SoundnessCount {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::string example;
};

// Every normal concrete execution, with every in-range index instantiation
// inside the universe, must satisfy the matrix for some observer values.
void check_against_concrete(const lang::Program& p, const lift::QuantifiedInvariant& inv, const lang::Bounds& b,
                            SoundnessCount& out) {
  lia::FreeVars fv = lia::free_vars(lift::to_formula(inv));
  lia::FreeVars uv = lia::free_vars(inv.universe);
  lia::FreeVars mv = lia::free_vars(inv.matrix);
  fv.ints.insert(uv.ints.begin(), uv.ints.end());
  fv.ints.insert(mv.ints.begin(), mv.ints.end());
  fv.bools.insert(mv.bools.begin(), mv.bools.end());
  for (const auto& e : lang::enumerate_relation(p, b)) {
    if (e.final.status != lang::Status::Running) continue;
    std::map<Var, LinExpr> scalars;
    std::vector<Formula> flags;
    for (const auto& [name, value] : e.final.scalars) {
      Var v = Var::named(name);
      if (fv.ints.count(v)) scalars[v] = LinExpr(value);
      if (fv.bools.count(v)) flags.push_back(value ? lia::f_var(v) : lia::f_not(lia::f_var(v)));
    }
    std::size_t len = e.initial.arrays.at(inv.cells.at(0).array).size();
    if (len == 0) continue;
    std::vector<std::size_t> idx(inv.indices.size(), 0);
    while (true) {
      std::map<Var, LinExpr> sub = scalars;
      for (std::size_t k = 0; k < idx.size(); ++k) sub[inv.indices[k]] = LinExpr(static_cast<long>(idx[k]));
      for (const auto& c : inv.cells) {
        const lang::ConcreteState& s = c.initial ? e.initial : e.final;
        std::size_t at = idx[std::find(inv.indices.begin(), inv.indices.end(), c.index.at(0)) - inv.indices.begin()];
        sub[c.value] = LinExpr(s.arrays.at(c.array).at(at));
      }
      Formula fixed = lia::f_and(flags);
      Formula u = lia::substitute(lia::f_and(inv.universe, fixed), sub);
      if (lia::is_sat(u)) {
        ++out.checked;
        if (!lia::is_sat(lia::f_and(u, lia::substitute(inv.matrix, sub)))) {
          if (out.violations++ == 0) out.example = lang::to_string(e.final);
        }
      }
      std::size_t k = 0;
      while (k < idx.size() && idx[k] + 1 == len) idx[k++] = 0;
      if (k == idx.size()) break;
      ++idx[k];
    }
  }
}

Outcome init_criterion() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  cli::RunReport r = run(corpus("init.arr"), corpus("init.cfg"));
  double t = seconds_since(t0);
  o.require(proven(r), std::string("verdict ") + verdict_name(r));
  o.require(r.strategy == "abstract", "strategy " + r.strategy);
  o.require(r.failures.empty(), "possible failures reported");
  o.require(t < 10, "runtime " + fmt_seconds(t));
  lang::Program p = lang::parse_program(corpus("init.arr"));
  lang::Bounds b;
  b.params["n"] = {0, 1, 2, 3};
  SoundnessCount sc;
  check_against_concrete(p, r.quantified.at(0), b, sc);
  o.require(sc.violations == 0, "concrete state outside invariant: " + sc.example);
  o.note("symbolic n in " + fmt_seconds(t) + ", " + std::to_string(sc.checked) + " concrete instances checked");
  return o;
}

Outcome matrix_criterion() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  cli::RunReport r = run(corpus("matrix_init.arr"), corpus("matrix_init.cfg"));
  o.require(proven(r), std::string("verdict ") + verdict_name(r));
  o.require(r.strategy == "abstract", "strategy " + r.strategy);
  const lift::QuantifiedInvariant& inv = r.quantified.at(0);
  Formula u = lang::parse_formula("0 <= x && x < m && 0 <= y && y < n");
  simplify::SimplifyResult s = simplify::dnf_simplify(inv.matrix, lia::f_and(u, inv.universe));
  double t = seconds_since(t0);
  o.require(s.disjuncts.size() == 1, std::to_string(s.disjuncts.size()) + " disjuncts");
  if (s.disjuncts.size() == 1) {
    Formula cell_is_v = lang::parse_formula("b == v");
    o.require(lia::entails(lia::f_and(s.disjuncts[0]), cell_is_v), "disjunct lacks b == v");
    o.note("disjunct " + lia::to_string(lia::f_and(s.disjuncts[0])));
  }
  o.require(t < 30, "runtime " + fmt_seconds(t));
  o.note(fmt_seconds(t));
  return o;
}

Outcome slice_criterion() {
  Outcome o;
  std::string text = corpus("slice_init.arr");
  cli::RunReport r = run(text, corpus("slice_init.cfg"));
  o.require(proven(r), std::string("boxed postcondition ") + verdict_name(r));
  std::string head = text.substr(0, text.find("ensures"));
  const char* conjuncts[] = {
      "ensures forall k: low <= k && k < high ==> a[k] == v;\n",
      "ensures forall k: 0 <= k && k < n && !(low <= k && k < high) ==> a[k] == old(a)[k];\n",
  };
  for (const char* c : conjuncts) {
    cli::RunReport rc = run(head + c, corpus("slice_init.cfg"));
    o.require(proven(rc), std::string("conjunct ") + verdict_name(rc));
  }
  const lift::QuantifiedInvariant& inv = r.quantified.at(0);
  simplify::SimplifyResult s = simplify::dnf_simplify(inv.matrix, inv.universe);
  o.require(s.complete, "simplification incomplete");
  o.require(s.disjuncts.size() <= 4, std::to_string(s.disjuncts.size()) + " disjuncts");
  o.note(std::to_string(s.disjuncts.size()) + " disjuncts");
  return o;
}

Outcome copy_criterion() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::string text = corpus("copy.arr");
  cli::RunReport a = run(text, corpus("copy.cfg"));
  o.require(proven(a), std::string("auto ") + verdict_name(a));
  cli::RunReport e = run(text, corpus("copy_bounded.cfg"), with_strategy("exact-unroll:3"));
  o.require(proven(e), std::string("exact-unroll:3 ") + verdict_name(e));
  cli::RunReport unbounded = run(text, corpus("copy.cfg"), with_strategy("exact-unroll:3"));
  double t = seconds_since(t0);
  o.require(t < 30, "runtime " + fmt_seconds(t));
  o.note("auto via " + a.strategy + ", exact-unroll:3 under n <= 3, unbounded n gives " + verdict_name(unbounded) +
         ", " + fmt_seconds(t));
  return o;
}

Outcome sentinel_criterion() {
  Outcome o;
  lang::Program p = lang::parse_program(corpus("sentinel.arr"));
  Formula f = lang::parse_formula(corpus("sentinel_summary.formula"));
  transform::IndexConfig cfg;
  cfg.arrays.push_back({"t", {{{"x"}, "tx", false}}, false});
  lift::QuantifiedInvariant inv = lift::quantify(f, p, cfg);
  Formula nonempty = lang::parse_formula("N > 0");
  Formula bound = lang::parse_formula("i <= p");
  o.require(lift::check_target(inv, *p.target, p, nonempty), "fixture does not entail i <= p");
  o.require(lia::entails(lia::f_and(nonempty, lift::scalar_consequence(inv)), bound), "scalar consequence too weak");
  cli::RunReport r = run(corpus("sentinel.arr"), corpus("sentinel_bounded.cfg"));
  o.require(proven(r), std::string("exact-unroll:5 ") + verdict_name(r));
  o.require(r.strategy == "exact-unroll:5", "strategy " + r.strategy);
  for (int n = 1; n <= 5; ++n) {
    Formula ctx = lia::f_and(lang::parse_formula("N == " + std::to_string(n)), r.contexts.at(0));
    Formula q = lift::target_query(r.quantified.at(0), *p.target, p, ctx);
    o.require(!lia::is_sat(q), "i <= p not entailed at N = " + std::to_string(n));
  }
  o.note("fixture entails i <= p given N > 0; exact-unroll:5 entails it for N = 1..5");
  return o;
}

Outcome reversal_criterion() {
  Outcome o;
  std::string text = corpus("reversal.arr");
  lang::Program p = lang::parse_program(text);
  cli::RunReport bounded = run(text, corpus("reversal_bounded.cfg"));
  o.require(proven(bounded), std::string("exact-unroll n <= 6 ") + verdict_name(bounded));
  cli::Config bcfg = cli::parse_config(corpus("reversal_bounded.cfg"));
  int per_n = 0;
  for (int n = 0; n <= 6; ++n) {
    cli::Config c = bcfg;
    c.focus = {"y + z == n - 1 && n == " + std::to_string(n)};
    cli::RunReport rn = cli::run_pipeline(text, c);
    if (proven(rn)) ++per_n;
    else o.require(false, "n = " + std::to_string(n) + " " + verdict_name(rn));
  }

  auto t0 = std::chrono::steady_clock::now();
  cli::Config cfg = cli::parse_config(corpus("reversal.cfg"));
  cli::RunReport r = cli::run_pipeline(text, cfg);
  double t = seconds_since(t0);
  o.require(r.verdict != cli::Verdict::NoTarget, "no target");
  Formula ac = lang::parse_formula("a == c");
  Formula ab = lang::parse_formula("a == b");
  const lift::QuantifiedInvariant& at_y = r.quantified.at(0);
  const lift::QuantifiedInvariant& at_z = r.quantified.at(1);
  Formula apart = lang::parse_formula("y < z");
  bool a_eq_c = lia::entails(lia::f_and({at_y.universe, at_y.matrix, r.contexts.at(0), apart}), ac);
  bool a_eq_b = lia::entails(lia::f_and({at_z.universe, at_z.matrix, r.contexts.at(1), apart}), ab);

  lang::Bounds b;
  b.values = {0, 1, 2};
  b.params["n"] = {0, 1, 2, 3, 4};
  SoundnessCount sc;
  for (const auto& inv : r.quantified) check_against_concrete(p, inv, b, sc);
  o.require(sc.violations == 0, std::to_string(sc.violations) + " unsound instances, e.g. " + sc.example);
  o.note(std::to_string(per_n) + "/7 single sizes proven");
  o.note(std::string("symbolic run ") + verdict_name(r) + " in " + fmt_seconds(t));
  o.note(std::string("a == c under x == y < z: ") + (a_eq_c ? "yes" : "no"));
  o.note(std::string("a == b under y < z == x: ") + (a_eq_b ? "yes" : "no"));
  o.note(std::to_string(sc.checked) + " concrete instances checked");
  return o;
}

Outcome dutch_flag_criterion() {
  Outcome o;
  std::string text = corpus("dutch_flag.arr");
  lang::Program p = lang::parse_program(text);
  std::size_t runs = 0;
  for (int n = 0; n <= 5; ++n) {
    lang::Bounds b;
    b.params["n"] = {n};
    std::set<lang::Execution> es = lang::enumerate_relation(p, b);
    std::size_t expected = 1;
    for (int k = 0; k < n; ++k) expected *= 3;
    o.require(es.size() == expected, "n = " + std::to_string(n) + ": " + std::to_string(es.size()) + " runs");
    for (const auto& e : es) {
      ++runs;
      const auto& t = e.final.arrays.at("t");
      lang::Value lo = e.final.scalars.at("p"), hi = e.final.scalars.at("q");
      bool ok = e.final.status == lang::Status::Running;
      for (lang::Value k = 0; k < n; ++k) {
        lang::Value want = k <= lo ? 0 : (k >= hi ? 2 : 1);
        ok = ok && t[static_cast<std::size_t>(k)] == want;
      }
      ok = ok && lang::satisfies_target(p, e);
      if (!ok) {
        o.require(false, "violated by " + lang::to_string(e.final));
        return o;
      }
    }
  }

  auto dual = [](const char* u) {
    return std::pair{lang::parse_formula(u), lift::DualCells{Var::named("x"), Var::named("bx"), Var::named("y"),
                                                              Var::named("by")}};
  };
  auto tuple = [](int x, int bx, int y, int by) {
    return lang::parse_formula("x == " + std::to_string(x) + " && bx == " + std::to_string(bx) +
                               " && y == " + std::to_string(y) + " && by == " + std::to_string(by));
  };
  auto [u4, cells] = dual("1 <= x && x < y && y <= 3");
  Formula phi = lia::f_or({tuple(1, 0, 2, 0), tuple(1, 0, 3, 0), tuple(2, 0, 3, 0), tuple(1, 0, 3, 1)});
  Formula kept = lia::f_or({tuple(1, 0, 2, 0), tuple(1, 0, 3, 0), tuple(2, 0, 3, 0)});
  Formula reduced = lift::reduce_dual(phi, u4, cells);
  o.require(lia::equivalent(reduced, kept), "four-tuple reduction keeps " + lia::to_string(reduced));
  o.require(lia::entails(reduced, lang::parse_formula("bx == 0 && by == 0")), "reduction does not force zeros");

  auto [un, dcells] = dual("0 <= x && x < y && y < n");
  Formula white = lang::parse_formula("!(p < y && y < q && by != 1 && x == y - 1)");
  Formula goal = lang::parse_formula("p < y && y < q && y > 0 && y < n ==> by == 1");
  o.require(!lia::entails(white, goal), "shaped query already entailed");
  Formula wr = lift::reduce_dual(white, un, dcells);
  o.require(lia::entails(wr, goal), "shaped query not entailed after reduction");
  o.require(lia::entails(wr, white), "reduction is not a strengthening");

  auto t0 = std::chrono::steady_clock::now();
  cli::RunOptions opts;
  opts.budget_ms = 60000;
  cli::RunReport r = run(text, corpus("dutch_flag.cfg"), opts);
  o.note(std::to_string(runs) + " colorings verified");
  o.note(std::string("symbolic run ") + verdict_name(r) + " in " + fmt_seconds(seconds_since(t0)) + " (best effort)");
  return o;
}

oracle::CompletenessOptions small_bounds() {
  oracle::CompletenessOptions o;
  o.bounds.values = {0, 1, 2};
  o.bounds.param_values = {0, 1, 2};
  return o;
}

Outcome completeness_criterion() {
  Outcome o;
  std::mt19937 rng(2024);
  oracle::RandomProgramOptions ro;
  ro.max_arrays = 2;
  ro.max_accesses = 4;
  ro.max_length = 3;
  int equal = 0;
  for (int k = 0; k < 100; ++k) {
    std::string text = oracle::random_loopfree_program(rng, ro);
    oracle::CompletenessResult res = oracle::check_completeness(lang::parse_program(text), small_bounds());
    if (res.equal()) ++equal;
    else o.require(false, "differs on " + text + " witness " + res.witness);
  }
  oracle::CompletenessOptions few = small_bounds();
  few.bounds.params["N"] = {3};
  few.cells = {{"t", 2}};
  oracle::CompletenessResult w = oracle::check_completeness(lang::parse_program(corpus("zero_test_zero.arr")), few);
  o.require(w.included, "concrete not included");
  o.require(!w.equal(), "two cells are exact on zero_test_zero");
  o.note(std::to_string(equal) + "/100 programs set-equal");
  o.note("witness " + w.witness);
  return o;
}

Outcome galois_criterion() {
  Outcome o;
  std::size_t cases = 0;
  auto take = [&](const oracle::Report& r) {
    cases += r.cases();
    if (!r.ok()) o.require(false, r.to_string());
  };
  auto range = [](int k) {
    std::vector<lang::Value> v;
    for (int i = 0; i < k; ++i) v.push_back(i);
    return v;
  };
  for (int a = 1; a <= 2; ++a)
    for (int b = 1; b <= 2; ++b)
      for (int s = 1; s <= 2; ++s) {
        oracle::FiniteDomain d{range(a), range(b), range(s)};
        take(oracle::check_galois(d, oracle::Connection::Single));
        take(oracle::check_galois(d, oracle::Connection::DualOrdered));
      }
  oracle::FiniteDomain two{range(2), range(2), range(2)};
  for (const char* stmt : {"r = t[i];", "t[i] = r;", "i = i + 1;"})
    take(oracle::check_statement_soundness(stmt, two));
  for (const char* stmt : {"r = t[i];", "t[i] = r;"}) take(oracle::check_statement_soundness(stmt, two, 2, false, 2000, 5));
  oracle::FiniteDomain three{range(3), range(3), range(3)};
  take(oracle::check_galois(three, oracle::Connection::Single, 10000, 3));
  take(oracle::check_galois(three, oracle::Connection::DualOrdered, 10000, 4));
  std::uint64_t seed = 7;
  for (const char* stmt : {"r = t[i];", "t[i] = r;", "if (r == i) { r = 0; } else { i = r; }"})
    take(oracle::check_statement_soundness(stmt, three, 1, false, 3334, seed++));
  take(oracle::check_statement_soundness("t[i] = r;", oracle::FiniteDomain{range(3), range(2), range(2)}, 2, true,
                                         1000, 6));
  oracle::PrecisionLoss loss = oracle::check_precision_loss_example(oracle::FiniteDomain{range(2), range(2), {0}});
  o.require(loss.strict(), "forgetting the value is not strictly less precise");
  o.note(std::to_string(cases) + " cases");
  o.note("precision loss " + std::to_string(loss.before) + " -> " + std::to_string(loss.after) + " arrays");
  return o;
}

Outcome simplify_criterion() {
  Outcome o;
  struct Fixture {
    const char* file;
    const char* universe;
  };
  const Fixture fixtures[] = {
      {"matrix_init_post.formula", "0 <= x && x < m && 0 <= y && y < n"},
      {"slice_init_post.formula", "0 <= x && x < n && 0 <= low && low <= high && high <= n"},
      {"sentinel_summary.formula", "0 <= x && x < N"},
  };
  for (const auto& fx : fixtures) {
    Formula f = lang::parse_formula(corpus(fx.file));
    Formula u = lang::parse_formula(fx.universe);
    simplify::SimplifyResult r = simplify::dnf_simplify(f, u);
    std::string why;
    o.require(simplified_correctly(f, u, r, &why), std::string(fx.file) + ": " + why);
    o.note(std::string(fx.file) + " " + std::to_string(r.disjuncts.size()) + " disjuncts");
    if (std::string(fx.file) == "matrix_init_post.formula")
      o.require(r.disjuncts.size() == 1 &&
                    lia::equivalent(lia::f_and(r.disjuncts[0]), lang::parse_formula("a_new == v")),
                "matrix fixture is not the single disjunct a_new == v");
  }
  return o;
}

struct RNode {
  enum Kind { Le, Eq, Ne, Div, Not, And, Or } kind = Le;
  std::vector<int> coeffs;
  int constant = 0;
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
      case Le: return lia::f_le(e, 0);
      case Eq: return lia::f_eq(e, 0);
      case Ne: return lia::f_ne(e, 0);
      case Div: return lia::f_divides(modulus, e);
      case Not: return lia::f_not(kids[0].build(vars));
      case And: return lia::f_and(kids[0].build(vars), kids[1].build(vars));
      case Or: return lia::f_or(kids[0].build(vars), kids[1].build(vars));
    }
    return lia::f_true();
  }
};

RNode random_node(std::mt19937& rng, int nvars, int depth, int cmax, int kmax) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_int_distribution<int> coeff(-cmax, cmax);
  std::uniform_int_distribution<int> cst(-kmax, kmax);
  int p = pick(rng);
  if (depth > 0 && p < 5) {
    RNode n;
    n.kind = p == 0 ? RNode::Not : (p < 3 ? RNode::And : RNode::Or);
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

bool any_point(int nvars, int lo, int hi, const std::function<bool(const std::vector<long long>&)>& f) {
  std::vector<long long> x(nvars, lo);
  while (true) {
    if (f(x)) return true;
    int i = 0;
    while (i < nvars && x[i] == hi) x[i++] = lo;
    if (i == nvars) return false;
    ++x[i];
  }
}

Formula box(const std::vector<Var>& vars, int lo, int hi) {
  std::vector<Formula> cs;
  for (Var v : vars) {
    cs.push_back(lia::f_geq(LinExpr::of(v), LinExpr(lo)));
    cs.push_back(lia::f_le(LinExpr::of(v), LinExpr(hi)));
  }
  return lia::f_and(cs);
}

Outcome lia_criterion() {
  Outcome o;
  std::mt19937 rng(31337);
  std::vector<Var> vars = {Var::named("r0"), Var::named("r1"), Var::named("r2"), Var::named("r3")};
  Formula in_box = box(vars, -6, 6);
  int sat_agree = 0, sat_count = 0;
  for (int iter = 0; iter < 1000; ++iter) {
    RNode n = random_node(rng, 4, 3, 3, 6);
    Formula f = lia::f_and(n.build(vars), in_box);
    bool brute = any_point(4, -6, 6, [&](const std::vector<long long>& x) { return n.eval(x); });
    auto m = lia::is_sat(f);
    bool ok = brute == m.has_value();
    if (m) {
      ++sat_count;
      std::vector<long long> x;
      for (Var v : vars) x.push_back(m->ints.count(v) ? m->ints.at(v).convert_to<long long>() : 0);
      ok = ok && n.eval(x);
    }
    if (ok) ++sat_agree;
    else o.require(false, "is_sat disagrees on " + lia::to_string(f));
  }
  std::vector<Var> qv = {Var::named("q0"), Var::named("q1"), Var::named("q2")};
  Formula range = box({qv[0]}, -4, 4);
  int qe_agree = 0;
  for (int iter = 0; iter < 200; ++iter) {
    RNode n = random_node(rng, 3, 2, 3, 4);
    bool ex = iter % 2 == 0;
    Formula body = n.build(qv);
    Formula f = ex ? lia::f_exists({qv[0]}, lia::f_and(range, body)) : lia::f_forall({qv[0]}, lia::f_implies(range, body));
    Formula q = lia::eliminate_quantifiers(f);
    bool ok = q.is_quantifier_free();
    for (long long y = -4; y <= 4 && ok; ++y)
      for (long long z = -4; z <= 4 && ok; ++z) {
        bool truth = !ex;
        for (long long x = -4; x <= 4; ++x) {
          bool v = n.eval({x, y, z});
          if (ex && v) truth = true;
          if (!ex && !v) truth = false;
        }
        lia::Model m;
        m.ints[qv[1]] = y;
        m.ints[qv[2]] = z;
        ok = lia::evaluate(q, m) == truth;
      }
    if (ok) ++qe_agree;
    else o.require(false, "elimination disagrees on " + lia::to_string(f));
  }
  o.note(std::to_string(sat_agree) + "/1000 satisfiability (" + std::to_string(sat_count) + " sat)");
  o.note(std::to_string(qe_agree) + "/200 eliminations");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {"init", init_criterion},
      {"matrix-init", matrix_criterion},
      {"slice-init", slice_criterion},
      {"array-copy", copy_criterion},
      {"sentinel", sentinel_criterion},
      {"reversal", reversal_criterion},
      {"dutch-flag", dutch_flag_criterion},
      {"completeness", completeness_criterion},
      {"galois-oracle", galois_criterion},
      {"dnf-simplify", simplify_criterion},
      {"lia-engine", lia_criterion},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu %s [%s] %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].name,
                fmt_seconds(seconds_since(t0)).c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
