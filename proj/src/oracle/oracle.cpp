#include "arrabs/oracle/oracle.hpp"

#include "arrabs/lang/parser.hpp"
#include "arrabs/transform/transform.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace arrabs::oracle {

namespace {

using K = lang::Expr::Kind;

template <class T>
bool subset(const std::set<T>& a, const std::set<T>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

template <class T>
std::set<T> unite(std::set<T> a, const std::set<T>& b) {
  a.insert(b.begin(), b.end());
  return a;
}

std::string show(Value v) { return std::to_string(v); }

std::string show(const std::pair<Value, Fn>& e) {
  std::string s = "(" + show(e.first) + ", [";
  for (std::size_t i = 0; i < e.second.size(); ++i) s += (i ? "," : "") + show(e.second[i]);
  return s + "])";
}

template <std::size_t N>
std::string show(const std::array<Value, N>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < N; ++i) s += (i ? "," : "") + show(t[i]);
  return s + ")";
}

std::string show(const std::vector<Value>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + show(t[i]);
  return s + ")";
}

template <class T>
std::string show(const std::set<T>& xs) {
  std::string s = "{";
  bool first = true;
  for (const auto& x : xs) {
    s += (first ? "" : " ") + show(x);
    first = false;
  }
  return s + "}";
}

void record(LawCheck& law, bool holds, const std::function<std::string()>& why) {
  ++law.cases;
  if (holds) return;
  if (law.violations++ == 0) law.counterexample = why();
}

template <class T>
std::set<T> random_subset(const std::vector<T>& universe, std::mt19937_64& rng) {
  static const double densities[] = {0.2, 0.5, 0.8, 0.95};
  std::bernoulli_distribution pick(densities[rng() % 4]);
  std::set<T> out;
  for (const auto& e : universe)
    if (pick(rng)) out.insert(e);
  return out;
}

template <class T>
std::set<T> subset_of_mask(const std::vector<T>& universe, std::uint64_t mask) {
  std::set<T> out;
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (mask >> i & 1) out.insert(universe[i]);
  return out;
}

template <class Abs>
Report check_connection(const std::string& name, const std::vector<std::pair<Value, Fn>>& cu,
                        const std::vector<typename Abs::value_type>& au,
                        const std::function<Abs(const ConcreteSet&)>& alpha,
                        const std::function<ConcreteSet(const Abs&)>& gamma, std::size_t samples,
                        std::uint64_t seed) {
  Report rep{name, {{"extensive"}, {"reductive"}, {"alpha monotone"}, {"gamma monotone"}, {"alpha additive"},
                    {"reduce_opt decreasing"}, {"reduce_opt idempotent"}, {"reduce_opt preserves gamma"}}};
  LawCheck &ext = rep.laws[0], &red = rep.laws[1], &amono = rep.laws[2], &gmono = rep.laws[3],
           &add = rep.laws[4], &rdec = rep.laws[5], &ridem = rep.laws[6], &rgam = rep.laws[7];
  std::mt19937_64 rng(seed);

  auto concrete_case = [&](const ConcreteSet& f, const std::pair<Value, Fn>& e) {
    Abs af = alpha(f);
    record(ext, subset(f, gamma(af)), [&] { return "F=" + show(f); });
    ConcreteSet g = f;
    g.insert(e);
    Abs ag = alpha(g);
    record(amono, subset(af, ag), [&] { return "F=" + show(f) + " e=" + show(e); });
    record(add, ag == unite(af, alpha(ConcreteSet{e})), [&] { return "F=" + show(f) + " e=" + show(e); });
  };
  auto abstract_case = [&](const Abs& x, const typename Abs::value_type* e) {
    ConcreteSet gx = gamma(x);
    Abs rx = alpha(gx);
    record(red, subset(rx, x), [&] { return "X=" + show(x); });
    if (e) {
      Abs y = x;
      y.insert(*e);
      record(gmono, subset(gx, gamma(y)), [&] { return "X=" + show(x) + " e=" + show(*e); });
    }
    record(rdec, subset(rx, x), [&] { return "X=" + show(x); });
    ConcreteSet grx = gamma(rx);
    record(ridem, alpha(grx) == rx, [&] { return "X=" + show(x); });
    record(rgam, grx == gx, [&] { return "X=" + show(x); });
  };

  if (samples == 0) {
    if (cu.size() > 20 || au.size() > 20) throw std::invalid_argument("domain too large for exhaustive checking");
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << cu.size()); ++m) {
      ConcreteSet f = subset_of_mask(cu, m);
      for (std::size_t i = 0; i < cu.size(); ++i)
        if (!(m >> i & 1)) concrete_case(f, cu[i]);
      if (m + 1 == (std::uint64_t{1} << cu.size()) && !cu.empty()) concrete_case(f, cu.front());
    }
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << au.size()); ++m) {
      Abs x = subset_of_mask(au, m);
      for (std::size_t i = 0; i < au.size(); ++i)
        if (!(m >> i & 1)) abstract_case(x, &au[i]);
      if (m + 1 == (std::uint64_t{1} << au.size())) abstract_case(x, au.empty() ? nullptr : &au.front());
    }
  } else {
    for (std::size_t k = 0; k < samples; ++k) {
      if (!cu.empty()) concrete_case(random_subset(cu, rng), cu[rng() % cu.size()]);
      abstract_case(random_subset(au, rng), au.empty() ? nullptr : &au[rng() % au.size()]);
    }
  }
  return rep;
}

/// Index tuples for k cells over 0..len-1, strictly increasing if ordered.
std::vector<std::vector<Value>> index_tuples(Value len, std::size_t k, bool ordered) {
  std::vector<std::vector<Value>> out;
  std::vector<Value> cur;
  std::function<void()> rec = [&] {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    Value lo = ordered && !cur.empty() ? cur.back() + 1 : 0;
    for (Value v = lo; v < len; ++v) {
      cur.push_back(v);
      rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

std::vector<std::vector<Value>> product(const std::vector<Value>& vals, std::size_t k) {
  std::vector<std::vector<Value>> out{{}};
  for (std::size_t d = 0; d < k; ++d) {
    std::vector<std::vector<Value>> next;
    for (const auto& p : out)
      for (Value v : vals) {
        next.push_back(p);
        next.back().push_back(v);
      }
    out = std::move(next);
  }
  return out;
}

using State = std::vector<Value>;  // i, r, status, then f or cells
using StateSet = std::set<State>;
using Relation = std::map<State, StateSet>;

constexpr std::size_t kScalarPart = 3;

lang::ConcreteState to_concrete(const State& s, std::size_t len) {
  lang::ConcreteState c;
  c.scalars["i"] = s[0];
  c.scalars["r"] = s[1];
  c.status = static_cast<lang::Status>(s[2]);
  c.arrays["t"] = std::vector<Value>(s.begin() + kScalarPart, s.begin() + kScalarPart + static_cast<long>(len));
  return c;
}

State from_concrete(const lang::ConcreteState& c) {
  State s{c.scalars.at("i"), c.scalars.at("r"), static_cast<Value>(c.status)};
  auto it = c.arrays.find("t");
  if (it != c.arrays.end()) s.insert(s.end(), it->second.begin(), it->second.end());
  return s;
}

struct CellSemantics {
  std::size_t len = 0;
  std::size_t cells = 1;
  std::vector<std::vector<Value>> tuples;  // admissible index tuples
  std::vector<Value> values;

  StateSet gamma(const StateSet& x) const {
    std::map<State, std::set<State>> by_scalar;
    for (const auto& t : x) by_scalar[State(t.begin(), t.begin() + kScalarPart)].insert(t);
    StateSet out;
    for (const auto& [s, ts] : by_scalar)
      for (const auto& f : product(values, len)) {
        bool ok = true;
        for (const auto& idx : tuples) {
          State t = s;
          for (std::size_t j = 0; j < cells; ++j) {
            t.push_back(idx[j]);
            t.push_back(f[static_cast<std::size_t>(idx[j])]);
          }
          if (!ts.count(t)) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        State c = s;
        c.insert(c.end(), f.begin(), f.end());
        out.insert(c);
      }
    return out;
  }
};

StateSet image(const Relation& rel, const StateSet& x) {
  StateSet out;
  for (const auto& s : x) {
    auto it = rel.find(s);
    if (it != rel.end()) out.insert(it->second.begin(), it->second.end());
  }
  return out;
}

StateSet preimage(const Relation& rel, const StateSet& y) {
  StateSet out;
  for (const auto& [s, succ] : rel)
    for (const auto& t : succ)
      if (y.count(t)) {
        out.insert(s);
        break;
      }
  return out;
}

Relation relation(const lang::Program& p, const std::vector<lang::ConcreteState>& init, bool concrete, const std::vector<std::string>& cell_names) {
  lang::Bounds b;
  Relation rel;
  for (const auto& e : lang::execute(p, init, b)) {
    auto key = [&](const lang::ConcreteState& c) {
      if (concrete) return from_concrete(c);
      State s{c.scalars.at("i"), c.scalars.at("r"), static_cast<Value>(c.status)};
      for (const auto& n : cell_names) s.push_back(c.scalars.at(n));
      return s;
    };
    rel[key(e.initial)].insert(key(e.final));
  }
  for (const auto& s : init) {
    if (concrete) {
      rel.try_emplace(from_concrete(s));
    } else {
      State k{s.scalars.at("i"), s.scalars.at("r"), static_cast<Value>(s.status)};
      for (const auto& n : cell_names) k.push_back(s.scalars.at(n));
      rel.try_emplace(k);
    }
  }
  return rel;
}

}  // namespace

std::vector<Fn> all_functions(const FiniteDomain& dom) { return product(dom.B, dom.A.size()); }

ConcreteSet all_states(const FiniteDomain& dom) {
  ConcreteSet out;
  for (Value s : dom.S)
    for (const auto& f : all_functions(dom)) out.insert({s, f});
  return out;
}

AbstractSet1 all_tuples1(const FiniteDomain& dom) {
  AbstractSet1 out;
  for (Value s : dom.S)
    for (Value a : dom.A)
      for (Value b : dom.B) out.insert({s, a, b});
  return out;
}

AbstractSet2 all_tuples2(const FiniteDomain& dom) {
  AbstractSet2 out;
  for (Value s : dom.S)
    for (Value a : dom.A)
      for (Value a2 : dom.A)
        if (a < a2)
          for (Value b : dom.B)
            for (Value b2 : dom.B) out.insert({s, a, b, a2, b2});
  return out;
}

AbstractSet1 alpha1(const ConcreteSet& f, const FiniteDomain& dom) {
  AbstractSet1 out;
  for (const auto& [s, fn] : f)
    for (std::size_t k = 0; k < dom.A.size(); ++k) out.insert({s, dom.A[k], fn[k]});
  return out;
}

ConcreteSet gamma1(const AbstractSet1& x, const FiniteDomain& dom) {
  ConcreteSet out;
  for (Value s : dom.S)
    for (const auto& fn : all_functions(dom)) {
      bool ok = true;
      for (std::size_t k = 0; k < dom.A.size() && ok; ++k) ok = x.count({s, dom.A[k], fn[k]}) > 0;
      if (ok) out.insert({s, fn});
    }
  return out;
}

AbstractSet2 alpha2lt(const ConcreteSet& f, const FiniteDomain& dom) {
  AbstractSet2 out;
  for (const auto& [s, fn] : f)
    for (std::size_t k = 0; k < dom.A.size(); ++k)
      for (std::size_t l = k + 1; l < dom.A.size(); ++l) out.insert({s, dom.A[k], fn[k], dom.A[l], fn[l]});
  return out;
}

ConcreteSet gamma2lt(const AbstractSet2& x, const FiniteDomain& dom) {
  ConcreteSet out;
  for (Value s : dom.S)
    for (const auto& fn : all_functions(dom)) {
      bool ok = true;
      for (std::size_t k = 0; k < dom.A.size() && ok; ++k)
        for (std::size_t l = k + 1; l < dom.A.size() && ok; ++l)
          ok = x.count({s, dom.A[k], fn[k], dom.A[l], fn[l]}) > 0;
      if (ok) out.insert({s, fn});
    }
  return out;
}

AbstractSet1 reduce_opt(const AbstractSet1& x, const FiniteDomain& dom) { return alpha1(gamma1(x, dom), dom); }
AbstractSet2 reduce_opt(const AbstractSet2& x, const FiniteDomain& dom) { return alpha2lt(gamma2lt(x, dom), dom); }

bool Report::ok() const {
  return std::all_of(laws.begin(), laws.end(), [](const LawCheck& l) { return l.violations == 0; });
}

std::size_t Report::cases() const {
  std::size_t n = 0;
  for (const auto& l : laws) n += l.cases;
  return n;
}

std::string Report::to_string() const {
  std::ostringstream os;
  for (const auto& l : laws) {
    os << name << " | " << l.law << " | " << l.cases << " cases | " << (l.violations ? "FAIL" : "PASS");
    if (l.violations) os << " | " << l.violations << " violations, e.g. " << l.counterexample;
    os << "\n";
  }
  return os.str();
}

Report check_galois(const FiniteDomain& dom, Connection which, std::size_t samples, std::uint64_t seed) {
  ConcreteSet cs = all_states(dom);
  std::vector<std::pair<Value, Fn>> cu(cs.begin(), cs.end());
  std::string size = "|A|=" + std::to_string(dom.A.size()) + " |B|=" + std::to_string(dom.B.size()) +
                     " |S|=" + std::to_string(dom.S.size());
  if (which == Connection::Single) {
    AbstractSet1 as = all_tuples1(dom);
    return check_connection<AbstractSet1>(
        "alpha1 " + size, cu, {as.begin(), as.end()}, [&](const ConcreteSet& f) { return alpha1(f, dom); },
        [&](const AbstractSet1& x) { return gamma1(x, dom); }, samples, seed);
  }
  AbstractSet2 as = all_tuples2(dom);
  return check_connection<AbstractSet2>(
      "alpha2< " + size, cu, {as.begin(), as.end()}, [&](const ConcreteSet& f) { return alpha2lt(f, dom); },
      [&](const AbstractSet2& x) { return gamma2lt(x, dom); }, samples, seed);
}

Report check_statement_soundness(const std::string& statement, const FiniteDomain& dom, std::size_t cells,
                                 bool ordered, std::size_t samples, std::uint64_t seed) {
  const std::size_t len = dom.A.size();
  for (std::size_t k = 0; k < len; ++k)
    if (dom.A[k] != static_cast<Value>(k)) throw std::invalid_argument("indices must be 0..|A|-1");
  lang::Program p = lang::parse_program("proc stmt() { var i, r: int; array t[" + std::to_string(len) +
                                        "]: int; " + statement + " }");
  if (p.body.children.size() != 1) throw std::invalid_argument("expected a single statement");
  const lang::Stmt& s = p.body.children.front();

  transform::ArrayCells ac{"t", {}, ordered};
  std::vector<std::string> cell_names;
  lang::Program ap;
  ap.name = "stmt_abs";
  ap.locals = p.locals;
  for (std::size_t j = 0; j < cells; ++j) {
    std::string x = "x" + std::to_string(j), b = "b" + std::to_string(j);
    ac.cells.push_back({{x}, b, false});
    cell_names.push_back(x);
    cell_names.push_back(b);
    ap.locals.push_back({x, lang::Type::integer(), {}});
    ap.locals.push_back({b, lang::Type::integer(), {}});
  }
  auto in_bounds = [&](const lang::ExprPtr& i) {
    return lang::binary(K::And, lang::binary(K::Le, lang::int_lit(0), i),
                        lang::binary(K::Lt, i, lang::int_lit(static_cast<long>(len))));
  };
  std::vector<lang::Stmt> body;
  if (s.kind == lang::Stmt::Kind::Write) {
    body.push_back(lang::Stmt::bounds_check(in_bounds(s.index[0])));
    for (auto& t : transform::transform_write(s, &ac)) body.push_back(std::move(t));
  } else if (s.kind == lang::Stmt::Kind::Assign && s.value->kind == K::Read) {
    body.push_back(lang::Stmt::bounds_check(in_bounds(s.value->args[0])));
    for (auto& t : transform::transform_read(s, &ac)) body.push_back(std::move(t));
  } else {
    if (lang::contains_loop(s)) throw std::invalid_argument("statement must be loop-free");
    body.push_back(s);
  }
  ap.body = lang::Stmt::seq(std::move(body));

  std::set<Value> content(dom.B.begin(), dom.B.end());
  content.insert(dom.S.begin(), dom.S.end());
  CellSemantics sem{len, cells, index_tuples(static_cast<Value>(len), cells, ordered), {content.begin(), content.end()}};
  std::vector<lang::ConcreteState> cinit, ainit;
  for (Value i : dom.S)
    for (Value r : dom.S) {
      for (const auto& f : product(dom.B, len)) {
        State st{i, r, 0};
        st.insert(st.end(), f.begin(), f.end());
        cinit.push_back(to_concrete(st, len));
      }
      for (const auto& idx : sem.tuples)
        for (const auto& vals : product(dom.B, cells)) {
          lang::ConcreteState c;
          c.scalars["i"] = i;
          c.scalars["r"] = r;
          for (std::size_t j = 0; j < cells; ++j) {
            c.scalars[cell_names[2 * j]] = idx[j];
            c.scalars[cell_names[2 * j + 1]] = vals[j];
          }
          ainit.push_back(c);
        }
    }
  Relation crel = relation(p, cinit, true, {});
  Relation arel = relation(ap, ainit, false, cell_names);
  std::vector<State> au;
  for (const auto& [k, v] : arel) au.push_back(k);
  StateSet img_set;
  for (const auto& [k, v] : arel) img_set.insert(v.begin(), v.end());
  std::vector<State> iu(img_set.begin(), img_set.end());

  Report rep{"stmt `" + statement + "` cells=" + std::to_string(cells) + (ordered ? " ordered" : "") +
                 " |A|=" + std::to_string(len) + " |B|=" + std::to_string(dom.B.size()),
             {{"forward soundness"}, {"backward soundness"}}};
  std::mt19937_64 rng(seed);
  auto forward = [&](const StateSet& x) {
    StateSet lhs = image(crel, sem.gamma(x));
    StateSet rhs = sem.gamma(image(arel, x));
    record(rep.laws[0], subset(lhs, rhs), [&] { return "X=" + show(x); });
  };
  auto backward = [&](const StateSet& y) {
    StateSet lhs = preimage(crel, sem.gamma(y));
    StateSet rhs = sem.gamma(preimage(arel, y));
    record(rep.laws[1], subset(lhs, rhs), [&] { return "Y=" + show(y); });
  };
  if (samples == 0) {
    if (au.size() > 20 || iu.size() > 20) throw std::invalid_argument("domain too large for exhaustive checking");
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << au.size()); ++m) forward(subset_of_mask(au, m));
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << iu.size()); ++m) backward(subset_of_mask(iu, m));
  } else {
    for (std::size_t k = 0; k < samples; ++k) {
      forward(random_subset(au, rng));
      backward(random_subset(iu, rng));
    }
  }
  return rep;
}

CompletenessResult check_completeness(const lang::Program& p, const CompletenessOptions& opts) {
  transform::IndexConfig probe;
  transform::ScalarProgram sp0 = transform::transform_program(p, probe);
  std::map<std::string, std::size_t> accesses;
  for (const auto& [site, acc] : sp0.accesses) ++accesses[acc.array];
  transform::IndexConfig cfg;
  for (const auto& a : sp0.source.arrays) {
    std::size_t k = std::max<std::size_t>(accesses[a.name], 1);
    for (const auto& [n, c] : opts.cells)
      if (n == a.name) k = c;
    cfg.arrays.push_back(transform::default_cells(sp0.source, a.name, k));
  }
  transform::ScalarProgram sp = transform::transform_program(p, cfg);

  std::set<std::string> scalars;
  for (const auto* list : {&sp.source.params, &sp.source.locals})
    for (const auto& d : *list) scalars.insert(d.name);

  CompletenessResult res;
  for (const auto& s : lang::enumerate_executions(sp.source, opts.bounds))
    res.concrete.insert(lang::project(s, scalars));

  // Index variables range over the largest extent of their dimension.
  auto extent = [&](const lang::ExprPtr& d) {
    if (d->kind == K::IntLit) return d->value.convert_to<Value>();
    auto it = opts.bounds.params.find(d->name);
    const auto& vals = it != opts.bounds.params.end() ? it->second : opts.bounds.param_values;
    return vals.empty() ? Value{0} : *std::max_element(vals.begin(), vals.end());
  };
  lang::Bounds ab = opts.bounds;
  struct ArrayInfo {
    const lang::ArrayDecl* decl;
    const transform::ArrayCells* cells;
    std::vector<Value> values;
  };
  std::vector<ArrayInfo> arrays;
  for (const auto& ac : cfg.arrays) {
    const lang::ArrayDecl* d = sp.source.array(ac.array);
    for (const auto& c : ac.cells)
      for (std::size_t k = 0; k < c.index.size(); ++k) {
        std::vector<Value> r;
        for (Value v = 0; v < extent(d->dims[k]); ++v) r.push_back(v);
        ab.params[c.index[k]] = r;
      }
    std::vector<Value> vals = opts.bounds.values;
    if (d->elem.is_bool()) vals = {0, 1};
    if (const auto* e = sp.source.enumeration(d->elem.enum_name); e && d->elem.sort == lang::Type::Sort::Enum) {
      vals.clear();
      for (std::size_t i = 0; i < e->values.size(); ++i) vals.push_back(static_cast<Value>(i));
    }
    arrays.push_back({d, &ac, vals});
  }

  // Final abstract states grouped by their scalar projection.
  std::map<lang::ConcreteState, std::set<std::vector<Value>>> groups;
  std::vector<std::string> cell_vars;
  for (const auto& a : arrays)
    for (const auto& c : a.cells->cells) {
      for (const auto& x : c.index) cell_vars.push_back(x);
      cell_vars.push_back(c.value);
    }
  for (const auto& s : lang::enumerate_executions(sp.program, ab)) {
    lang::ConcreteState key = lang::project(s, scalars);
    std::vector<Value> cellv;
    for (const auto& n : cell_vars) cellv.push_back(s.scalars.at(n));
    if (s.status != lang::Status::Running) {
      res.abstract.insert(key);
      continue;
    }
    groups[key].insert(cellv);
  }

  for (const auto& [key, tuples] : groups) {
    // Extents under this scalar state, and the value ranges seen.
    std::vector<std::size_t> sizes;
    std::vector<std::vector<Value>> dims;
    std::vector<std::vector<Value>> vals;
    for (const auto& a : arrays) {
      std::vector<Value> ds;
      std::size_t n = 1;
      for (const auto& d : a.decl->dims) {
        Value e = d->kind == K::IntLit ? d->value.convert_to<Value>() : key.scalars.at(d->name);
        e = std::max<Value>(e, 0);
        ds.push_back(e);
        n *= static_cast<std::size_t>(e);
      }
      dims.push_back(ds);
      sizes.push_back(n);
      std::set<Value> vs(a.values.begin(), a.values.end());
      vals.emplace_back(vs.begin(), vs.end());
    }
    {
      std::size_t off = 0;
      for (std::size_t ai = 0; ai < arrays.size(); ++ai) {
        std::set<Value> vs(vals[ai].begin(), vals[ai].end());
        for (const auto& t : tuples) {
          std::size_t o = off;
          for (const auto& c : arrays[ai].cells->cells) {
            o += c.index.size();
            vs.insert(t[o]);
            ++o;
          }
        }
        vals[ai].assign(vs.begin(), vs.end());
        for (const auto& c : arrays[ai].cells->cells) off += c.index.size() + 1;
      }
    }
    // Index tuples admitted by the universe: every cell index in range.
    std::vector<std::vector<Value>> idx_tuples{{}};
    for (std::size_t ai = 0; ai < arrays.size(); ++ai)
      for (const auto& c : arrays[ai].cells->cells)
        for (std::size_t k = 0; k < c.index.size(); ++k) {
          std::vector<std::vector<Value>> next;
          for (const auto& t : idx_tuples)
            for (Value v = 0; v < dims[ai][k]; ++v) {
              next.push_back(t);
              next.back().push_back(v);
            }
          idx_tuples = std::move(next);
        }
    std::vector<std::vector<Value>> contents(arrays.size());
    std::function<bool(std::size_t)> search = [&](std::size_t ai) -> bool {
      if (ai == arrays.size()) {
        for (const auto& it : idx_tuples) {
          std::vector<Value> t;
          std::size_t pos = 0;
          for (std::size_t a = 0; a < arrays.size(); ++a)
            for (const auto& c : arrays[a].cells->cells) {
              std::size_t flat = 0;
              for (std::size_t k = 0; k < c.index.size(); ++k) {
                t.push_back(it[pos]);
                flat = flat * static_cast<std::size_t>(dims[a][k]) + static_cast<std::size_t>(it[pos]);
                ++pos;
              }
              t.push_back(contents[a][flat]);
            }
          if (!tuples.count(t)) return false;
        }
        return true;
      }
      for (const auto& f : product(vals[ai], sizes[ai])) {
        contents[ai] = f;
        if (search(ai + 1)) return true;
      }
      return false;
    };
    if (search(0)) res.abstract.insert(key);
  }

  auto split = [](const std::set<lang::ConcreteState>& xs, bool failing) {
    std::set<lang::ConcreteState> out;
    for (const auto& s : xs)
      if ((s.status != lang::Status::Running) == failing) out.insert(s);
    return out;
  };
  res.states_equal = split(res.concrete, false) == split(res.abstract, false);
  res.failures_equal = split(res.concrete, true) == split(res.abstract, true);
  res.included = subset(res.concrete, res.abstract);
  for (const auto& s : res.abstract)
    if (!res.concrete.count(s)) {
      res.witness = lang::to_string(s);
      break;
    }
  return res;
}

PrecisionLoss check_precision_loss_example(const FiniteDomain& dom) {
  FiniteDomain d = dom;
  d.S = dom.B;
  AbstractSet1 x;
  for (Value v : dom.B)
    for (Value a : dom.A) x.insert({v, a, v});
  std::set<Fn> forgotten;
  for (const auto& [v, f] : gamma1(x, d)) forgotten.insert(f);
  AbstractSet1 y;
  for (const auto& t : x) y.insert({0, t[1], t[2]});
  FiniteDomain d0 = dom;
  d0.S = {0};
  return {forgotten.size(), gamma1(y, d0).size()};
}

std::string random_loopfree_program(std::mt19937& rng, const RandomProgramOptions& opts) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  std::size_t narrays = 1 + pick(opts.max_arrays);
  std::vector<std::string> names = {"t", "u"};
  std::vector<std::size_t> lens;
  for (std::size_t a = 0; a < narrays; ++a) lens.push_back(1 + pick(opts.max_length));
  std::size_t min_len = *std::min_element(lens.begin(), lens.end());
  std::size_t budget = 1 + pick(opts.max_accesses);
  const std::vector<std::string> idx = {"i", "j"};
  const std::vector<std::string> vals = {"r", "w"};

  std::function<std::string(int, std::size_t)> block = [&](int depth, std::size_t count) {
    std::string out;
    for (std::size_t k = 0; k < count; ++k) {
      std::size_t kind = pick(depth < 1 ? 8 : 7);
      std::string arr = names[pick(narrays)];
      std::string i = idx[pick(2)], v = vals[pick(2)];
      if ((kind == 0 || kind == 1) && budget > 0) {
        --budget;
        out += kind == 0 ? v + " = " + arr + "[" + i + "]; " : arr + "[" + i + "] = " + v + "; ";
      } else if (kind == 2) {
        out += i + " = " + std::to_string(pick(min_len)) + "; ";
      } else if (kind == 3) {
        out += "if (" + v + " < " + std::to_string(min_len) + " && 0 <= " + v + ") { " + i + " = " + v + "; } ";
      } else if (kind == 4) {
        static const char* const forms[] = {"w = r; ", "r = 2 - w; ", "w = p; ",
                                            "if (r < 2) { r = r + 1; } else { r = 0; } "};
        out += forms[pick(4)];
      } else if (kind == 5) {
        out += "if (p < " + std::to_string(min_len) + ") { " + i + " = p; } ";
      } else if (kind == 6 && budget > 0) {
        --budget;
        out += arr + "[" + i + "] = " + std::to_string(pick(3)) + "; ";
      } else if (kind == 7) {
        std::string cond = vals[0] + (pick(2) ? " == " : " < ") + vals[1];
        out += "if (" + cond + ") { " + block(depth + 1, 1 + pick(2)) + "} else { " + block(depth + 1, pick(2)) +
               "} ";
      }
    }
    return out;
  };
  std::string body = block(0, 1 + pick(opts.max_statements));
  std::string text = "proc rnd(p: int) { var i, j, r, w: int; ";
  for (std::size_t a = 0; a < narrays; ++a)
    text += "array " + names[a] + "[" + std::to_string(lens[a]) + "]: int; ";
  return text + body + "}";
}

}  // namespace arrabs::oracle
