#include "arrabs/transform/transform.hpp"

#include "arrabs/lang/decompose.hpp"

#include <algorithm>
#include <set>

namespace arrabs::transform {

using lang::Expr;
using lang::Type;
using lang::VarDecl;
using K = Expr::Kind;

std::string access_index_name(std::size_t d) { return "acc$" + std::to_string(d); }

ArrayCells default_cells(const Program& p, const std::string& array, std::size_t k, bool ordered) {
  const lang::ArrayDecl* a = p.array(array);
  if (!a) throw TransformError("unknown array " + array);
  ArrayCells out;
  out.array = array;
  out.ordered = ordered;
  for (std::size_t j = 0; j < k; ++j) {
    Cell c;
    for (std::size_t d = 0; d < a->dims.size(); ++d)
      c.index.push_back(array + "$" + std::to_string(j) + "$x" + std::to_string(d));
    c.value = array + "$" + std::to_string(j) + "$v";
    out.cells.push_back(std::move(c));
  }
  return out;
}

namespace {

ExprPtr index_match(const std::vector<ExprPtr>& idx, const Cell& c) {
  std::vector<ExprPtr> eqs;
  for (std::size_t d = 0; d < idx.size(); ++d)
    eqs.push_back(lang::binary(K::Eq, idx[d], lang::var(c.index[d])));
  return lang::conjunction(eqs);
}

ExprPtr in_range(const std::vector<ExprPtr>& idx, const lang::ArrayDecl& a) {
  std::vector<ExprPtr> cs;
  for (std::size_t d = 0; d < idx.size(); ++d) {
    cs.push_back(lang::binary(K::Le, lang::int_lit(0), idx[d]));
    cs.push_back(lang::binary(K::Lt, idx[d], a.dims[d]));
  }
  return lang::conjunction(cs);
}

const ArrayCells* find_cells(const IndexConfig& cfg, const std::string& array) {
  for (const auto& a : cfg.arrays)
    if (a.array == array) return &a;
  return nullptr;
}

std::vector<const Cell*> current_cells(const ArrayCells* cells) {
  std::vector<const Cell*> out;
  if (!cells) return out;
  for (const auto& c : cells->cells)
    if (!c.initial) out.push_back(&c);
  return out;
}

class Transformer {
 public:
  Transformer(const Program& src, const IndexConfig& cfg) : src_(src), cfg_(cfg) {}

  ScalarProgram run() {
    validate();
    ScalarProgram sp;
    sp.source = src_;
    sp.config = cfg_;
    Program& out = sp.program;
    out.name = src_.name;
    out.enums = src_.enums;
    out.params = src_.params;
    out.locals = src_.locals;

    std::vector<Stmt> prologue;
    for (const auto& ac : cfg_.arrays) {
      const lang::ArrayDecl* a = src_.array(ac.array);
      for (const auto& c : ac.cells)
        for (const auto& x : c.index)
          if (std::find(sp.index_vars.begin(), sp.index_vars.end(), x) == sp.index_vars.end()) {
            sp.index_vars.push_back(x);
            out.params.push_back({x, Type::integer(), {}});
          }
      for (const auto& c : ac.cells) {
        sp.cell_vars.push_back(c.value);
        out.locals.push_back({c.value, a->elem, {}});
      }
    }
    ExprPtr u = universe(src_, cfg_);
    if (u->kind != K::BoolLit || u->value == 0) prologue.push_back(Stmt::assume(u));
    for (const auto& ac : cfg_.arrays) {
      for (const auto& c : ac.cells) prologue.push_back(Stmt::havoc(c.value));
      for (std::size_t i = 0; i < ac.cells.size(); ++i)
        for (std::size_t j = i + 1; j < ac.cells.size(); ++j) {
          const Cell& a = ac.cells[i];
          const Cell& b = ac.cells[j];
          if (!a.initial && !b.initial) continue;
          ExprPtr same_value = lang::binary(K::Eq, lang::var(a.value), lang::var(b.value));
          if (a.index == b.index) {
            prologue.push_back(Stmt::assume(same_value));
          } else {
            std::vector<ExprPtr> idx;
            for (const auto& x : a.index) idx.push_back(lang::var(x));
            prologue.push_back(Stmt::if_(index_match(idx, b), Stmt::seq({Stmt::assume(same_value)})));
          }
        }
    }

    observers_ = cfg_.observers;
    for (std::size_t k = 0; k < observers_.size(); ++k) check_observer(observers_[k]);

    Stmt body = statement(src_.body, sp);
    std::vector<Stmt> all = std::move(prologue);
    for (auto& s : body.children) all.push_back(std::move(s));
    out.body = Stmt::seq(std::move(all));
    for (const auto& f : flags_) {
      sp.observer_vars.push_back(f);
      out.locals.push_back({f, Type::boolean(), {}});
    }
    return sp;
  }

 private:
  void validate() {
    std::set<std::string> seen;
    for (const auto& ac : cfg_.arrays) {
      const lang::ArrayDecl* a = src_.array(ac.array);
      if (!a) throw TransformError("configuration references unknown array " + ac.array);
      if (ac.ordered && a->dims.size() != 1)
        throw TransformError("ordered cells require a 1-dimensional array: " + ac.array);
      for (const auto& c : ac.cells) {
        if (c.index.size() != a->dims.size())
          throw TransformError("cell of " + ac.array + " needs " + std::to_string(a->dims.size()) +
                               " index variable(s)");
        for (const auto& x : c.index) {
          if (src_.declares(x)) throw TransformError("index variable " + x + " is not fresh");
          if (owner_.count(x) && owner_[x] != ac.array)
            throw TransformError("index variable " + x + " shared between arrays");
          owner_[x] = ac.array;
        }
        if (src_.declares(c.value) || !seen.insert(c.value).second || owner_.count(c.value))
          throw TransformError("cell variable " + c.value + " is not fresh");
      }
    }
  }

  void check_observer(const Observer& o) {
    const lang::ArrayDecl* a = src_.array(o.array);
    if (!a) throw TransformError("observer references unknown array " + o.array);
    std::vector<std::string> names;
    lang::collect_names(o.predicate, names);
    for (const auto& n : names) {
      bool placeholder = false;
      for (std::size_t d = 0; d < a->dims.size(); ++d) placeholder |= n == access_index_name(d);
      if (placeholder || src_.scalar(n) || src_.enum_constant(n) || owner_.count(n)) continue;
      bool cell = false;
      for (const auto& ac : cfg_.arrays)
        for (const auto& c : ac.cells) cell |= c.value == n;
      if (!cell) throw TransformError("observer predicate references undeclared variable " + n);
    }
  }

  std::vector<Stmt> latch(int site, const std::string& array, const std::vector<ExprPtr>& idx, bool write) {
    std::vector<Stmt> out;
    for (std::size_t k = 0; k < observers_.size(); ++k) {
      const Observer& o = observers_[k];
      if (o.array != array || (o.site != -1 && o.site != site)) continue;
      if (o.on == Observer::Accesses::Reads ? write : o.on == Observer::Accesses::Writes && !write) continue;
      std::string name = o.name.empty() ? "obs$" + std::to_string(k) + "$s" + std::to_string(site)
                         : o.site != -1 ? o.name
                                        : o.name + "$s" + std::to_string(site);
      std::vector<std::pair<std::string, ExprPtr>> sub;
      for (std::size_t d = 0; d < idx.size(); ++d) sub.emplace_back(access_index_name(d), idx[d]);
      if (src_.declares(name) || owner_.count(name))
        throw TransformError("observer flag " + name + " is not fresh");
      flags_.push_back(name);
      ExprPtr pred = lang::rename_vars(o.predicate, sub);
      if (o.sticky) {
        out.push_back(Stmt::if_(pred, Stmt::seq({Stmt::assign(name, lang::bool_lit(true))})));
      } else {
        out.push_back(Stmt::assign(name, pred));
      }
      out.back().site = site;
    }
    return out;
  }

  void access(const Stmt& s, ScalarProgram& sp, std::vector<Stmt>& out) {
    bool write = s.kind == Stmt::Kind::Write;
    const std::string& array = write ? s.target : s.value->name;
    const std::vector<ExprPtr>& idx = write ? s.index : s.value->args;
    sp.accesses[s.site] = Access{s.site, array, idx, write};
    for (auto& l : latch(s.site, array, idx, write)) out.push_back(std::move(l));
    if (cfg_.bounds_checks) {
      Stmt bc = Stmt::bounds_check(in_range(idx, *src_.array(array)), s.pos);
      bc.site = s.site;
      out.push_back(std::move(bc));
    }
    const ArrayCells* cells = find_cells(cfg_, array);
    for (auto& t : write ? transform_write(s, cells) : transform_read(s, cells)) out.push_back(std::move(t));
  }

  Stmt statement(const Stmt& s, ScalarProgram& sp) {
    using SK = Stmt::Kind;
    switch (s.kind) {
      case SK::Seq: {
        std::vector<Stmt> out;
        for (const auto& c : s.children) {
          if (is_access(c)) {
            access(c, sp, out);
          } else {
            out.push_back(statement(c, sp));
          }
        }
        Stmt r = Stmt::seq(std::move(out));
        r.pos = s.pos;
        return r;
      }
      case SK::If: {
        Stmt r = s;
        r.children = {statement(s.children[0], sp), statement(s.children[1], sp)};
        return r;
      }
      case SK::While: {
        Stmt r = s;
        r.children = {statement(s.children[0], sp)};
        return r;
      }
      default:
        if (is_access(s)) {
          std::vector<Stmt> out;
          access(s, sp, out);
          return Stmt::seq(std::move(out));
        }
        return s;
    }
  }

  static bool is_access(const Stmt& s) {
    return s.kind == Stmt::Kind::Write ||
           (s.kind == Stmt::Kind::Assign && s.value->kind == K::Read);
  }

  const Program& src_;
  const IndexConfig& cfg_;
  std::map<std::string, std::string> owner_;
  std::vector<Observer> observers_;
  std::vector<std::string> flags_;
};

}  // namespace

std::vector<Stmt> transform_read(const Stmt& read, const ArrayCells* cells) {
  std::vector<Stmt> out;
  out.push_back(Stmt::havoc(read.target, read.pos));
  out.back().site = read.site;
  for (const Cell* c : current_cells(cells)) {
    Stmt a = Stmt::assume(lang::binary(K::Eq, lang::var(read.target), lang::var(c->value)));
    out.push_back(Stmt::if_(index_match(read.value->args, *c), Stmt::seq({std::move(a)})));
    out.back().site = read.site;
  }
  return out;
}

std::vector<Stmt> transform_write(const Stmt& write, const ArrayCells* cells) {
  std::vector<Stmt> out;
  for (const Cell* c : current_cells(cells)) {
    out.push_back(Stmt::if_(index_match(write.index, *c),
                            Stmt::seq({Stmt::assign(c->value, write.value)})));
    out.back().site = write.site;
  }
  return out;
}

ExprPtr universe(const Program& p, const IndexConfig& cfg) {
  std::vector<ExprPtr> cs;
  std::set<std::string> ranged;
  for (const auto& ac : cfg.arrays) {
    const lang::ArrayDecl* a = p.array(ac.array);
    if (!a) throw TransformError("configuration references unknown array " + ac.array);
    for (const auto& c : ac.cells)
      for (std::size_t d = 0; d < c.index.size(); ++d) {
        if (!ranged.insert(c.index[d]).second) continue;
        cs.push_back(lang::binary(K::Le, lang::int_lit(0), lang::var(c.index[d])));
        cs.push_back(lang::binary(K::Lt, lang::var(c.index[d]), a->dims[d]));
      }
    if (ac.ordered) {
      std::vector<const Cell*> cur = current_cells(&ac);
      for (std::size_t j = 1; j < cur.size(); ++j)
        cs.push_back(lang::binary(K::Lt, lang::var(cur[j - 1]->index[0]), lang::var(cur[j]->index[0])));
    }
  }
  if (cfg.focus) cs.push_back(cfg.focus);
  return lang::conjunction(cs);
}

ScalarProgram transform_program(const Program& p, const IndexConfig& cfg) {
  Program src = lang::decompose_accesses(p);
  return Transformer(src, cfg).run();
}

ScalarProgram instrument_observers(const ScalarProgram& sp, const std::vector<Observer>& obs) {
  IndexConfig cfg = sp.config;
  for (const auto& o : obs) cfg.observers.push_back(o);
  return Transformer(sp.source, cfg).run();
}

}  // namespace arrabs::transform
