#include "arrabs/lia/smtlib.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <variant>

namespace arrabs::lia {

namespace {

bool simple_symbol(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  static const std::string extra = "~!@$%^&*_-+=<>.?/";
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || extra.find(c) != std::string::npos;
  });
}

std::string symbol(const std::string& name) {
  return simple_symbol(name) ? name : "|" + name + "|";
}

std::string numeral(const Int& v) {
  return v < 0 ? "(- " + to_string(Int(-v)) + ")" : to_string(v);
}

std::string term(const Int& c, Var v) {
  if (c == 1) return symbol(v.name());
  return "(* " + to_string(c) + " " + symbol(v.name()) + ")";
}

// Sum of positive-coefficient terms plus a constant.
std::string sum(const LinExpr& e) {
  std::vector<std::string> parts;
  auto terms = e.terms();
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first.name() < b.first.name(); });
  for (const auto& [v, c] : terms) parts.push_back(term(c, v));
  if (e.constant() != 0 || parts.empty()) parts.push_back(numeral(e.constant()));
  if (parts.size() == 1) return parts.front();
  std::string s = "(+";
  for (const auto& p : parts) s += " " + p;
  return s + ")";
}

// Arbitrary expression, negative coefficients included.
std::string expr(const LinExpr& e) {
  std::vector<std::string> parts;
  auto terms = e.terms();
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first.name() < b.first.name(); });
  for (const auto& [v, c] : terms)
    parts.push_back(c == 1 ? symbol(v.name())
                           : "(* " + numeral(c) + " " + symbol(v.name()) + ")");
  if (e.constant() != 0 || parts.empty()) parts.push_back(numeral(e.constant()));
  if (parts.size() == 1) return parts.front();
  std::string s = "(+";
  for (const auto& p : parts) s += " " + p;
  return s + ")";
}

class Printer {
 public:
  explicit Printer(const FreeVars& fv) {
    for (auto v : fv.ints) taken_.insert(v.name());
    for (auto v : fv.bools) taken_.insert(v.name());
  }

  std::string print(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::True:
        return "true";
      case K::False:
        return "false";
      case K::Bool:
        return symbol(f.bool_var().name());
      case K::Atom:
        return atom(f.atom());
      case K::Not:
        return "(not " + print(f.body()) + ")";
      case K::And:
      case K::Or: {
        std::string s = f.kind() == K::And ? "(and" : "(or";
        for (const auto& k : f.children()) s += " " + print(k);
        return s + ")";
      }
      case K::Exists:
      case K::Forall: {
        FreeVars fv = free_vars(f.body());
        std::string s = f.kind() == K::Exists ? "(exists (" : "(forall (";
        for (std::size_t i = 0; i < f.bound().size(); ++i) {
          Var v = f.bound()[i];
          s += (i ? " (" : "(") + symbol(v.name()) +
               (fv.bools.contains(v) ? " Bool)" : " Int)");
          taken_.insert(v.name());
        }
        return s + ") " + print(f.body()) + ")";
      }
    }
    return "true";
  }

 private:
  std::string atom(const Atom& a) {
    if (a.kind() == Atom::Kind::Div) {
      std::string q = "q";
      for (int i = 1; taken_.contains(q); ++i) q = "q" + std::to_string(i);
      return "(exists ((" + q + " Int)) (= " + expr(a.expr()) + " (* " +
             to_string(a.modulus()) + " " + q + ")))";
    }
    LinExpr pos, neg;
    for (const auto& [v, c] : a.expr().terms()) {
      if (c > 0) pos.add_term(v, c);
      else neg.add_term(v, -c);
    }
    neg.set_constant(-a.expr().constant());
    if (pos.is_constant()) {
      neg.set_constant(0);
      return "(<= " + sum(neg) + " " + numeral(a.expr().constant()) + ")";
    }
    return "(>= " + sum(pos) + " " + expr(neg) + ")";
  }

  std::set<std::string> taken_;
};

// ---------------------------------------------------------------- parser

struct SExpr {
  bool atom = false;
  bool quoted = false;
  std::string text;
  std::vector<SExpr> list;
};

class Reader {
 public:
  explicit Reader(const std::string& s) : s_(s) {}

  std::vector<SExpr> all() {
    std::vector<SExpr> out;
    skip();
    while (pos_ < s_.size()) {
      out.push_back(read());
      skip();
    }
    return out;
  }

 private:
  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_[pos_] == ';') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip();
    if (pos_ >= s_.size()) throw SmtParseError("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      SExpr e;
      skip();
      while (pos_ < s_.size() && s_[pos_] != ')') {
        e.list.push_back(read());
        skip();
      }
      if (pos_ >= s_.size()) throw SmtParseError("unbalanced parenthesis");
      ++pos_;
      return e;
    }
    if (c == ')') throw SmtParseError("unexpected ')'");
    SExpr e;
    e.atom = true;
    if (c == '|') {
      std::size_t end = s_.find('|', pos_ + 1);
      if (end == std::string::npos) throw SmtParseError("unterminated quoted symbol");
      e.text = s_.substr(pos_ + 1, end - pos_ - 1);
      e.quoted = true;
      pos_ = end + 1;
      return e;
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
           s_[pos_] != '(' && s_[pos_] != ')' && s_[pos_] != ';')
      ++pos_;
    e.text = s_.substr(start, pos_ - start);
    return e;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

using Value = std::variant<LinExpr, Formula>;

class Builder {
 public:
  Formula script(const std::vector<SExpr>& cmds) {
    std::vector<Formula> asserts;
    for (const auto& c : cmds) {
      if (c.atom || c.list.empty() || !c.list[0].atom)
        throw SmtParseError("malformed command");
      const std::string& head = c.list[0].text;
      if (head == "declare-fun") {
        if (c.list.size() != 4 || !c.list[2].list.empty())
          throw SmtParseError("only nullary declarations are supported");
        declare(c.list[1].text, c.list[3].text);
      } else if (head == "declare-const") {
        if (c.list.size() != 3) throw SmtParseError("malformed declare-const");
        declare(c.list[1].text, c.list[2].text);
      } else if (head == "assert") {
        if (c.list.size() != 2) throw SmtParseError("malformed assert");
        asserts.push_back(formula(c.list[1]));
      } else if (head == "set-logic" || head == "set-info" || head == "set-option" ||
                 head == "check-sat" || head == "exit" || head == "get-model") {
        continue;
      } else {
        throw SmtParseError("unsupported command " + head);
      }
    }
    return f_and(std::move(asserts));
  }

 private:
  void declare(const std::string& name, const std::string& sort) {
    if (sort != "Int" && sort != "Bool") throw SmtParseError("unsupported sort " + sort);
    scope_.emplace_back(name, sort == "Bool");
  }

  std::optional<bool> lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) return it->second;
    return std::nullopt;
  }

  LinExpr integer(const SExpr& e) {
    Value v = value(e);
    if (auto* l = std::get_if<LinExpr>(&v)) return *l;
    throw SmtParseError("expected integer term");
  }

  Formula formula(const SExpr& e) {
    Value v = value(e);
    if (auto* f = std::get_if<Formula>(&v)) return *f;
    throw SmtParseError("expected boolean term");
  }

  static bool is_numeral(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(),
                                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  }

  std::optional<Formula> divisibility(const SExpr& e) {
    // (exists ((q Int)) (= E (* M q)))
    const auto& binders = e.list[1].list;
    if (binders.size() != 1 || binders[0].list.size() != 2 || binders[0].list[1].text != "Int")
      return std::nullopt;
    const std::string q = binders[0].list[0].text;
    const SExpr& body = e.list[2];
    if (body.atom || body.list.size() != 3 || body.list[0].text != "=") return std::nullopt;
    for (int side = 1; side <= 2; ++side) {
      const SExpr& prod = body.list[side];
      const SExpr& other = body.list[3 - side];
      if (prod.atom || prod.list.size() != 3 || prod.list[0].text != "*") continue;
      const SExpr* m = nullptr;
      if (prod.list[2].atom && prod.list[2].text == q && prod.list[1].atom &&
          is_numeral(prod.list[1].text))
        m = &prod.list[1];
      if (prod.list[1].atom && prod.list[1].text == q && prod.list[2].atom &&
          is_numeral(prod.list[2].text))
        m = &prod.list[2];
      if (!m) continue;
      scope_.emplace_back(q, false);
      LinExpr rhs = integer(other);
      scope_.pop_back();
      if (rhs.contains(Var::named(q))) return std::nullopt;
      return f_divides(Int(m->text), rhs);
    }
    return std::nullopt;
  }

  Value value(const SExpr& e) {
    if (e.atom) {
      if (!e.quoted && is_numeral(e.text)) return LinExpr(Int(e.text));
      if (!e.quoted && e.text == "true") return f_true();
      if (!e.quoted && e.text == "false") return f_false();
      auto sort = lookup(e.text);
      if (!sort) throw SmtParseError("undeclared symbol " + e.text);
      Var v = Var::named(e.text);
      if (*sort) return f_var(v);
      return LinExpr::of(v);
    }
    if (e.list.empty() || !e.list[0].atom) throw SmtParseError("malformed term");
    const std::string& op = e.list[0].text;
    const std::size_t n = e.list.size() - 1;
    auto arg = [&](std::size_t i) -> const SExpr& { return e.list[i + 1]; };

    if (op == "exists" || op == "forall") {
      if (n != 2) throw SmtParseError("malformed quantifier");
      if (op == "exists")
        if (auto d = divisibility(e)) return *d;
      std::vector<Var> vars;
      std::size_t mark = scope_.size();
      for (const auto& b : arg(0).list) {
        if (b.list.size() != 2) throw SmtParseError("malformed binder");
        declare(b.list[0].text, b.list[1].text);
        vars.push_back(Var::named(b.list[0].text));
      }
      Formula body = formula(arg(1));
      scope_.resize(mark);
      return op == "exists" ? f_exists(vars, body) : f_forall(vars, body);
    }
    if (op == "+") {
      LinExpr s;
      for (std::size_t i = 0; i < n; ++i) s += integer(arg(i));
      return s;
    }
    if (op == "-") {
      if (n == 1) return -integer(arg(0));
      LinExpr s = integer(arg(0));
      for (std::size_t i = 1; i < n; ++i) s -= integer(arg(i));
      return s;
    }
    if (op == "*") {
      LinExpr acc(1);
      for (std::size_t i = 0; i < n; ++i) {
        LinExpr t = integer(arg(i));
        if (t.is_constant())
          acc *= t.constant();
        else if (acc.is_constant())
          acc = t * acc.constant();
        else
          throw SmtParseError("nonlinear multiplication");
      }
      return acc;
    }
    if (op == ">=" || op == "<=" || op == ">" || op == "<") {
      std::vector<Formula> parts;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        LinExpr a = integer(arg(i)), b = integer(arg(i + 1));
        if (op == ">=") parts.push_back(f_geq(a, b));
        if (op == "<=") parts.push_back(f_le(a, b));
        if (op == ">") parts.push_back(f_gt(a, b));
        if (op == "<") parts.push_back(f_lt(a, b));
      }
      return f_and(std::move(parts));
    }
    if (op == "=" || op == "distinct") {
      if (n < 2) throw SmtParseError("arity of " + op);
      // (= (mod E M) 0)
      if (op == "=" && n == 2 && !arg(0).atom && arg(0).list.size() == 3 &&
          arg(0).list[0].text == "mod") {
        LinExpr r = integer(arg(1));
        LinExpr m = integer(arg(0).list[2]);
        if (r.is_constant() && r.constant() == 0 && m.is_constant())
          return f_divides(m.constant(), integer(arg(0).list[1]));
      }
      std::vector<Value> vals;
      for (std::size_t i = 0; i < n; ++i) vals.push_back(value(arg(i)));
      std::vector<Formula> parts;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          if (op == "=" && j != i + 1) continue;
          Formula eq;
          if (vals[i].index() != vals[j].index()) throw SmtParseError("sort mismatch in " + op);
          if (auto* a = std::get_if<LinExpr>(&vals[i]))
            eq = f_eq(*a, std::get<LinExpr>(vals[j]));
          else
            eq = f_iff(std::get<Formula>(vals[i]), std::get<Formula>(vals[j]));
          parts.push_back(op == "=" ? eq : f_not(eq));
        }
      return f_and(std::move(parts));
    }
    if (op == "not") {
      if (n != 1) throw SmtParseError("arity of not");
      return f_not(formula(arg(0)));
    }
    if (op == "and" || op == "or") {
      std::vector<Formula> parts;
      for (std::size_t i = 0; i < n; ++i) parts.push_back(formula(arg(i)));
      return op == "and" ? f_and(std::move(parts)) : f_or(std::move(parts));
    }
    if (op == "=>") {
      if (n < 2) throw SmtParseError("arity of =>");
      Formula r = formula(arg(n - 1));
      for (std::size_t i = n - 1; i-- > 0;) r = f_implies(formula(arg(i)), r);
      return r;
    }
    throw SmtParseError("unsupported operator " + op);
  }

  std::vector<std::pair<std::string, bool>> scope_;
};

}  // namespace

std::string to_smtlib(const Formula& f) {
  FreeVars fv = free_vars(f);
  std::vector<std::pair<std::string, bool>> decls;
  for (auto v : fv.ints) decls.emplace_back(v.name(), false);
  for (auto v : fv.bools) decls.emplace_back(v.name(), true);
  std::sort(decls.begin(), decls.end());
  std::ostringstream os;
  os << "(set-logic LIA)\n";
  for (const auto& [name, is_bool] : decls)
    os << "(declare-fun " << symbol(name) << " () " << (is_bool ? "Bool" : "Int") << ")\n";
  Printer p(fv);
  os << "(assert " << p.print(f) << ")\n(check-sat)\n";
  return os.str();
}

Formula parse_smtlib(const std::string& text) {
  Reader r(text);
  Builder b;
  return b.script(r.all());
}

}  // namespace arrabs::lia
