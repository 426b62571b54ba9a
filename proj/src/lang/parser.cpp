#include "arrabs/lang/parser.hpp"

#include "arrabs/lang/decompose.hpp"

#include <cctype>

namespace arrabs::lang {

LangError::LangError(Pos pos, const std::string& msg)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.col) +
                         ": " + msg),
      pos_(pos),
      msg_(msg) {}

namespace {

struct Token {
  enum class Kind { Ident, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  Pos pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip();
      Token t;
      t.pos = {line_, col_};
      if (i_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      char c = s_[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) ||
                                  s_[i_] == '_' || s_[i_] == '$'))
          advance();
        while (i_ < s_.size() && s_[i_] == '\'') advance();
        t.kind = Token::Kind::Ident;
        t.text = s_.substr(start, i_ - start);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) advance();
        t.kind = Token::Kind::Int;
        t.text = s_.substr(start, i_ - start);
      } else {
        static const char* puncts[] = {"==>", "==", "!=", "<=", ">=", "&&", "||", "++",
                                       "--",  "+=", "-=", "(",  ")",  "{",  "}",  "[",
                                       "]",   ";",  ",",  ":",  "=",  "<",  ">",  "+",
                                       "-",   "*",  "!"};
        bool found = false;
        for (const char* p : puncts) {
          std::string ps(p);
          if (s_.compare(i_, ps.size(), ps) == 0) {
            t.kind = Token::Kind::Punct;
            t.text = ps;
            for (std::size_t k = 0; k < ps.size(); ++k) advance();
            found = true;
            break;
          }
        }
        if (!found)
          throw LangError(t.pos, std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        advance();
      } else if (s_.compare(i_, 2, "//") == 0) {
        while (i_ < s_.size() && s_[i_] != '\n') advance();
      } else if (s_.compare(i_, 2, "/*") == 0) {
        Pos start{line_, col_};
        advance();
        advance();
        while (i_ < s_.size() && s_.compare(i_, 2, "*/") != 0) advance();
        if (i_ >= s_.size()) throw LangError(start, "unterminated comment");
        advance();
        advance();
      } else {
        break;
      }
    }
  }

  const std::string& s_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  Program program() {
    Program p;
    while (is_word("enum")) p.enums.push_back(enum_decl());
    expect_word("proc");
    p.name = ident("procedure name");
    expect("(");
    if (!is(")")) {
      do {
        VarDecl d;
        d.pos = peek().pos;
        d.name = ident("parameter name");
        expect(":");
        d.type = type();
        p.params.push_back(std::move(d));
      } while (accept(","));
    }
    expect(")");
    Pos body_pos = peek().pos;
    expect("{");
    std::vector<Stmt> body;
    while (!is("}")) {
      if (is_word("var")) {
        next();
        std::vector<std::pair<std::string, Pos>> names;
        do {
          Pos pos = peek().pos;
          names.emplace_back(ident("variable name"), pos);
        } while (accept(","));
        expect(":");
        Type ty = type();
        expect(";");
        for (auto& [n, pos] : names) p.locals.push_back({n, ty, pos});
      } else if (is_word("array")) {
        next();
        ArrayDecl a;
        a.pos = peek().pos;
        a.name = ident("array name");
        while (accept("[")) {
          a.dims.push_back(expr());
          expect("]");
        }
        if (a.dims.empty()) throw LangError(a.pos, "array needs at least one dimension");
        expect(":");
        a.elem = type();
        expect(";");
        p.arrays.push_back(std::move(a));
      } else if (is_word("enum")) {
        p.enums.push_back(enum_decl());
      } else {
        body.push_back(statement());
      }
    }
    expect("}");
    p.body = Stmt::seq(std::move(body));
    p.body.pos = body_pos;
    if (is_word("ensures")) {
      next();
      Target t;
      if (is_word("forall")) {
        next();
        do t.bound.push_back(ident("bound variable"));
        while (accept(","));
        expect(":");
      }
      t.body = expr();
      expect(";");
      p.target = std::move(t);
    }
    if (peek().kind != Token::Kind::End) fail("unexpected '" + peek().text + "' after procedure");
    return p;
  }

  ExprPtr standalone_expr() {
    ExprPtr e = expr();
    accept(";");
    if (peek().kind != Token::Kind::End) fail("unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return t_[std::min(i_ + k, t_.size() - 1)];
  }
  const Token& next() { return t_[std::min(i_++, t_.size() - 1)]; }
  bool is(const char* p) const {
    return peek().kind == Token::Kind::Punct && peek().text == p;
  }
  bool is_word(const char* w) const {
    return peek().kind == Token::Kind::Ident && peek().text == w;
  }
  bool accept(const char* p) {
    if (!is(p)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw LangError(peek().pos, msg); }
  void expect(const char* p) {
    if (!accept(p))
      fail(std::string("expected '") + p + "' but found " +
           (peek().kind == Token::Kind::End ? "end of input" : "'" + peek().text + "'"));
  }
  void expect_word(const char* w) {
    if (!is_word(w)) fail(std::string("expected '") + w + "'");
    next();
  }

  static bool keyword(const std::string& s) {
    static const char* kws[] = {"proc",   "var",     "array",  "enum",   "int",
                                "bool",   "if",      "else",   "while",  "havoc",
                                "assume", "assert",  "ensures", "forall", "exists",
                                "true",   "false",   "old",    "divides", "boundscheck",
                                "random"};
    for (const char* k : kws)
      if (s == k) return true;
    return false;
  }

  std::string ident(const char* what) {
    if (peek().kind != Token::Kind::Ident || keyword(peek().text))
      fail(std::string("expected ") + what);
    return next().text;
  }

  Type type() {
    if (is_word("int")) {
      next();
      return Type::integer();
    }
    if (is_word("bool")) {
      next();
      return Type::boolean();
    }
    return Type::enumeration(ident("type"));
  }

  EnumDecl enum_decl() {
    expect_word("enum");
    EnumDecl e;
    e.pos = peek().pos;
    e.name = ident("enum name");
    expect("{");
    do e.values.push_back(ident("enum constant"));
    while (accept(","));
    expect("}");
    accept(";");
    return e;
  }

  // Branch and loop bodies are always sequences.
  Stmt body() {
    Stmt s = block();
    if (s.kind == Stmt::Kind::Seq) return s;
    Pos pos = s.pos;
    Stmt wrapped = Stmt::seq({std::move(s)});
    wrapped.pos = pos;
    return wrapped;
  }

  Stmt block() {
    if (is("{")) {
      Pos pos = next().pos;
      std::vector<Stmt> ss;
      while (!is("}")) {
        if (peek().kind == Token::Kind::End) fail("unterminated block");
        ss.push_back(statement());
      }
      next();
      Stmt s = Stmt::seq(std::move(ss));
      s.pos = pos;
      return s;
    }
    return statement();
  }

  ExprPtr paren_cond() {
    expect("(");
    ExprPtr c = expr();
    expect(")");
    return c;
  }

  Stmt statement() {
    Pos pos = peek().pos;
    if (is("{")) return block();
    if (is_word("if")) {
      next();
      ExprPtr c = paren_cond();
      Stmt then = body();
      Stmt otherwise = Stmt::seq();
      if (is_word("else")) {
        next();
        otherwise = body();
      }
      return Stmt::if_(c, std::move(then), std::move(otherwise), pos);
    }
    if (is_word("while")) {
      next();
      ExprPtr c = paren_cond();
      return Stmt::while_(c, body(), pos);
    }
    if (is_word("havoc")) {
      next();
      std::string x = ident("variable");
      expect(";");
      return Stmt::havoc(x, pos);
    }
    for (auto [w, k] : {std::pair{"assume", Stmt::Kind::Assume},
                        std::pair{"assert", Stmt::Kind::Assert},
                        std::pair{"boundscheck", Stmt::Kind::BoundsCheck}}) {
      if (is_word(w)) {
        next();
        ExprPtr c = paren_cond();
        expect(";");
        Stmt s = k == Stmt::Kind::Assume   ? Stmt::assume(c, pos)
                 : k == Stmt::Kind::Assert ? Stmt::assert_(c, pos)
                                           : Stmt::bounds_check(c, pos);
        return s;
      }
    }
    std::string x = ident("statement");
    if (is("[")) {
      std::vector<ExprPtr> idx;
      while (accept("[")) {
        idx.push_back(expr());
        expect("]");
      }
      expect("=");
      ExprPtr v = expr();
      expect(";");
      return Stmt::write(x, std::move(idx), v, pos);
    }
    if (is("++") || is("--")) {
      bool inc = next().text == "++";
      expect(";");
      return Stmt::assign(x, binary(inc ? Expr::Kind::Add : Expr::Kind::Sub, var(x, pos),
                                    int_lit(1, pos), pos),
                          pos);
    }
    if (is("+=") || is("-=")) {
      bool add = next().text == "+=";
      ExprPtr v = expr();
      expect(";");
      return Stmt::assign(
          x, binary(add ? Expr::Kind::Add : Expr::Kind::Sub, var(x, pos), v, pos), pos);
    }
    expect("=");
    if (is_word("random") && peek(1).text == "(") {
      next();
      expect("(");
      expect(")");
      expect(";");
      return Stmt::havoc(x, pos);
    }
    ExprPtr v = expr();
    expect(";");
    return Stmt::assign(x, v, pos);
  }

  ExprPtr expr() {
    if (is_word("forall") || is_word("exists")) {
      Pos pos = peek().pos;
      auto k = next().text == "forall" ? Expr::Kind::Forall : Expr::Kind::Exists;
      std::vector<std::string> vars;
      do vars.push_back(ident("bound variable"));
      while (accept(","));
      expect(":");
      return quantified(k, std::move(vars), expr(), pos);
    }
    return implies();
  }

  ExprPtr implies() {
    ExprPtr a = disjunction();
    if (is("==>")) {
      Pos pos = next().pos;
      return binary(Expr::Kind::Implies, a, expr(), pos);
    }
    return a;
  }

  ExprPtr disjunction() {
    ExprPtr a = conj();
    while (is("||")) {
      Pos pos = next().pos;
      a = binary(Expr::Kind::Or, a, conj(), pos);
    }
    return a;
  }

  ExprPtr conj() {
    ExprPtr a = comparison();
    while (is("&&")) {
      Pos pos = next().pos;
      a = binary(Expr::Kind::And, a, comparison(), pos);
    }
    return a;
  }

  ExprPtr comparison() {
    ExprPtr a = additive();
    static const std::pair<const char*, Expr::Kind> ops[] = {
        {"==", Expr::Kind::Eq}, {"!=", Expr::Kind::Ne}, {"<=", Expr::Kind::Le},
        {">=", Expr::Kind::Ge}, {"<", Expr::Kind::Lt},  {">", Expr::Kind::Gt}};
    for (const auto& [p, k] : ops) {
      if (is(p)) {
        Pos pos = next().pos;
        ExprPtr b = additive();
        for (const auto& [p2, k2] : ops)
          if (is(p2)) fail("comparison operators do not chain");
        return binary(k, a, b, pos);
      }
    }
    return a;
  }

  ExprPtr additive() {
    ExprPtr a = multiplicative();
    while (is("+") || is("-")) {
      Pos pos = peek().pos;
      auto k = next().text == "+" ? Expr::Kind::Add : Expr::Kind::Sub;
      a = binary(k, a, multiplicative(), pos);
    }
    return a;
  }

  ExprPtr multiplicative() {
    ExprPtr a = prefix();
    while (is("*")) {
      Pos pos = next().pos;
      a = binary(Expr::Kind::Mul, a, prefix(), pos);
    }
    return a;
  }

  ExprPtr prefix() {
    Pos pos = peek().pos;
    if (accept("-")) {
      if (peek().kind == Token::Kind::Int) return int_lit(-Int(next().text), pos);
      return unary(Expr::Kind::Neg, prefix(), pos);
    }
    if (accept("!")) return unary(Expr::Kind::Not, prefix(), pos);
    if (is_word("forall") || is_word("exists")) return expr();
    return primary();
  }

  std::vector<ExprPtr> indices() {
    std::vector<ExprPtr> idx;
    while (accept("[")) {
      idx.push_back(expr());
      expect("]");
    }
    return idx;
  }

  ExprPtr primary() {
    Pos pos = peek().pos;
    if (peek().kind == Token::Kind::Int) return int_lit(Int(next().text), pos);
    if (accept("(")) {
      ExprPtr e = expr();
      expect(")");
      return e;
    }
    if (is_word("true") || is_word("false")) return bool_lit(next().text == "true", pos);
    if (is_word("old")) {
      next();
      expect("(");
      std::string a = ident("array name");
      expect(")");
      if (!is("[")) fail("expected '[' after old(...)");
      return read(a, indices(), true, pos);
    }
    if (is_word("divides")) {
      next();
      expect("(");
      bool neg = accept("-");
      if (peek().kind != Token::Kind::Int) fail("expected integer modulus");
      Int m(next().text);
      if (neg) m = -m;
      expect(",");
      ExprPtr e = expr();
      expect(")");
      return divides(m, e, pos);
    }
    std::string x = ident("expression");
    if (is("[")) return read(x, indices(), false, pos);
    return var(x, pos);
  }

  std::vector<Token> t_;
  std::size_t i_ = 0;
};

}  // namespace

Program parse_program(const std::string& text) {
  Parser p(Lexer(text).run());
  Program prog = p.program();
  check_program(prog);
  number_access_sites(prog);
  return prog;
}

ExprPtr parse_expr(const std::string& text) {
  Parser p(Lexer(text).run());
  return p.standalone_expr();
}

}  // namespace arrabs::lang
