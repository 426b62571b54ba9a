#include "arrabs/cli/config.hpp"

#include "arrabs/lang/parser.hpp"

#include <charconv>
#include <sstream>

namespace arrabs::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$')) return false;
  return true;
}

class LineParser {
 public:
  explicit LineParser(int line) : line_(line) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("line " + std::to_string(line_) + ": " + msg);
  }

  long long integer(const std::string& v, long long min) const {
    long long x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) fail("expected an integer, got '" + v + "'");
    if (x < min) fail("value " + v + " below " + std::to_string(min));
    return x;
  }

  bool boolean(const std::string& v) const {
    if (v == "true") return true;
    if (v == "false") return false;
    fail("expected true or false, got '" + v + "'");
  }

  CellSpec cell(const std::string& v, bool initial) const {
    std::size_t arrow = v.find("->");
    if (arrow == std::string::npos) fail("expected 'index, ... -> value'");
    CellSpec c;
    c.index = split(v.substr(0, arrow), ',');
    c.value = trim(v.substr(arrow + 2));
    c.initial = initial;
    for (const auto& i : c.index)
      if (!is_identifier(i)) fail("bad index variable '" + i + "'");
    if (!is_identifier(c.value)) fail("bad value variable '" + c.value + "'");
    return c;
  }

  ObserverSpec observer(const std::string& key, const std::string& v) const {
    ObserverSpec o;
    std::size_t dot = key.find('.');
    std::string kind = key.substr(0, dot);
    o.sticky = kind == "mark";
    if (dot != std::string::npos) {
      std::string on = key.substr(dot + 1);
      if (on == "reads")
        o.on = transform::Observer::Accesses::Reads;
      else if (on == "writes")
        o.on = transform::Observer::Accesses::Writes;
      else
        fail("unknown access kind '" + on + "'");
    }
    std::size_t colon = v.find(':');
    if (colon == std::string::npos) fail("expected 'name: predicate'");
    o.name = trim(v.substr(0, colon));
    o.predicate = trim(v.substr(colon + 1));
    if (!is_identifier(o.name)) fail("bad observer name '" + o.name + "'");
    if (o.predicate.empty()) fail("empty observer predicate");
    return o;
  }

 private:
  int line_;
};

std::string expand_access(const std::string& pred) {
  std::string out;
  for (std::size_t k = 0; k < pred.size(); ++k) {
    if (pred[k] != '@') {
      out += pred[k];
      continue;
    }
    std::size_t d = 0;
    while (k + 1 < pred.size() && std::isdigit(static_cast<unsigned char>(pred[k + 1])))
      d = d * 10 + static_cast<std::size_t>(pred[++k] - '0');
    out += transform::access_index_name(d);
  }
  return out;
}

lang::ExprPtr expression(const std::string& text, const std::string& what) {
  try {
    return lang::parse_expr(text);
  } catch (const std::exception& e) {
    throw ConfigError("bad " + what + " '" + text + "': " + e.what());
  }
}

}  // namespace

Strategy Strategy::parse(const std::string& text) {
  Strategy s;
  std::string t = trim(text);
  if (t == "auto") return s;
  if (t == "abstract") {
    s.kind = Kind::Abstract;
    return s;
  }
  const std::string prefix = "exact-unroll:";
  if (t.rfind(prefix, 0) == 0) {
    std::string k = t.substr(prefix.size());
    int x = 0;
    auto [p, ec] = std::from_chars(k.data(), k.data() + k.size(), x);
    if (ec == std::errc() && p == k.data() + k.size() && x >= 0) {
      s.kind = Kind::ExactUnroll;
      s.unroll = x;
      return s;
    }
  }
  throw ConfigError("unknown strategy '" + t + "' (auto, abstract, exact-unroll:K)");
}

std::string Strategy::to_string() const {
  switch (kind) {
    case Kind::Auto: return "auto";
    case Kind::Abstract: return "abstract";
    case Kind::ExactUnroll: return "exact-unroll:" + std::to_string(unroll);
  }
  return "";
}

Config parse_config(const std::string& text) {
  Config cfg;
  enum class Section { None, Array, Analysis } section = Section::None;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    LineParser lp(line);
    std::string s = trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') lp.fail("unterminated section header");
      std::vector<std::string> words;
      std::istringstream hs(s.substr(1, s.size() - 2));
      for (std::string w; hs >> w;) words.push_back(w);
      if (words.size() == 2 && words[0] == "array" && is_identifier(words[1])) {
        for (const auto& a : cfg.arrays)
          if (a.array == words[1]) lp.fail("duplicate section for array " + words[1]);
        cfg.arrays.push_back({});
        cfg.arrays.back().array = words[1];
        section = Section::Array;
      } else if (words.size() == 1 && words[0] == "analysis") {
        section = Section::Analysis;
      } else {
        lp.fail("unknown section " + s);
      }
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) lp.fail("expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (section == Section::Array) {
      ArraySection& a = cfg.arrays.back();
      if (key == "cells")
        a.default_cells = static_cast<std::size_t>(lp.integer(value, 0));
      else if (key == "cell" || key == "initial")
        a.cells.push_back(lp.cell(value, key == "initial"));
      else if (key == "ordered")
        a.ordered = lp.boolean(value);
      else if (key.rfind("observe", 0) == 0 || key.rfind("mark", 0) == 0)
        a.observers.push_back(lp.observer(key, value));
      else
        lp.fail("unknown array key '" + key + "'");
    } else if (section == Section::Analysis) {
      if (key == "focus") {
        if (value.empty()) lp.fail("empty focus");
        cfg.focus.push_back(value);
      } else if (key == "strategy") {
        try {
          cfg.strategy = Strategy::parse(value);
        } catch (const ConfigError& e) {
          lp.fail(e.what());
        }
      } else if (key == "widening_delay") {
        cfg.widening_delay = static_cast<int>(lp.integer(value, 0));
      } else if (key == "partition_cap") {
        cfg.partition_cap = static_cast<std::size_t>(lp.integer(value, 0));
      } else if (key == "max_unroll") {
        cfg.max_unroll = static_cast<int>(lp.integer(value, 0));
      } else if (key == "reduce") {
        if (value == "none")
          cfg.reduce = Reduce::None;
        else if (value == "dual")
          cfg.reduce = Reduce::Dual;
        else if (value == "dual-both")
          cfg.reduce = Reduce::DualBoth;
        else
          lp.fail("unknown reduction '" + value + "'");
      } else if (key == "bounds_checks") {
        cfg.bounds_checks = lp.boolean(value);
      } else if (key == "guard_partitions") {
        cfg.guard_partitions = lp.boolean(value);
      } else {
        lp.fail("unknown analysis key '" + key + "'");
      }
    } else {
      lp.fail("key outside of a section");
    }
  }
  return cfg;
}

transform::IndexConfig index_config(const Config& cfg, const lang::Program& p, std::size_t focus) {
  transform::IndexConfig out;
  out.bounds_checks = cfg.bounds_checks;
  if (cfg.arrays.empty())
    for (const auto& a : p.arrays) out.arrays.push_back(transform::default_cells(p, a.name, 1));
  for (const auto& s : cfg.arrays) {
    const lang::ArrayDecl* decl = p.array(s.array);
    if (!decl) throw ConfigError("configured array " + s.array + " is not declared by " + p.name);
    transform::ArrayCells ac = transform::default_cells(p, s.array, s.default_cells, s.ordered);
    for (const auto& c : s.cells) {
      if (c.index.size() != decl->dims.size())
        throw ConfigError("cell " + c.value + " of " + s.array + " needs " + std::to_string(decl->dims.size()) +
                          " index variables");
      ac.cells.push_back({c.index, c.value, c.initial});
    }
    out.arrays.push_back(std::move(ac));
    for (const auto& o : s.observers) {
      transform::Observer obs;
      obs.array = s.array;
      obs.predicate = expression(expand_access(o.predicate), "observer predicate");
      obs.name = o.name;
      obs.on = o.on;
      obs.sticky = o.sticky;
      out.observers.push_back(std::move(obs));
    }
  }
  if (focus < cfg.focus.size()) out.focus = expression(cfg.focus[focus], "focus");
  return out;
}

}  // namespace arrabs::cli
