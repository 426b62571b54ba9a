#pragma once

#include "arrabs/lang/ast.hpp"
#include "arrabs/transform/transform.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arrabs::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Strategy {
  enum class Kind { Auto, Abstract, ExactUnroll };
  Kind kind = Kind::Auto;
  int unroll = 0;  // ExactUnroll only

  /// "auto", "abstract" or "exact-unroll:K" with K >= 0.
  static Strategy parse(const std::string& text);
  std::string to_string() const;
};

enum class Reduce { None, Dual, DualBoth };

struct ObserverSpec {
  std::string name;
  std::string predicate;  // '@' and '@d' stand for the accessed index
  transform::Observer::Accesses on = transform::Observer::Accesses::All;
  bool sticky = false;
};

struct CellSpec {
  std::vector<std::string> index;
  std::string value;
  bool initial = false;
};

struct ArraySection {
  std::string array;
  std::size_t default_cells = 0;
  std::vector<CellSpec> cells;
  bool ordered = false;
  std::vector<ObserverSpec> observers;
};

/// Line-oriented `key = value` text, '#' starts a comment.
///
///   [array t]            cells = K | cell = x -> b | initial = x -> a
///                        ordered = true | observe[.reads|.writes] = name: pred
///                        mark[.reads|.writes] = name: pred   (sticky flag)
///   [analysis]           focus = expr (repeatable) | strategy = auto | abstract | exact-unroll:K
///                        widening_delay = N | partition_cap = N | max_unroll = K
///                        reduce = none | dual | dual-both | bounds_checks = bool
///                        guard_partitions = bool
struct Config {
  std::vector<ArraySection> arrays;  // empty: one cell per array
  /// Each focus is analyzed separately; targets are checked against all
  /// resulting invariants together.
  std::vector<std::string> focus;
  Strategy strategy;
  int widening_delay = 2;
  std::size_t partition_cap = 12;
  int max_unroll = 6;
  Reduce reduce = Reduce::None;
  bool bounds_checks = true;
  bool guard_partitions = true;
};

Config parse_config(const std::string& text);

/// Cells, observers and the focus-th focus (none when there are no focus
/// lines) for p. Throws ConfigError on unknown arrays or malformed
/// expressions.
transform::IndexConfig index_config(const Config& cfg, const lang::Program& p, std::size_t focus = 0);

}  // namespace arrabs::cli
