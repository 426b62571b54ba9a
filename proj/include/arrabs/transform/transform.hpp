#pragma once

#include "arrabs/lang/ast.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace arrabs::transform {

using lang::ExprPtr;
using lang::Program;
using lang::Stmt;

/// A symbolic position of an array (one index variable per dimension) and
/// the scalar holding its content. Initial cells hold the content at
/// program start and are never updated.
struct Cell {
  std::vector<std::string> index;
  std::string value;
  bool initial = false;
};

struct ArrayCells {
  std::string array;
  std::vector<Cell> cells;  // empty: the array is dropped
  bool ordered = false;     // index(cell 0) < index(cell 1) < ... (1-d only)
};

/// Latches `predicate` into a fresh boolean at every access of `array`
/// (or only at `site` when it is not -1, and only at accesses of the
/// selected kind). The predicate may mention the
/// accessed index as acc$0, acc$1, ... (one per dimension).
struct Observer {
  enum class Accesses { All, Reads, Writes };

  std::string array;
  ExprPtr predicate;
  int site = -1;
  std::string name;  // optional flag name (suffixed by the site when reused)
  Accesses on = Accesses::All;
  /// Sticky flags become true at the first access satisfying the predicate
  /// and stay true; plain flags hold the predicate's value at the latest
  /// access.
  bool sticky = false;
};

struct IndexConfig {
  std::vector<ArrayCells> arrays;  // arrays not listed are dropped
  ExprPtr focus;                   // optional U over index variables and params
  std::vector<Observer> observers;
  bool bounds_checks = true;       // emit boundscheck before every access
};

class TransformError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Name of the placeholder for dimension d of the accessed index.
std::string access_index_name(std::size_t d);

/// Cells named `{array}${j}$x{d}` and `{array}${j}$v` for j < k.
ArrayCells default_cells(const Program& p, const std::string& array, std::size_t k,
                         bool ordered = false);

struct Access {
  int site = -1;
  std::string array;
  std::vector<ExprPtr> index;
  bool write = false;
};

struct ScalarProgram {
  Program program;  // no arrays, no target
  Program source;   // decomposed input
  IndexConfig config;
  std::vector<std::string> index_vars;
  std::vector<std::string> cell_vars;
  std::vector<std::string> observer_vars;
  std::map<int, Access> accesses;
};

/// `havoc r; if (i == x_j) { assume(r == b_j); } ...` over current cells.
std::vector<Stmt> transform_read(const Stmt& read, const ArrayCells* cells);
/// `if (i == x_j) { b_j = r; } ...` over current cells.
std::vector<Stmt> transform_write(const Stmt& write, const ArrayCells* cells);

/// Universe of the index variables: ranges, ordering, and the focus.
ExprPtr universe(const Program& p, const IndexConfig& cfg);

ScalarProgram transform_program(const Program& p, const IndexConfig& cfg);

/// Re-transforms with additional observers.
ScalarProgram instrument_observers(const ScalarProgram& sp, const std::vector<Observer>& obs);

}  // namespace arrabs::transform
