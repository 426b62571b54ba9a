#pragma once

#include "arrabs/lang/ast.hpp"

#include <string>

namespace arrabs::lang {

/// Mini-language source; parse_program(to_source(p)) reproduces p.
std::string to_source(const Program& p);
std::string to_string(const ExprPtr& e);
std::string to_string(const Stmt& s, int indent = 0);

/// C-like rendering for external analyzers: havoc becomes
/// `x = random();`, assume/assert become calls.
std::string to_c_like(const Program& p);

}  // namespace arrabs::lang
