#pragma once

#include "arrabs/lang/ast.hpp"

namespace arrabs::lang {

/// True when s reads or writes an array only as `r = f[i..];` (r not among
/// the indices) or `f[i..] = v;`, with plain-variable indices and v a
/// variable or literal.
bool is_elementary(const Stmt& s);
bool all_accesses_elementary(const Program& p);

/// Rewrites every array access into an elementary one, introducing integer
/// temporaries tmp0, tmp1, ... for intermediate values. Reads inside
/// conditions are hoisted before the statement; for loops they are
/// re-evaluated at the end of the body. Already elementary programs are
/// returned unchanged.
Program decompose_accesses(const Program& p);

/// Numbers array access statements in pre-order (Stmt::site).
void number_access_sites(Program& p);

}  // namespace arrabs::lang
