#pragma once

#include "arrabs/lia/formula.hpp"

#include <stdexcept>
#include <string>

namespace arrabs::lia {

class SmtParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SMT-LIB 2 script: (set-logic LIA), declarations of the free variables,
/// one (assert ...) and (check-sat). Divisibility m | e is written as
/// (exists ((q Int)) (= e (* m q))).
std::string to_smtlib(const Formula& f);

/// Reads the conjunction of all assertions of a script in the fragment
/// produced by to_smtlib (plus common arithmetic sugar).
Formula parse_smtlib(const std::string& text);

}  // namespace arrabs::lia
