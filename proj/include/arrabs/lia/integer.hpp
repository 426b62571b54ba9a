#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace arrabs::lia {

/// Unbounded mathematical integer.
using Int = boost::multiprecision::cpp_int;

Int floor_div(const Int& a, const Int& b);
Int ceil_div(const Int& a, const Int& b);
/// Representative of a modulo |m| in [0, |m|).
Int mod_floor(const Int& a, const Int& m);
Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);
Int abs(const Int& a);

std::string to_string(const Int& v);

}  // namespace arrabs::lia
