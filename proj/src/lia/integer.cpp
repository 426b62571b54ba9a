#include "arrabs/lia/integer.hpp"

#include <stdexcept>

namespace arrabs::lia {

Int floor_div(const Int& a, const Int& b) {
  if (b == 0) throw std::domain_error("floor_div by zero");
  Int q = a / b;
  Int r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

Int mod_floor(const Int& a, const Int& m) {
  Int am = abs(m);
  Int r = a % am;
  if (r < 0) r += am;
  return r;
}

Int abs(const Int& a) { return a < 0 ? Int(-a) : a; }

Int gcd(const Int& a, const Int& b) {
  Int x = abs(a), y = abs(b);
  while (y != 0) {
    Int t = x % y;
    x = std::move(y);
    y = std::move(t);
  }
  return x;
}

Int lcm(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

std::string to_string(const Int& v) { return v.str(); }

}  // namespace arrabs::lia
