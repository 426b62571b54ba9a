#include "arrabs/lia/budget.hpp"

namespace arrabs::lia {

Limits Limits::with_timeout(std::chrono::milliseconds ms) {
  Limits l;
  l.deadline = std::chrono::steady_clock::now() + ms;
  return l;
}

void Budget::tick(std::size_t n) {
  used_ += n;
  if (used_ > limits_.node_cap)
    throw BudgetExceeded("node budget exhausted");
  since_clock_ += n;
  if (limits_.deadline && since_clock_ >= 256) {
    since_clock_ = 0;
    if (std::chrono::steady_clock::now() > *limits_.deadline)
      throw BudgetExceeded("time budget exhausted");
  }
}

}  // namespace arrabs::lia
