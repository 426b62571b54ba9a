#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <stdexcept>

namespace arrabs::lia {

/// Raised when a decision procedure runs out of its resource allowance.
/// Callers treat it as "unknown", never as an answer.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Limits {
  std::size_t node_cap = 4'000'000;
  std::size_t dnf_cap = 20'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  static Limits with_timeout(std::chrono::milliseconds ms);
};

/// Work counter shared by the recursive procedures of one query.
class Budget {
 public:
  explicit Budget(const Limits& limits) : limits_(limits) {}

  void tick(std::size_t n = 1);
  const Limits& limits() const { return limits_; }
  std::size_t used() const { return used_; }

 private:
  Limits limits_;
  std::size_t used_ = 0;
  std::size_t since_clock_ = 0;
};

}  // namespace arrabs::lia
