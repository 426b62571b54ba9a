#include "arrabs/lia/var.hpp"

#include <deque>
#include <mutex>
#include <unordered_map>

namespace arrabs::lia {
namespace {

struct InternTable {
  std::mutex mu;
  std::deque<std::string> names;
  std::unordered_map<std::string, std::uint32_t> ids;
  std::uint64_t fresh_counter = 0;
};

InternTable& table() {
  static InternTable t;
  return t;
}

std::uint32_t intern_locked(InternTable& t, std::string_view name) {
  auto it = t.ids.find(std::string(name));
  if (it != t.ids.end()) return it->second;
  auto id = static_cast<std::uint32_t>(t.names.size());
  t.names.emplace_back(name);
  t.ids.emplace(t.names.back(), id);
  return id;
}

}  // namespace

Var Var::named(std::string_view name) {
  auto& t = table();
  std::lock_guard lock(t.mu);
  return Var(intern_locked(t, name));
}

Var Var::fresh(std::string_view prefix) {
  auto& t = table();
  std::lock_guard lock(t.mu);
  for (;;) {
    std::string candidate =
        std::string(prefix) + "!" + std::to_string(t.fresh_counter++);
    if (!t.ids.contains(candidate)) return Var(intern_locked(t, candidate));
  }
}

const std::string& Var::name() const {
  static const std::string invalid = "<invalid>";
  if (!valid()) return invalid;
  auto& t = table();
  std::lock_guard lock(t.mu);
  return t.names[id_];
}

}  // namespace arrabs::lia
