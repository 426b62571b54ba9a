#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace arrabs::lia {

/// Interned variable name. Comparison is by interning order, which is
/// deterministic for a given sequence of calls.
class Var {
 public:
  Var() = default;

  static Var named(std::string_view name);
  /// A variable whose name is guaranteed not to have been interned before.
  static Var fresh(std::string_view prefix);

  const std::string& name() const;
  std::uint32_t id() const { return id_; }
  bool valid() const { return id_ != kInvalid; }

  friend bool operator==(Var a, Var b) { return a.id_ == b.id_; }
  friend auto operator<=>(Var a, Var b) { return a.id_ <=> b.id_; }

 private:
  static constexpr std::uint32_t kInvalid = 0xffffffffu;
  explicit Var(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = kInvalid;
};

/// Orders variables by name; used wherever output must not depend on
/// interning history.
struct VarNameLess {
  bool operator()(Var a, Var b) const { return a.name() < b.name(); }
};

}  // namespace arrabs::lia

template <>
struct std::hash<arrabs::lia::Var> {
  std::size_t operator()(arrabs::lia::Var v) const noexcept { return v.id(); }
};
